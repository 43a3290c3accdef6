"""Finite abelian groups presented by independent generators.

Elements are exponent tuples relative to the generator list; the group law
is componentwise addition mod the orders.  Layer groups built by rayclass
always carry prime-power generator orders, which makes the p-Sylow /
prime-to-p split a partition of coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class AbelianGroup:
    orders: tuple

    @property
    def identity(self):
        return (0,) * len(self.orders)

    @property
    def order(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    @property
    def exponent(self) -> int:
        n = 1
        for o in self.orders:
            n = n * o // gcd(n, o)
        return n

    def mul(self, a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, self.orders))

    def inv(self, a):
        return tuple((-x) % o for x, o in zip(a, self.orders))

    def pow(self, a, n: int):
        return tuple((x * n) % o for x, o in zip(a, self.orders))

    def elements(self):
        return itertools.product(*(range(o) for o in self.orders))

    def element_order(self, a) -> int:
        n = 1
        for x, o in zip(a, self.orders):
            d = o // gcd(x, o)
            n = n * d // gcd(n, d)
        return n

    def generator_tuple(self, i):
        return tuple(int(j == i) for j in range(len(self.orders)))

    def is_trivial(self) -> bool:
        return self.order == 1

    def p_partition(self, p: int):
        """(delta_indices, p_indices): coordinates of prime-to-p and p-power
        order.  Requires every generator order to be a prime power or 1."""
        delta, ppart = [], []
        for i, o in enumerate(self.orders):
            if o % p == 0:
                v = o
                while v % p == 0:
                    v //= p
                if v != 1:
                    raise ValueError("generator orders must be prime powers for the p-split")
                ppart.append(i)
            else:
                delta.append(i)
        return tuple(delta), tuple(ppart)

    def subgroup_span(self, gens) -> frozenset:
        """All elements of the subgroup generated by gens (BFS)."""
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(seen)


def direct_product(g1: AbelianGroup, g2: AbelianGroup) -> AbelianGroup:
    return AbelianGroup(g1.orders + g2.orders)


TRIVIAL_GROUP = AbelianGroup(())
