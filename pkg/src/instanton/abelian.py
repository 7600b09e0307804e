"""Finitely generated abelian groups in invariant-factor form.

Houses H^2(Y;Z) for rational homology spheres (finite) and H^2(W;Z) for
cobordisms (finite torsion part plus free rank).  Elements are integer
coordinate tuples: torsion coordinates reduced modulo their factor,
free coordinates unconstrained.
"""

from __future__ import annotations

import itertools

from .matrices import SparseMatrix, smith_normal_form
from .rings import ZZ


class AbelianGroupError(ValueError):
    pass


class FinAbGroup:
    """Z/d1 x ... x Z/dk x Z^r with d1 | d2 | ... | dk, all di >= 2."""

    def __init__(self, factors, free_rank=0):
        factors = [int(d) for d in factors]
        for d in factors:
            if d < 2:
                raise AbelianGroupError(f"invariant factor {d} < 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise AbelianGroupError(f"divisibility chain fails: {a} does not divide {b}")
        if free_rank < 0:
            raise AbelianGroupError("negative free rank")
        self.factors = tuple(factors)
        self.free_rank = int(free_rank)

    @classmethod
    def from_moduli(cls, moduli, free_rank=0):
        """Normalize an arbitrary list of cyclic orders to invariant factors."""
        moduli = [int(m) for m in moduli]
        extra_free = moduli.count(0)
        moduli = [m for m in moduli if m != 0]
        if not moduli:
            return cls([], free_rank + extra_free)
        A = SparseMatrix(ZZ, len(moduli), len(moduli),
                         {(i, i): m for i, m in enumerate(moduli)})
        snf = smith_normal_form(A)
        factors = [d for d in snf.diagonal if d > 1]
        return cls(factors, free_rank + extra_free)

    @property
    def rank(self):
        return len(self.factors) + self.free_rank

    @property
    def torsion_order(self):
        n = 1
        for d in self.factors:
            n *= d
        return n

    def is_finite(self):
        return self.free_rank == 0

    def order(self):
        if not self.is_finite():
            raise AbelianGroupError("infinite group has no order")
        return self.torsion_order

    def zero(self):
        return (0,) * self.rank

    def reduce(self, x):
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise AbelianGroupError(
                f"element has {len(x)} coordinates, group needs {self.rank}")
        torsion = tuple(c % d for c, d in zip(x, self.factors))
        return torsion + x[len(self.factors):]

    def add(self, x, y):
        return self.reduce(tuple(a + b for a, b in zip(self.reduce(x), self.reduce(y))))

    def neg(self, x):
        return self.reduce(tuple(-a for a in self.reduce(x)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, k, x):
        return self.reduce(tuple(k * a for a in self.reduce(x)))

    def eq(self, x, y):
        return self.reduce(x) == self.reduce(y)

    def is_torsion(self, x):
        return all(c == 0 for c in self.reduce(x)[len(self.factors):])

    def elements(self, free_bound=None):
        """All elements; free coordinates swept over [-free_bound, free_bound]."""
        if self.free_rank and free_bound is None:
            raise AbelianGroupError("unbounded-search: free rank needs a bound")
        ranges = [range(d) for d in self.factors]
        ranges += [range(-free_bound, free_bound + 1)] * self.free_rank
        for combo in itertools.product(*ranges):
            yield tuple(combo)

    def torsion_elements(self):
        for combo in itertools.product(*[range(d) for d in self.factors]):
            yield combo + (0,) * self.free_rank

    def solve_2x_eq_b(self, b):
        """Complete duplicate-free list of x with 2x = b.

        The count is 0 or 2^(number of even invariant factors) when the
        free part admits a solution.
        """
        b = self.reduce(b)
        per_coordinate = []
        for c, d in zip(b, self.factors):
            sols = []
            if d % 2 == 1:
                sols.append((c * pow(2, -1, d)) % d)
            else:
                if c % 2 == 0:
                    half = (c // 2) % d
                    sols.extend(sorted({half, (half + d // 2) % d}))
            if not sols:
                return []
            per_coordinate.append(sols)
        for c in b[len(self.factors):]:
            if c % 2 != 0:
                return []
            per_coordinate.append([c // 2])
        return sorted(itertools.product(*per_coordinate))

    def describe(self):
        parts = [f"Z/{d}" for d in self.factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return (isinstance(other, FinAbGroup)
                and self.factors == other.factors
                and self.free_rank == other.free_rank)

    def __repr__(self):
        return f"FinAbGroup({list(self.factors)}, free_rank={self.free_rank})"
