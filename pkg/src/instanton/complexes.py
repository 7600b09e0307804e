"""Finite graded chain complexes and their homology over exact rings.

A GradedComplex is Z-graded (period=None) or Z/2N-graded via integer
degree lifts (period=2N); the differential lowers degree by one, modulo
the period when present.  Homology is presented per grading as a free
rank plus invariant factors, computed through Smith normal form.
"""

from __future__ import annotations

from .matrices import SparseMatrix, cokernel_factors, kernel_basis, smith_normal_form
from .rings import ZZ


class ComplexError(ValueError):
    pass


class NotAComplexError(ComplexError):
    """d*d != 0; carries the offending source generator."""

    def __init__(self, generator, image):
        self.generator = generator
        self.image = image
        super().__init__(f"not-a-complex: d²({generator}) != 0")


class GradedComplex:
    """Free complex on named generators with integer degree lifts."""

    def __init__(self, ring, generators, differential, period=None):
        """generators: list of (name, degree); differential: name -> {name: coeff}."""
        self.ring = ring
        self.period = period
        if period is not None and (period < 2 or period % 2 != 0):
            raise ComplexError("period must be an even integer 2N >= 2")
        self.generators = list(generators)
        self.degree = {}
        for name, deg in self.generators:
            if name in self.degree:
                raise ComplexError(f"duplicate generator {name}")
            self.degree[name] = int(deg)
        self.differential = {}
        for src, image in (differential or {}).items():
            if src not in self.degree:
                raise ComplexError(f"differential source {src} is not a generator")
            cleaned = {}
            for dst, coeff in image.items():
                if dst not in self.degree:
                    raise ComplexError(f"differential target {dst} is not a generator")
                coeff = ring.from_int(coeff) if isinstance(coeff, int) else coeff
                if not ring.is_zero(coeff):
                    if not self._degree_drop_ok(src, dst):
                        raise ComplexError(
                            f"differential {src}->{dst} does not lower degree by 1"
                            f" (degrees {self.degree[src]} -> {self.degree[dst]})")
                    cleaned[dst] = coeff
            if cleaned:
                self.differential[src] = cleaned

    def _degree_drop_ok(self, src, dst):
        drop = self.degree[src] - self.degree[dst]
        if self.period is None:
            return drop == 1
        return drop % self.period == 1 % self.period

    def grading_of(self, name):
        d = self.degree[name]
        return d if self.period is None else d % self.period

    def gradings(self):
        return sorted({self.grading_of(name) for name, _ in self.generators})

    def generators_in(self, grading):
        return [name for name, _ in self.generators if self.grading_of(name) == grading]

    def d_image(self, name):
        return dict(self.differential.get(name, {}))

    def apply_d(self, vector):
        """vector: {name: coeff} -> {name: coeff}."""
        R = self.ring
        out = {}
        for src, c in vector.items():
            for dst, w in self.differential.get(src, {}).items():
                out[dst] = R.add(out.get(dst, R.zero()), R.mul(c, w))
        return {k: v for k, v in out.items() if not R.is_zero(v)}

    def check_d_squared(self):
        for name, _ in self.generators:
            image = self.apply_d(self.apply_d({name: self.ring.one()}))
            if image:
                raise NotAComplexError(name, image)

    def d_matrix(self, grading):
        """Matrix of d from grading to grading-1 (mod period)."""
        src = self.generators_in(grading)
        if self.period is None:
            dst = self.generators_in(grading - 1)
        else:
            dst = self.generators_in((grading - 1) % self.period)
        index = {name: i for i, name in enumerate(dst)}
        entries = {}
        for j, s in enumerate(src):
            for t, coeff in self.differential.get(s, {}).items():
                entries[(index[t], j)] = coeff
        return SparseMatrix(self.ring, len(dst), len(src), entries), src, dst

    def homology(self):
        """{grading: (free_rank, [invariant factors])}; validates d^2 = 0 first."""
        self.check_d_squared()
        out = {}
        for g in self.gradings():
            out[g] = self._homology_at(g)
        return out

    def _homology_at(self, grading):
        R = self.ring
        d_out, src, _ = self.d_matrix(grading)
        up = grading + 1 if self.period is None else (grading + 1) % self.period
        d_in, up_src, dst = self.d_matrix(up)
        # kernel of d_out as columns in the src basis
        kernel_cols = kernel_basis(d_out)
        z = len(kernel_cols)
        if z == 0:
            return (0, [])
        K = SparseMatrix(R, len(src), z,
                         {(i, j): col[i] for j, col in enumerate(kernel_cols)
                          for i in range(len(src)) if not R.is_zero(col[i])})
        # image of d_in expressed inside the kernel basis
        index = {name: i for i, name in enumerate(dst)}
        entries = {}
        for j, s in enumerate(up_src):
            for t, coeff in self.differential.get(s, {}).items():
                entries[(index[t], j)] = coeff
        B = SparseMatrix(R, len(dst), len(up_src), entries)
        if B.is_zero():
            return (z, [])
        from .matrices import solve_in_image
        X = solve_in_image(K, B)
        if X is None:
            raise ComplexError("image does not lie in kernel; complex is corrupt")
        free, torsion = cokernel_factors(X)
        return (free, torsion)

    def euler_characteristic(self):
        """Alternating sum of generator counts by degree parity."""
        total = 0
        for name, _ in self.generators:
            total += 1 if self.degree[name] % 2 == 0 else -1
        return total

    def homology_euler_characteristic(self):
        chi = 0
        for g, (free, _) in self.homology().items():
            chi += free if g % 2 == 0 else -free
        return chi


def homology_description(ring, hom):
    """Render a homology dict as 'grading: rank/type' lines for reports."""
    lines = []
    for g in sorted(hom):
        free, torsion = hom[g]
        parts = []
        if free:
            base = "Z" if ring is ZZ else "R"
            parts.append(base if free == 1 else f"{base}^{free}")
        for t in torsion:
            parts.append(f"Z/{ring.show(t)}" if ring is ZZ else f"R/({ring.show(t)})")
        lines.append((g, " + ".join(parts) if parts else "0"))
    return lines
