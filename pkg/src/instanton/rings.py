"""Exact coefficient rings: Z, Q, prime fields F_p (p odd), and F[U].

Every ring here is a Euclidean domain, so Smith normal form applies
uniformly.  Elements are plain python values (int, Fraction, Poly); the
ring object knows how to combine them.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class RingError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Ring:
    """Base class.  Subclasses fill in the arithmetic on raw elements."""

    tag = "?"
    is_field = False

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def is_zero(self, a):
        return self.eq(a, self.zero())

    def eq(self, a, b):
        return self.sub(a, b) == self.zero()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def sum(self, elements):
        total = self.zero()
        for a in elements:
            total = self.add(total, a)
        return total

    def divides(self, a, b):
        """True if a | b (a nonzero, or b zero)."""
        if self.is_zero(a):
            return self.is_zero(b)
        _, r = self.divmod(b, a)
        return self.is_zero(r)

    def exact_div(self, b, a):
        q, r = self.divmod(b, a)
        if not self.is_zero(r):
            raise RingError(f"{self.show(a)} does not divide {self.show(b)} in {self.tag}")
        return q

    def canonical(self, a):
        """(u, c) with a = u*c, u a unit and c the canonical associate."""
        raise NotImplementedError

    def norm(self, a):
        """Euclidean size used for pivot selection; smaller is better."""
        raise NotImplementedError

    def __repr__(self):
        return self.tag


class IntegerRing(Ring):
    tag = "integers"

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def divmod(self, a, b):
        q, r = divmod(a, b)
        # bias the remainder toward small absolute value
        if r * 2 > abs(b):
            q, r = (q + 1, r - b) if b > 0 else (q - 1, r + b)
        return q, r

    def is_unit(self, a):
        return a in (1, -1)

    def canonical(self, a):
        if a < 0:
            return -1, -a
        return 1, a

    def inv_unit(self, u):
        return u

    def norm(self, a):
        return abs(a)

    def show(self, a):
        return str(a)

    def parse(self, s):
        return int(s)


class RationalField(Ring):
    tag = "rationals"
    is_field = True

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def divmod(self, a, b):
        return a / b, Fraction(0)

    def is_unit(self, a):
        return a != 0

    def canonical(self, a):
        if a == 0:
            return Fraction(1), Fraction(0)
        return a, Fraction(1)

    def inv_unit(self, u):
        return 1 / u

    def norm(self, a):
        return 0 if a == 0 else 1

    def show(self, a):
        return str(a)

    def parse(self, s):
        return Fraction(s)


class PrimeField(Ring):
    """F_p for an odd prime p; the equivariant theory needs 2 invertible."""

    is_field = True

    def __init__(self, p):
        if not _is_prime(p) or p == 2:
            raise RingError(f"prime field characteristic must be an odd prime, got {p}")
        self.p = p
        self.tag = f"prime-field({p})"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_zero(self, a):
        return a % self.p == 0

    def divmod(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p, 0

    def is_unit(self, a):
        return a % self.p != 0

    def canonical(self, a):
        a = a % self.p
        if a == 0:
            return 1, 0
        return a, 1

    def inv_unit(self, u):
        return pow(u, -1, self.p)

    def norm(self, a):
        return 0 if self.is_zero(a) else 1

    def show(self, a):
        return str(a % self.p)

    def parse(self, s):
        return int(s) % self.p


class Poly:
    """Univariate polynomial, dense coefficient tuple, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        n = len(coeffs)
        while n > 0 and coeffs[n - 1] == 0:
            n -= 1
        self.coeffs = tuple(coeffs[:n])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"


class PolynomialRing(Ring):
    """F[U] over a field F; a PID, so Smith normal form goes through.

    ``var_degree`` records the homological degree of the variable (even;
    U has degree -4 in the equivariant theory) but plays no role in the
    ring arithmetic itself.
    """

    def __init__(self, base, var_degree=-4, var="U"):
        if not base.is_field:
            raise RingError("polynomial coefficients must form a field")
        if var_degree % 2 != 0:
            raise RingError("variable degree must be even")
        self.base = base
        self.var = var
        self.var_degree = var_degree
        self.tag = f"poly({base.tag},{var},deg={var_degree})"

    def from_int(self, n):
        c = self.base.from_int(n)
        return Poly([] if self.base.is_zero(c) else [c])

    def variable(self):
        return Poly([self.base.zero(), self.base.one()])

    def from_coeffs(self, coeffs):
        return Poly([self.base.from_int(c) if isinstance(c, int) else c for c in coeffs])

    def add(self, a, b):
        n = max(len(a.coeffs), len(b.coeffs))
        out = []
        for i in range(n):
            x = a.coeffs[i] if i < len(a.coeffs) else self.base.zero()
            y = b.coeffs[i] if i < len(b.coeffs) else self.base.zero()
            out.append(self.base.add(x, y))
        return Poly(out)

    def neg(self, a):
        return Poly([self.base.neg(c) for c in a.coeffs])

    def mul(self, a, b):
        if not a.coeffs or not b.coeffs:
            return Poly([])
        out = [self.base.zero()] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            for j, y in enumerate(b.coeffs):
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return Poly(out)

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return not a.coeffs

    def divmod(self, a, b):
        if self.is_zero(b):
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a.coeffs)
        q = [self.base.zero()] * max(0, len(rem) - len(b.coeffs) + 1)
        lead = b.coeffs[-1]
        while len(rem) >= len(b.coeffs) and rem:
            k = len(rem) - len(b.coeffs)
            factor, _ = self.base.divmod(rem[-1], lead)
            q[k] = factor
            for i, c in enumerate(b.coeffs):
                rem[k + i] = self.base.sub(rem[k + i], self.base.mul(factor, c))
            while rem and self.base.is_zero(rem[-1]):
                rem.pop()
        return Poly(q), Poly(rem)

    def is_unit(self, a):
        return a.degree == 0

    def canonical(self, a):
        """Canonical associate is monic."""
        if self.is_zero(a):
            return self.one(), a
        lead = a.coeffs[-1]
        inv = self.base.inv_unit(lead)
        monic = Poly([self.base.mul(inv, c) for c in a.coeffs])
        return Poly([lead]), monic

    def inv_unit(self, u):
        return Poly([self.base.inv_unit(u.coeffs[0])])

    def norm(self, a):
        return a.degree if not self.is_zero(a) else -1

    def show(self, a):
        if self.is_zero(a):
            return "0"
        terms = []
        for i, c in enumerate(a.coeffs):
            if self.base.is_zero(c):
                continue
            cs = self.base.show(c)
            if i == 0:
                terms.append(cs)
            elif i == 1:
                terms.append(f"{cs}*{self.var}" if cs != "1" else self.var)
            else:
                terms.append(f"{cs}*{self.var}^{i}" if cs != "1" else f"{self.var}^{i}")
        return " + ".join(terms)

    def parse(self, s):
        raise NotImplementedError("polynomial parsing is not needed by the document formats")


ZZ = IntegerRing()
QQ = RationalField()

_prime_fields = {}


def GF(p):
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def ring_from_spec(spec):
    """Coefficient choice from a CLI token: 'z', 'q', or 'fp:P'."""
    spec = spec.lower()
    if spec == "z":
        return ZZ
    if spec == "q":
        return QQ
    if spec.startswith("fp:"):
        return GF(int(spec.split(":", 1)[1]))
    raise RingError(f"unknown coefficient spec {spec!r}")


def is_pid_for_smith(ring):
    """Rings we accept in smith_normal_form."""
    return isinstance(ring, (IntegerRing, PolynomialRing)) or ring.is_field
