"""Cohomological bookkeeping for reducibles on 3-manifolds and cobordisms.

Reducible flat connections are enumerated from finite abelian cohomology
(central classes solve 2x = w, abelian ones are unordered pairs summing
to w); cobordism reducibles carry a normal index computed from signature
data, rho invariants, Betti numbers and the rational square form, and a
taxonomy (unobstructed / pseudocentral / nearly / pseudo-unobstructed).
Shift search and composite-shift feasibility realize the freedom to move
signature chambers on the ends; the pseudocentral count identity
|Z-tilde| = |Z| + 2|P| is verified by its involution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .abelian import FinAbGroup


class LedgerError(ValueError):
    pass


class ParityViolation(LedgerError):
    pass


# ---- 3-manifold sheets -------------------------------------------------------

class ThreeManifoldSheet:
    """H^2(Y;Z) with the 1-cycle class and per-abelian-class data.

    Abelian classes are unordered pairs {z, w-z} with z != w-z, keyed by
    the lexicographically smaller member.  ``h1_dims`` holds the even
    dimensions of H^1(Y; C_rho); ``rho`` the rho invariants (exact
    rationals when known).  An admissible sheet has no reducibles.
    """

    def __init__(self, h2, w_class, h1_dims=None, rho=None, admissible=False,
                 name="Y"):
        self.name = name
        self.h2 = h2
        self.w = h2.reduce(w_class)
        self.admissible = admissible
        self.h1_dims = {}
        self.rho = {}
        for key, value in (h1_dims or {}).items():
            key = self.class_key(key)
            value = int(value)
            if value < 0 or value % 2 != 0:
                raise LedgerError(f"H^1 dimension at {key} must be even and >= 0")
            self.h1_dims[key] = value
        for key, value in (rho or {}).items():
            self.rho[self.class_key(key)] = Fraction(value)

    def class_key(self, z):
        z = self.h2.reduce(z)
        other = self.h2.sub(self.w, z)
        if z == other:
            raise LedgerError(f"{z} is a central class, not an abelian one")
        return min(z, other)

    def central_classes(self):
        return self.h2.solve_2x_eq_b(self.w)

    def abelian_classes(self):
        if self.admissible:
            return []
        seen = set()
        out = []
        for z in self.h2.torsion_elements() if self.h2.is_finite() else ():
            other = self.h2.sub(self.w, z)
            if z == other:
                continue
            key = min(z, other)
            if key not in seen:
                seen.add(key)
                out.append(key)
        return sorted(out)

    def h1_dim(self, key):
        return self.h1_dims.get(self.class_key(key), 0)

    def rho_value(self, key):
        return self.rho.get(self.class_key(key), Fraction(0))

    def to_document(self):
        return {
            "name": self.name,
            "h2": {"factors": list(self.h2.factors), "free_rank": self.h2.free_rank},
            "w": list(self.w),
            "admissible": self.admissible,
            "h1_dims": {",".join(map(str, k)): v for k, v in sorted(self.h1_dims.items())},
            "rho": {",".join(map(str, k)): str(v) for k, v in sorted(self.rho.items())},
        }

    @classmethod
    def from_document(cls, doc):
        h2 = FinAbGroup(doc["h2"]["factors"], doc["h2"].get("free_rank", 0))

        def parse_key(s):
            return tuple(int(c) for c in s.split(",")) if s else ()

        return cls(
            h2, tuple(doc["w"]),
            h1_dims={parse_key(k): v for k, v in doc.get("h1_dims", {}).items()},
            rho={parse_key(k): Fraction(v) for k, v in doc.get("rho", {}).items()},
            admissible=doc.get("admissible", False),
            name=doc.get("name", "Y"),
        )


def enum_reducibles_3d(sheet):
    """(central classes, abelian pairs) of a rational homology sphere."""
    if not sheet.h2.is_finite():
        raise LedgerError("H^2(Y) must be finite (b_1 = 0)")
    centrals = sheet.central_classes()
    abelians = [(z, sheet.h2.sub(sheet.w, z)) for z in sheet.abelian_classes()]
    return centrals, abelians


# ---- signature chambers --------------------------------------------------------

class SignatureChamber:
    """sigma: abelian classes -> 2Z with sigma = dim H^1 mod 4."""

    def __init__(self, sheet, values=None):
        self.sheet = sheet
        self.values = {}
        for key, value in (values or {}).items():
            self.values[sheet.class_key(key)] = int(value)

    def value(self, key):
        return self.values.get(self.sheet.class_key(key),
                               self.sheet.h1_dim(key))

    def shifted(self, delta):
        """New chamber with sigma(rho) += delta(rho); delta in 4Z."""
        out = {}
        for key in self.sheet.abelian_classes():
            out[key] = self.value(key) + delta(key)
        return SignatureChamber(self.sheet, out)

    def as_dict(self):
        return {key: self.value(key) for key in self.sheet.abelian_classes()}

    def to_document(self):
        return {",".join(map(str, k)): v for k, v in sorted(self.as_dict().items())}

    @classmethod
    def from_document(cls, sheet, doc):
        def parse_key(s):
            return tuple(int(c) for c in s.split(",")) if s else ()
        return cls(sheet, {parse_key(k): v for k, v in doc.items()})


def validate_sigma(sheet, sigma):
    """mod-4 realizability: sigma(rho) even and = dim H^1(Y;C_rho) mod 4."""
    failures = []
    for key in sheet.abelian_classes():
        v = sigma.value(key)
        if v % 2 != 0:
            failures.append(("sigma.even", key, f"value {v} is odd"))
        elif (v - sheet.h1_dim(key)) % 4 != 0:
            failures.append(("sigma.mod4", key,
                             f"value {v} != {sheet.h1_dim(key)} mod 4"))
    return failures


def adjacent(sigma0, sigma1):
    """(is_adjacent, distinguished rho): sigma1 = sigma0 + 4 delta_rho."""
    diffs = []
    for key in sigma0.sheet.abelian_classes():
        d = sigma1.value(key) - sigma0.value(key)
        if d:
            diffs.append((key, d))
    if len(diffs) == 1 and diffs[0][1] == 4:
        return True, diffs[0][0]
    return False, None


def chamber_path(sigma0, sigma1):
    """Monotone chain of adjacent steps through the pointwise maximum.

    Returns a list of (direction, rho, chamber) steps; 'up' steps raise
    sigma by 4 toward max(sigma0, sigma1), 'down' steps descend to
    sigma1.  Raises on mod-4 incompatibility.
    """
    sheet = sigma0.sheet
    for sigma in (sigma0, sigma1):
        failures = validate_sigma(sheet, sigma)
        if failures:
            raise LedgerError(f"mod4-violation: {failures[0]}")
    for key in sheet.abelian_classes():
        if (sigma1.value(key) - sigma0.value(key)) % 4 != 0:
            raise LedgerError(f"mod4-violation: chambers differ by non-multiple of 4 at {key}")
    top = {key: max(sigma0.value(key), sigma1.value(key))
           for key in sheet.abelian_classes()}
    steps = []
    current = SignatureChamber(sheet, dict(sigma0.as_dict()))
    for key in sorted(top):
        while current.value(key) < top[key]:
            nxt = SignatureChamber(sheet, {**current.as_dict(),
                                           key: current.value(key) + 4})
            steps.append(("up", key, nxt))
            current = nxt
    for key in sorted(top):
        while current.value(key) > sigma1.value(key):
            nxt = SignatureChamber(sheet, {**current.as_dict(),
                                           key: current.value(key) - 4})
            steps.append(("down", key, nxt))
            current = nxt
    return steps


# ---- cobordism sheets ----------------------------------------------------------

class CobordismSheet:
    """Cohomological record of a cobordism between rational homology spheres."""

    def __init__(self, source, target, b1, bplus, chi, sigma, h2w, c_class,
                 restrict_source, restrict_target, qform=None, name="W"):
        self.name = name
        self.source = source
        self.target = target
        self.b1 = int(b1)
        self.bplus = int(bplus)
        self.chi = int(chi)
        self.sig = int(sigma)
        if self.b1 < 0 or self.bplus < 0:
            raise LedgerError("negative Betti numbers")
        self.h2w = h2w
        self.c = h2w.reduce(c_class)
        # restriction maps as integer matrices on coordinates
        self.r_source = [list(map(int, row)) for row in restrict_source]
        self.r_target = [list(map(int, row)) for row in restrict_target]
        self._check_restriction(self.r_source, source)
        self._check_restriction(self.r_target, target)
        n_free = h2w.free_rank
        self.qform = [[Fraction(x) for x in row] for row in (qform or [])]
        if len(self.qform) != n_free or any(len(row) != n_free for row in self.qform):
            if qform is None:
                self.qform = [[Fraction(0)] * n_free for _ in range(n_free)]
            else:
                raise LedgerError("Qform must be a square matrix on the free part")
        for i in range(n_free):
            for j in range(n_free):
                if self.qform[i][j] != self.qform[j][i]:
                    raise LedgerError("Qform must be symmetric")

    def _check_restriction(self, matrix, sheet):
        rank = self.h2w.rank
        if len(matrix) != sheet.h2.rank:
            raise LedgerError("restriction matrix has wrong target rank")
        for row in matrix:
            if len(row) != rank:
                raise LedgerError("restriction matrix has wrong source rank")
        # well-defined on torsion: factor * r(e_i) = 0 in the target
        for i, d in enumerate(self.h2w.factors):
            image = tuple(d * row[i] for row in matrix)
            if sheet.h2.reduce(image) != sheet.h2.zero():
                raise LedgerError(
                    f"restriction map is not a homomorphism on torsion coordinate {i}")

    def restrict(self, matrix, sheet, x):
        x = self.h2w.reduce(x)
        out = tuple(sum(row[i] * x[i] for i in range(self.h2w.rank)) for row in matrix)
        return sheet.h2.reduce(out)

    def r(self, x):
        return self.restrict(self.r_source, self.source, x)

    def r_prime(self, x):
        return self.restrict(self.r_target, self.target, x)

    def square(self, x):
        """Rational square of a class; torsion coordinates contribute zero."""
        x = self.h2w.reduce(x)
        free = x[len(self.h2w.factors):]
        total = Fraction(0)
        for i, xi in enumerate(free):
            for j, xj in enumerate(free):
                total += self.qform[i][j] * xi * xj
        return total

    def to_document(self):
        return {
            "name": self.name,
            "source": self.source.to_document(),
            "target": self.target.to_document(),
            "b1": self.b1, "bplus": self.bplus,
            "chi": self.chi, "sigma": self.sig,
            "h2w": {"factors": list(self.h2w.factors), "free_rank": self.h2w.free_rank},
            "c": list(self.c),
            "restrict_source": self.r_source,
            "restrict_target": self.r_target,
            "qform": [[str(x) for x in row] for row in self.qform],
        }

    @classmethod
    def from_document(cls, doc):
        return cls(
            ThreeManifoldSheet.from_document(doc["source"]),
            ThreeManifoldSheet.from_document(doc["target"]),
            doc["b1"], doc["bplus"], doc["chi"], doc["sigma"],
            FinAbGroup(doc["h2w"]["factors"], doc["h2w"].get("free_rank", 0)),
            tuple(doc["c"]),
            doc["restrict_source"], doc["restrict_target"],
            [[Fraction(x) for x in row] for row in doc.get("qform", [])] or None,
            name=doc.get("name", "W"),
        )


@dataclass
class ReducibleRecord:
    kind: str                      # "central" or "abelian"
    x: tuple
    y: tuple                       # equal to x for central records
    energy: Fraction               # -2 (x - y)^2
    r_source: tuple = ()
    r_target: tuple = ()
    source_central: bool = True
    target_central: bool = True

    @property
    def pseudocentral(self):
        return (self.kind == "abelian" and self.source_central
                and self.target_central and self.energy == 0)

    def label(self):
        return f"{self.kind}{{{self.x},{self.y}}}"


def _record_for_pair(W, x, y):
    x = W.h2w.reduce(x)
    y = W.h2w.reduce(y)
    diff = W.h2w.sub(x, y)
    energy = -2 * W.square(diff)
    rx, ry = W.r(x), W.r(y)
    rxp, ryp = W.r_prime(x), W.r_prime(y)
    return ReducibleRecord(
        kind="central" if x == y else "abelian",
        x=x, y=y, energy=energy,
        r_source=min(rx, ry), r_target=min(rxp, ryp),
        source_central=(rx == ry), target_central=(rxp == ryp),
    )


def enum_reducibles_4d(W, bound=None):
    """All reducible records on the cobordism, within the search bound.

    Central records are solutions of 2x = c; abelian records are
    unordered pairs {x, y} with x + y = c, x != y.  For infinite H^2(W)
    a coset bound on the free coordinates is required.
    """
    records = []
    for x in W.h2w.solve_2x_eq_b(W.c):
        records.append(_record_for_pair(W, x, x))
    saturated = False
    if W.h2w.is_finite():
        candidates = list(W.h2w.torsion_elements())
    else:
        if bound is None:
            raise LedgerError("unbounded-search: H^2(W) is infinite, supply a bound")
        candidates = list(W.h2w.elements(free_bound=bound))
        saturated = True
    seen = set()
    for x in candidates:
        y = W.h2w.sub(W.c, x)
        if x == y:
            continue
        key = min(x, y)
        if key in seen:
            continue
        seen.add(key)
        records.append(_record_for_pair(W, key, W.h2w.sub(W.c, key)))
    records.sort(key=lambda r: (r.kind, r.x, r.y))
    return records, saturated


# ---- the normal index -----------------------------------------------------------

def normal_index(record, W, sigma_source, sigma_target):
    """N(Lambda; pi, pi') for an abelian record, an even integer.

    N = -2(x-y)^2 + 2(b1 - b+) + (sigma'(a') + rho(ad_a'))/2
        - (sigma(a) + rho(ad_a))/2 + 1 - (r(a) + r(a'))/2
    with r = 3 at central ends, 1 at abelian ends, and rho = sigma = 0
    at central ends.
    """
    if record.kind != "abelian":
        raise LedgerError("normal index applies to abelian records only")
    total = Fraction(record.energy) + 2 * (W.b1 - W.bplus) + 1
    if record.source_central:
        total -= Fraction(3, 2)
    else:
        key = record.r_source
        total -= Fraction(sigma_source.value(key) + W.source.rho_value(key), 2)
        total -= Fraction(1, 2)
    if record.target_central:
        total -= Fraction(3, 2)
    else:
        key = record.r_target
        total += Fraction(sigma_target.value(key) + W.target.rho_value(key), 2)
        total -= Fraction(1, 2)
    if total.denominator != 1 or total.numerator % 2 != 0:
        raise ParityViolation(
            f"parity-violation: normal index {total} is not an even integer")
    return int(total)


def record_unobstructed(record, W, sigma_source, sigma_target):
    if record.kind != "abelian":
        return True
    if record.energy < 0:
        return True
    n = normal_index(record, W, sigma_source, sigma_target)
    return W.b1 - W.bplus <= n


def classify(W, sigma_source, sigma_target, records):
    """Per-record labels and the cobordism-level taxonomy.

    The cobordism-level label includes the side condition: central
    connections are harmless only when b+ = 0 or there are none.
    """
    labels = {}
    has_central = False
    obstructed = []
    for rec in records:
        if rec.kind == "central":
            has_central = True
            labels[rec.label()] = "central"
            continue
        if rec.pseudocentral:
            labels[rec.label()] = "pseudocentral"
            continue
        if record_unobstructed(rec, W, sigma_source, sigma_target):
            labels[rec.label()] = "unobstructed"
        else:
            labels[rec.label()] = "obstructed"
            obstructed.append(rec)
    side_ok = (W.bplus == 0) or not has_central
    pseudo = [rec for rec in records if rec.kind == "abelian" and rec.pseudocentral]
    if not obstructed and not pseudo and side_ok:
        level = "unobstructed"
    elif not obstructed and side_ok:
        level = "pseudo-unobstructed"
    elif (W.b1 == 0 and W.bplus == 0 and len(obstructed) == 1
          and not obstructed[0].source_central and not obstructed[0].target_central
          and normal_index(obstructed[0], W, sigma_source, sigma_target) == -2):
        level = "nearly-unobstructed"
    else:
        level = "general"
    return level, labels


# ---- grading formulas ------------------------------------------------------------

def framed_index_closed(b1, bplus, c_squared):
    """3(b^1 - b^+) + 2 c^2 mod 8 for a closed 4-manifold."""
    return (3 * (b1 - bplus) + 2 * c_squared) % 8


def framed_index_cob(chi, sigma, c_squared):
    """2 c^2 - (3/2)(chi + sigma) mod 8; chi + sigma must be even."""
    if (chi + sigma) % 2 != 0:
        raise ParityViolation(f"parity-violation: chi + sigma = {chi + sigma} is odd")
    return (2 * c_squared - 3 * (chi + sigma) // 2) % 8


def mod2_grading(framed_index, chi, sigma):
    """Absolute Z/2 grading: framed index + (3/2)(chi + sigma) mod 2."""
    if (chi + sigma) % 2 != 0:
        raise ParityViolation(f"parity-violation: chi + sigma = {chi + sigma} is odd")
    return (framed_index + 3 * (chi + sigma) // 2) % 2


# ---- shift search ------------------------------------------------------------------

def shift_identity_check(record, W, sigma0, sigma0p, f_source, f_target):
    """N(Lambda, sigma+f, sigma'+f') - N(Lambda, sigma, sigma')
    = (f'(r' Lambda) - f(r Lambda)) / 2, with f = 0 at central ends."""
    before = normal_index(record, W, sigma0, sigma0p)
    shifted_source = sigma0.shifted(lambda key: f_source(key))
    shifted_target = sigma0p.shifted(lambda key: f_target(key))
    after = normal_index(record, W, shifted_source, shifted_target)
    fs = 0 if record.source_central else f_source(record.r_source)
    ft = 0 if record.target_central else f_target(record.r_target)
    return after - before == (ft - fs) // 2 and (ft - fs) % 2 == 0


def shift_search(W, records, sigma0, sigma0p):
    """Even shifts (f, f') making every non-pseudocentral record
    unobstructed: f = -4n on the incoming end, f' = +4n outgoing.

    Returns (f, f', n, classification) with the classifier re-run on the
    shifted chambers as a machine-checked postcondition.
    """
    n = 0
    for rec in records:
        if rec.kind != "abelian" or rec.pseudocentral:
            continue
        if rec.energy < 0:
            continue
        N = normal_index(rec, W, sigma0, sigma0p)
        deficit = (W.b1 - W.bplus) - N
        if deficit > 0 and not (rec.source_central and rec.target_central):
            # one non-central end gains at least 2n under the +-4n shifts
            n = max(n, -(-deficit // 2))
    f_source = lambda key: -4 * n
    f_target = lambda key: 4 * n
    shifted0 = sigma0.shifted(f_source)
    shifted0p = sigma0p.shifted(f_target)
    level, labels = classify(W, shifted0, shifted0p, records)
    return f_source, f_target, n, (level, labels)


def compose_shift(W1, W2, records1, records2, sigma0, sigma1, sigma2,
                  hypothesis="proof"):
    """Shift functions (f0, f1, f2) making both cobordisms of a composite
    pseudo-unobstructed, with the +-4 split at the middle manifold.

    The middle chamber splits as sigma1+ = sigma1 + f1 (outgoing end of
    W1) and sigma1- = sigma1 + f1 - 4 at adjusted classes (incoming end
    of W2), so 0 <= sigma1+ - sigma1- <= 4.  Feasibility of f1 at each
    middle class is certified through the additivity of the normal index
    across the composite.
    """
    for i, W in ((1, W1), (2, W2)):
        gap = W.b1 - W.bplus
        if hypothesis == "proof" and gap < 0:
            raise LedgerError(f"hypothesis-violated: b1 - b+ = {gap} < 0 on W{i}")
        if hypothesis == "statement" and -gap < 0:
            raise LedgerError(f"hypothesis-violated: b+ - b1 = {-gap} < 0 on W{i}")
    if W1.target is not W2.source and \
            W1.target.to_document() != W2.source.to_document():
        raise LedgerError("cobordisms are not composable")
    middle = W1.target

    gap1 = W1.b1 - W1.bplus
    gap2 = W2.b1 - W2.bplus

    lower = {}
    upper = {}
    pairs = {}
    for rec in records1:
        if rec.kind != "abelian" or rec.target_central or not rec.source_central:
            continue
        if rec.energy < 0:
            continue
        key = middle.class_key(rec.r_target)
        N1 = normal_index(rec, W1, sigma0, sigma1)
        lower[key] = max(lower.get(key, -(10 ** 9)), 2 * gap1 - 2 * N1)
        pairs.setdefault(key, [[], []])[0].append((rec, N1))
    for rec in records2:
        if rec.kind != "abelian" or rec.source_central or not rec.target_central:
            continue
        if rec.energy < 0:
            continue
        key = middle.class_key(rec.r_source)
        N2 = normal_index(rec, W2, sigma1, sigma2)
        upper[key] = min(upper.get(key, 10 ** 9), 2 * N2 - 2 * gap2 + 4)
        pairs.setdefault(key, [[], []])[1].append((rec, N2))

    f1_values = {}
    certificates = []
    for key in sorted(set(lower) | set(upper)):
        lo = lower.get(key)
        hi = upper.get(key)
        if lo is not None and hi is not None and lo > hi:
            rec1 = max(pairs[key][0], key=lambda t: -t[1])[0]
            rec2 = min(pairs[key][1], key=lambda t: t[1])[0]
            raise LedgerError(
                f"infeasible: middle class {key} needs f1 in [{lo}, {hi}]; "
                f"violating pair {rec1.label()} / {rec2.label()}")
        for (rec1, N1) in pairs.get(key, [[], []])[0]:
            for (rec2, N2) in pairs.get(key, [[], []])[1]:
                composite_ok = N1 + N2 >= (gap1 + gap2) - 2
                certificates.append((key, rec1.label(), rec2.label(),
                                     N1 + N2, composite_ok))
        if lo is None:
            value = 0 if hi is None else min(0, 4 * (hi // 4))
        else:
            value = 4 * (-(-lo // 4))  # smallest multiple of 4 >= lo
            if hi is not None and value > hi:
                raise LedgerError(
                    f"infeasible: no multiple of 4 in [{lo}, {hi}] at {key}")
        f1_values[key] = value

    def f1(key):
        return f1_values.get(middle.class_key(key), 0)

    sigma1_plus = sigma1.shifted(f1)

    # classes where W2 needs the extra -4 slack
    adjust = set()
    for rec in records2:
        if rec.kind != "abelian" or rec.source_central or rec.energy < 0:
            continue
        key = middle.class_key(rec.r_source)
        N2 = normal_index(rec, W2, sigma1_plus, sigma2)
        if N2 < gap2:
            adjust.add(key)
    sigma1_minus = sigma1_plus.shifted(lambda key: -4 if middle.class_key(key) in adjust else 0)

    # outer shifts soak up everything with a free outer end
    n0 = 0
    for rec in records1:
        if rec.kind != "abelian" or rec.pseudocentral or rec.source_central:
            continue
        if rec.energy < 0:
            continue
        N1 = normal_index(rec, W1, sigma0, sigma1_plus)
        deficit = gap1 - N1
        if deficit > 0:
            n0 = max(n0, -(-deficit // 2))
    n2 = 0
    for rec in records2:
        if rec.kind != "abelian" or rec.pseudocentral or rec.target_central:
            continue
        if rec.energy < 0:
            continue
        N2 = normal_index(rec, W2, sigma1_minus, sigma2)
        deficit = gap2 - N2
        if deficit > 0:
            n2 = max(n2, -(-deficit // 2))
    f0 = lambda key: -4 * n0
    f2 = lambda key: 4 * n2
    sigma0_new = sigma0.shifted(f0)
    sigma2_new = sigma2.shifted(f2)

    level1, _ = classify(W1, sigma0_new, sigma1_plus, records1)
    level2, _ = classify(W2, sigma1_minus, sigma2_new, records2)
    split_ok = all(0 <= sigma1_plus.value(k) - sigma1_minus.value(k) <= 4
                   for k in middle.abelian_classes())
    return {
        "f0": -4 * n0, "f1": dict(f1_values), "f2": 4 * n2,
        "sigma0": sigma0_new, "sigma1_plus": sigma1_plus,
        "sigma1_minus": sigma1_minus, "sigma2": sigma2_new,
        "levels": (level1, level2),
        "split_ok": split_ok,
        "certificates": certificates,
    }


# ---- pseudocentral count -------------------------------------------------------------

def pseudocentral_count(W, theta_source, theta_target):
    """|Z-tilde(W, c; theta, theta')| and its split |Z| + 2|P|.

    Enumerates pairs (y, y') with y + y' = c, y - y' torsion, and both
    restrictions the given central classes; the involution (y, y') ->
    (y', y) fixes the centrals and pairs up the pseudocentrals.
    """
    if not W.h2w.factors and W.h2w.free_rank == 0:
        candidates = [W.h2w.zero()]
    else:
        free = list(W.c[len(W.h2w.factors):])
        if any(v % 2 != 0 for v in free):
            candidates = []
        else:
            half_free = tuple(v // 2 for v in free)
            candidates = []
            for tors in itertools.product(*[range(d) for d in W.h2w.factors]):
                candidates.append(tuple(tors) + half_free)
    theta_source = W.source.h2.reduce(theta_source)
    theta_target = W.target.h2.reduce(theta_target)
    z_tilde = []
    for y in candidates:
        y_prime = W.h2w.sub(W.c, y)
        if not W.h2w.is_torsion(W.h2w.sub(y, y_prime)):
            continue
        if W.r(y) != theta_source or W.r(y_prime) != theta_source:
            continue
        if W.r_prime(y) != theta_target or W.r_prime(y_prime) != theta_target:
            continue
        z_tilde.append((y, y_prime))
    centrals = [pair for pair in z_tilde if pair[0] == pair[1]]
    involution_orbits = set()
    for y, y_prime in z_tilde:
        if y != y_prime:
            involution_orbits.add((min(y, y_prime), max(y, y_prime)))
    count = len(z_tilde)
    split_ok = count == len(centrals) + 2 * len(involution_orbits)
    return {
        "z_tilde": count,
        "central": len(centrals),
        "pseudocentral": len(involution_orbits),
        "identity_holds": split_ok,
        "pairs": sorted(z_tilde),
    }
