"""Flow categories, bimodules and homotopies in the minimal-model shadow.

Orbit chain models (point, S^2, SO(3)) carry zero internal differential
and the truncated u-action, so the flow-category boundary relation
collapses to an operator identity between generator-to-generator
blocks.  Suspension replaces an abelian orbit by a sphere-bundle orbit
and a shifted copy, realizing wall-crossing as an algebraic mapping
cone; comparison bimodules, lifts over suspensions, and the
obstructed-cobordism bimodule are assembled from explicit block
matrices and validated against the same relations.

Degrees are tracked with integer lifts; every nonzero block must be
homogeneous with operator degree in [0, 3] matching its fiber degree
modulo the period.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import GradedComplex
from .equivariant import EquivariantComplex
from .rings import QQ, ZZ


class FlowError(ValueError):
    pass


class SectionIncompatible(FlowError):
    pass


# ---- orbit models ----------------------------------------------------------

ORBIT_MODELS = {
    "central": {"g0": 0},
    "abelian": {"s0": 0, "s2": 2},
    "irreducible": {"g0": 0, "g3": 3},
}

ORBIT_DIMS = {"central": 0, "abelian": 2, "irreducible": 3}

# u = [SO(3)] acts by degree +3 with u^2 = 0; truncation kills it on the
# point and S^2 models, and sends g0 -> g3 on the SO(3) model.
U_ACTION = {
    "central": {},
    "abelian": {},
    "irreducible": {"g0": ("g3", 1)},
}


def model_generators(kind):
    return ORBIT_MODELS[kind]


@dataclass(frozen=True)
class FlowObject:
    name: str
    kind: str
    lift: int  # integer lift of the relative mod-2N grading

    def generators(self):
        return ORBIT_MODELS[self.kind]


class Block:
    """Generator-to-generator operator with exact rational coefficients."""

    def __init__(self, entries=None):
        self.entries = {}
        for (src, dst), coeff in (entries or {}).items():
            coeff = Fraction(coeff)
            if coeff != 0:
                self.entries[(src, dst)] = coeff

    def is_zero(self):
        return not self.entries

    def apply(self, vector):
        """vector: {gen: Fraction} in the source model."""
        out = {}
        for (src, dst), coeff in self.entries.items():
            if src in vector:
                out[dst] = out.get(dst, Fraction(0)) + coeff * vector[src]
        return {k: v for k, v in out.items() if v != 0}

    def compose(self, first):
        """self o first: apply ``first`` then ``self``."""
        out = {}
        for (src, mid), c1 in first.entries.items():
            for (mid2, dst), c2 in self.entries.items():
                if mid == mid2:
                    key = (src, dst)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Block(out)

    def plus(self, other, scale=1):
        out = dict(self.entries)
        for key, coeff in other.entries.items():
            out[key] = out.get(key, Fraction(0)) + Fraction(scale) * coeff
        return Block(out)

    def scaled(self, scale):
        return Block({k: Fraction(scale) * v for k, v in self.entries.items()})

    def degree(self, src_model, dst_model):
        """Common operator degree of the entries, or a FlowError."""
        degrees = set()
        for (src, dst), _ in self.entries.items():
            if src not in src_model or dst not in dst_model:
                raise FlowError(f"block entry ({src},{dst}) uses unknown generators")
            degrees.add(dst_model[dst] - src_model[src])
        if len(degrees) > 1:
            raise FlowError(f"block entries are not degree-homogeneous: {sorted(degrees)}")
        return degrees.pop() if degrees else None

    def __eq__(self, other):
        return isinstance(other, Block) and self.entries == other.entries

    def __repr__(self):
        if self.is_zero():
            return "Block(0)"
        parts = [f"{s}->{d}:{c}" for (s, d), c in sorted(self.entries.items())]
        return "Block(" + ", ".join(parts) + ")"


def identity_block(kind):
    return Block({(g, g): 1 for g in ORBIT_MODELS[kind]})


def u_block(kind):
    return Block({(g, tgt): c for g, (tgt, c) in U_ACTION[kind].items()})


# ---- validation report -----------------------------------------------------

class FlowReport:
    def __init__(self):
        self.failures = []

    def fail(self, axiom, witness, detail):
        self.failures.append((axiom, witness, detail))

    @property
    def ok(self):
        return not self.failures

    @property
    def first(self):
        return self.failures[0] if self.failures else None

    def __repr__(self):
        if self.ok:
            return "valid"
        return "; ".join(f"[{a}] at {w}: {d}" for a, w, d in self.failures)


# ---- flow categories -------------------------------------------------------

class FlowCategoryData:
    def __init__(self, objects, blocks=None, period=8):
        if period < 2 or period % 2 != 0:
            raise FlowError("period must be an even integer 2N")
        self.period = period
        self.objects = {}
        for obj in objects:
            if isinstance(obj, tuple):
                obj = FlowObject(*obj)
            if obj.kind not in ORBIT_MODELS:
                raise FlowError(f"unknown orbit kind {obj.kind}")
            if obj.name in self.objects:
                raise FlowError(f"duplicate object {obj.name}")
            self.objects[obj.name] = obj
        self.blocks = {}
        for (a, b), block in (blocks or {}).items():
            if a not in self.objects or b not in self.objects:
                raise FlowError(f"block ({a},{b}) references unknown object")
            if not isinstance(block, Block):
                block = Block(block)
            if not block.is_zero():
                self.blocks[(a, b)] = block

    def object_names(self):
        return list(self.objects)

    def block(self, a, b):
        return self.blocks.get((a, b), Block())

    def lift_diff(self, a, b):
        return self.objects[a].lift - self.objects[b].lift

    def fiber_degree(self, a, b):
        """Realized fiber degree of the (a, b) block, None if zero block."""
        block = self.blocks.get((a, b))
        if block is None:
            return None
        d = block.degree(self.objects[a].generators(), self.objects[b].generators())
        return None if d is None else d + 1

    def irreducibles(self):
        return [o.name for o in self.objects.values() if o.kind == "irreducible"]

    def abelians(self):
        return [o.name for o in self.objects.values() if o.kind == "abelian"]

    def centrals(self):
        return [o.name for o in self.objects.values() if o.kind == "central"]

    # -- document form --

    def to_document(self):
        return {
            "period": self.period,
            "objects": [
                {"name": o.name, "kind": o.kind, "grading": o.lift}
                for o in self.objects.values()
            ],
            "blocks": [
                {"from": a, "to": b,
                 "entries": [[s, d, str(c)] for (s, d), c in sorted(block.entries.items())]}
                for (a, b), block in sorted(self.blocks.items())
            ],
        }

    @classmethod
    def from_document(cls, doc):
        objects = [FlowObject(o["name"], o["kind"], int(o["grading"]))
                   for o in doc["objects"]]
        blocks = {}
        for bd in doc.get("blocks", []):
            blocks[(bd["from"], bd["to"])] = Block(
                {(s, d): Fraction(c) for s, d, c in bd["entries"]})
        return cls(objects, blocks, period=doc.get("period", 8))


def _check_block_degrees(report, axiom, period, src_obj, dst_obj, block,
                         expected_mod, where):
    """Degree homogeneity, submersive bound, mod-2N consistency."""
    try:
        d = block.degree(src_obj.generators(), dst_obj.generators())
    except FlowError as err:
        report.fail(axiom, where, str(err))
        return None
    if d is None:
        return None
    if d < 0 or d > 3:
        report.fail(axiom, where,
                    f"operator degree {d} outside the orbit-model range [0,3]")
        return None
    if (d - expected_mod) % period != 0:
        report.fail(axiom, where,
                    f"operator degree {d} != {expected_mod % period} mod {period}")
        return None
    return d


def _check_u_equivariance(report, axiom, src_obj, dst_obj, block, where):
    """F(u x) = (-1)^(3 deg F) u F(x) entry-exactly."""
    try:
        d = block.degree(src_obj.generators(), dst_obj.generators())
    except FlowError:
        return
    if d is None:
        return
    sign = -1 if (3 * d) % 2 else 1
    u_src = u_block(src_obj.kind)
    u_dst = u_block(dst_obj.kind)
    lhs = block.compose(u_src)
    rhs = u_dst.compose(block).scaled(sign)
    if lhs != rhs:
        report.fail(axiom, where,
                    f"u-equivariance fails: F(u x) = {lhs}, (-1)^[3 deg]u F(x) = {rhs}")


def validate_flowcat(fc):
    """Degree bookkeeping, u-equivariance, and the flow-category relation."""
    report = FlowReport()
    names = fc.object_names()
    for (a, b), block in fc.blocks.items():
        src, dst = fc.objects[a], fc.objects[b]
        expected = (fc.lift_diff(a, b) - 1) % fc.period
        d = _check_block_degrees(report, "flowcat.degree", fc.period, src, dst,
                                 block, expected, (a, b))
        if d is not None and a == b:
            report.fail("flowcat.degree", (a, b), "self-block violates the submersive bound")
        _check_u_equivariance(report, "flowcat.u-equivariance", src, dst, block, (a, b))
    if not report.ok:
        return report
    # AX1: sum over middles gamma of (-1)^{i(a,gamma)} F_{a gamma} then F_{gamma b}
    for a in names:
        for b in names:
            total = Block()
            witness_mid = None
            for mid in names:
                first = fc.blocks.get((a, mid))
                second = fc.blocks.get((mid, b))
                if first is None or second is None:
                    continue
                parity = fc.lift_diff(a, mid) % fc.period
                sign = -1 if parity % 2 else 1
                total = total.plus(second.compose(first), sign)
                witness_mid = mid
            if not total.is_zero():
                report.fail("flowcat.AX1", (a, witness_mid, b),
                            f"composite boundary relation fails: {total}")
    return report


def require_valid(fc):
    report = validate_flowcat(fc)
    if not report.ok:
        raise FlowError(f"invalid-flow-category: {report.first}")


def coeff_to_ring(ring, q):
    """Exact image of a Fraction in the coefficient ring."""
    q = Fraction(q)
    if ring is ZZ:
        if q.denominator != 1:
            raise FlowError(f"bad-coefficients: {q} is not an integer")
        return q.numerator
    if ring.is_field and hasattr(ring, "p"):
        if q.denominator % ring.p == 0:
            raise FlowError(f"bad-coefficients: {q} has denominator divisible by {ring.p}")
        return (q.numerator * pow(q.denominator, -1, ring.p)) % ring.p
    return q  # rationals


def cm_complex(fc, ring=QQ):
    """Flow complex of a valid flow category, as an EquivariantComplex.

    d(x) = (-1)^{dim x} sum of block images; the internal orbit-model
    differential vanishes in the minimal models.
    """
    require_valid(fc)
    gens = []
    u_map = {}
    for obj in fc.objects.values():
        for g, deg in obj.generators().items():
            gens.append((f"{obj.name}.{g}", obj.lift + deg))
        for g, (tgt, c) in U_ACTION[obj.kind].items():
            u_map[f"{obj.name}.{g}"] = {f"{obj.name}.{tgt}": ring.from_int(c)}
    diff = {}
    for (a, b), block in fc.blocks.items():
        amodel = fc.objects[a].generators()
        for (src, dst), coeff in block.entries.items():
            sign = -1 if amodel[src] % 2 else 1
            key = f"{a}.{src}"
            img = diff.setdefault(key, {})
            tgt = f"{b}.{dst}"
            value = ring.mul(ring.from_int(sign), coeff_to_ring(ring, coeff))
            img[tgt] = ring.add(img.get(tgt, ring.zero()), value)
    diff = {k: {t: c for t, c in v.items() if not ring.is_zero(c)} for k, v in diff.items()}
    diff = {k: v for k, v in diff.items() if v}
    return EquivariantComplex(ring, gens, diff, u_map, period=fc.period)


# ---- bimodules -------------------------------------------------------------

class BimoduleData:
    """Blocks M_{XY'} between two flow categories, with affine degree.

    ``offset`` pins the affine degree function through the lifts:
    the block (X, Y') has fiber degree = lift(X) - lift(Y') + offset
    modulo the period.
    """

    def __init__(self, source, target, blocks=None, offset=0):
        if source.period != target.period:
            raise FlowError("source and target periods differ")
        self.source = source
        self.target = target
        self.period = source.period
        self.offset = offset % self.period
        self.blocks = {}
        for (a, b), block in (blocks or {}).items():
            if a not in source.objects or b not in target.objects:
                raise FlowError(f"bimodule block ({a},{b}) references unknown object")
            if not isinstance(block, Block):
                block = Block(block)
            if not block.is_zero():
                self.blocks[(a, b)] = block

    def block(self, a, b):
        return self.blocks.get((a, b), Block())

    def degree_of(self, a, b):
        return (self.source.objects[a].lift - self.target.objects[b].lift
                + self.offset) % self.period

    def to_document(self):
        return {
            "offset": self.offset,
            "source": self.source.to_document(),
            "target": self.target.to_document(),
            "blocks": [
                {"from": a, "to": b,
                 "entries": [[s, d, str(c)] for (s, d), c in sorted(block.entries.items())]}
                for (a, b), block in sorted(self.blocks.items())
            ],
        }

    @classmethod
    def from_document(cls, doc):
        source = FlowCategoryData.from_document(doc["source"])
        target = FlowCategoryData.from_document(doc["target"])
        blocks = {}
        for bd in doc.get("blocks", []):
            blocks[(bd["from"], bd["to"])] = Block(
                {(s, d): Fraction(c) for s, d, c in bd["entries"]})
        return cls(source, target, blocks, offset=doc.get("offset", 0))


def validate_bimodule(bm):
    """Degree bookkeeping, u-equivariance, and the bimodule relation."""
    report = FlowReport()
    for (a, b), block in bm.blocks.items():
        src, dst = bm.source.objects[a], bm.target.objects[b]
        expected = bm.degree_of(a, b)
        _check_block_degrees(report, "bimodule.degree", bm.period, src, dst,
                             block, expected, (a, b))
        _check_u_equivariance(report, "bimodule.u-equivariance", src, dst, block, (a, b))
    if not report.ok:
        return report
    # sum_Z M_{Z Y} o F_{X Z} + sum_W (-1)^{i_M(X,W)+1} F'_{W Y} o M_{X W} = 0
    for a in bm.source.object_names():
        for b in bm.target.object_names():
            total = Block()
            for mid in bm.source.object_names():
                first = bm.source.blocks.get((a, mid))
                second = bm.blocks.get((mid, b))
                if first is None or second is None:
                    continue
                total = total.plus(second.compose(first), 1)
            for mid in bm.target.object_names():
                first = bm.blocks.get((a, mid))
                second = bm.target.blocks.get((mid, b))
                if first is None or second is None:
                    continue
                parity = bm.degree_of(a, mid) % 2
                sign = 1 if parity else -1  # (-1)^{i_M(X,W)+1}
                total = total.plus(second.compose(first), sign)
            if not total.is_zero():
                report.fail("bimodule.relation", (a, b),
                            f"boundary relation fails: {total}")
    return report


def require_valid_bimodule(bm):
    report = validate_bimodule(bm)
    if not report.ok:
        raise FlowError(f"invalid-bimodule: {report.first}")


def identity_bimodule(fc):
    blocks = {(name, name): identity_block(obj.kind)
              for name, obj in fc.objects.items()}
    return BimoduleData(fc, fc, blocks, offset=0)


def compose_bimodules(second, first):
    """second o first: bimodule from first.source to second.target."""
    if first.target is not second.source and \
            first.target.to_document() != second.source.to_document():
        raise FlowError("bimodules are not composable")
    blocks = {}
    for a in first.source.object_names():
        for c in second.target.object_names():
            total = Block()
            for b in first.target.object_names():
                m1 = first.blocks.get((a, b))
                m2 = second.blocks.get((b, c))
                if m1 is None or m2 is None:
                    continue
                total = total.plus(m2.compose(m1), 1)
            if not total.is_zero():
                blocks[(a, c)] = total
    return BimoduleData(first.source, second.target, blocks,
                        offset=first.offset + second.offset)


def induced_map(bm, ring=QQ):
    """Chain map between the flow complexes; the identity d' o Phi = Phi o d
    and blockwise u-equivariance are verified exactly."""
    require_valid_bimodule(bm)
    source = cm_complex(bm.source, ring)
    target = cm_complex(bm.target, ring)
    mapping = {}
    for (a, b), block in bm.blocks.items():
        for (src, dst), coeff in block.entries.items():
            key = f"{a}.{src}"
            img = mapping.setdefault(key, {})
            tgt = f"{b}.{dst}"
            value = coeff_to_ring(ring, coeff)
            img[tgt] = ring.add(img.get(tgt, ring.zero()), value)
    chain_map = ChainMap(source, target, mapping, ring)
    if not chain_map.commutes_with_d():
        raise FlowError("induced map is not a chain map (internal inconsistency)")
    return chain_map


class ChainMap:
    def __init__(self, source, target, mapping, ring):
        self.source = source
        self.target = target
        self.mapping = {k: dict(v) for k, v in mapping.items()}
        self.ring = ring

    def apply(self, vector):
        R = self.ring
        out = {}
        for gen, coeff in vector.items():
            for tgt, w in self.mapping.get(gen, {}).items():
                out[tgt] = R.add(out.get(tgt, R.zero()), R.mul(coeff, w))
        return {k: v for k, v in out.items() if not R.is_zero(v)}

    def commutes_with_d(self):
        R = self.ring
        for gen, _ in self.source.generators:
            lhs = self.target.apply_d(self.apply({gen: R.one()}))
            rhs = self.apply(self.source.apply_d({gen: R.one()}))
            delta = dict(lhs)
            for k, v in rhs.items():
                delta[k] = R.sub(delta.get(k, R.zero()), v)
            if any(not R.is_zero(v) for v in delta.values()):
                return False
        return True

    def is_quasi_iso(self):
        """Rank equality plus acyclicity of the mapping cone."""
        hs = self.source.complex.homology()
        ht = self.target.complex.homology()
        gradings = set(hs) | set(ht)
        for g in gradings:
            if hs.get(g, (0, []))[0] != ht.get(g, (0, []))[0]:
                return False
        return self.cone_is_acyclic()

    def cone_is_acyclic(self):
        R = self.ring
        gens = [(f"src:{n}", d + 1) for n, d in self.source.generators]
        gens += [(f"tgt:{n}", d) for n, d in self.target.generators]
        diff = {}
        for n, _ in self.source.generators:
            img = {}
            for t, c in self.source.differential.get(n, {}).items():
                img[f"src:{t}"] = R.neg(c)
            for t, c in self.mapping.get(n, {}).items():
                img[f"tgt:{t}"] = R.add(img.get(f"tgt:{t}", R.zero()), c)
            img = {k: v for k, v in img.items() if not R.is_zero(v)}
            if img:
                diff[f"src:{n}"] = img
        for n, _ in self.target.generators:
            img = {f"tgt:{t}": c for t, c in self.target.differential.get(n, {}).items()}
            if img:
                diff[f"tgt:{n}"] = img
        cone = GradedComplex(R, gens, diff, period=self.source.period)
        hom = cone.homology()
        return all(free == 0 and not torsion for free, torsion in hom.values())


# ---- homotopies ------------------------------------------------------------

class HomotopyData:
    """Blocks H_{XY'} of degree i_M + 1 between bimodules with equal degree."""

    def __init__(self, m0, m1, blocks=None):
        if m0.source is not m1.source or m0.target is not m1.target:
            if (m0.source.to_document() != m1.source.to_document()
                    or m0.target.to_document() != m1.target.to_document()):
                raise FlowError("homotopy endpoints live between different categories")
        if m0.offset != m1.offset:
            raise FlowError("degree-mismatch: bimodules do not have the same relative degree")
        self.m0 = m0
        self.m1 = m1
        self.period = m0.period
        self.blocks = {}
        for (a, b), block in (blocks or {}).items():
            if not isinstance(block, Block):
                block = Block(block)
            if not block.is_zero():
                self.blocks[(a, b)] = block

    def degree_of(self, a, b):
        return (self.m0.degree_of(a, b) + 1) % self.period


def validate_homotopy(h):
    """M1 - M0 = sum (-1)^{i_C} F H + sum (-1)^{i_M} H F' blockwise."""
    report = FlowReport()
    m0, m1 = h.m0, h.m1
    source, target = m0.source, m0.target
    for (a, b), block in h.blocks.items():
        src, dst = source.objects[a], target.objects[b]
        expected = h.degree_of(a, b)
        _check_block_degrees(report, "homotopy.degree", h.period, src, dst,
                             block, expected, (a, b))
        _check_u_equivariance(report, "homotopy.u-equivariance", src, dst, block, (a, b))
    if not report.ok:
        return report
    for a in source.object_names():
        for b in target.object_names():
            total = m1.block(a, b).plus(m0.block(a, b), -1)
            for mid in source.object_names():
                first = source.blocks.get((a, mid))
                second = h.blocks.get((mid, b))
                if first is None or second is None:
                    continue
                parity = source.lift_diff(a, mid) % source.period % 2
                total = total.plus(second.compose(first), -1 if parity else 1)
            for mid in target.object_names():
                first = h.blocks.get((a, mid))
                second = target.blocks.get((mid, b))
                if first is None or second is None:
                    continue
                parity = m0.degree_of(a, mid) % 2
                total = total.plus(second.compose(first), -1 if parity else 1)
            if not total.is_zero():
                report.fail("homotopy.relation", (a, b),
                            f"relation-violated: residual {total}")
    return report


def induced_homotopy(h, ring=QQ):
    """Chain homotopy K with Phi1 - Phi0 = d'K + Kd, verified exactly."""
    report = validate_homotopy(h)
    if not report.ok:
        raise FlowError(f"relation-violated: {report.first}")
    phi0 = induced_map(h.m0, ring)
    phi1 = induced_map(h.m1, ring)
    source, target = phi0.source, phi0.target
    mapping = {}
    for (a, b), block in h.blocks.items():
        amodel = h.m0.source.objects[a].generators()
        for (src, dst), coeff in block.entries.items():
            sign = -1 if amodel[src] % 2 else 1
            key = f"{a}.{src}"
            img = mapping.setdefault(key, {})
            tgt = f"{b}.{dst}"
            value = ring.mul(ring.from_int(sign), coeff_to_ring(ring, coeff))
            img[tgt] = ring.add(img.get(tgt, ring.zero()), value)
    K = ChainMap(source, target, mapping, ring)
    R = ring
    for gen, _ in source.generators:
        one = {gen: R.one()}
        lhs = {}
        for k, v in target.apply_d(K.apply(one)).items():
            lhs[k] = R.add(lhs.get(k, R.zero()), v)
        for k, v in K.apply(source.apply_d(one)).items():
            lhs[k] = R.add(lhs.get(k, R.zero()), v)
        rhs = dict(phi1.apply(one))
        for k, v in phi0.apply(one).items():
            rhs[k] = R.sub(rhs.get(k, R.zero()), v)
        delta = dict(lhs)
        for k, v in rhs.items():
            delta[k] = R.sub(delta.get(k, R.zero()), v)
        if any(not R.is_zero(v) for v in delta.values()):
            raise FlowError(f"homotopy identity fails at generator {gen}")
    return K
