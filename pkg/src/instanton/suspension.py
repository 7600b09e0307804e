"""Suspended flow categories, comparison bimodules, lifts, and wall-crossing.

Suspending at an abelian orbit rho replaces it by a sphere-bundle orbit
S_rho (irreducible model, grading one lower) and a shifted copy rho-bar
(abelian model, grading two lower).  The new blocks are assembled from
section data: the blowup block B from the SO(3) model and the zero-locus
block Z from the S^2 model, subject to the compatibility and boundary
constraints that make the output a flow category.  The comparison
bimodule Sigma_rho is a quasi-isomorphism; bimodules out of the source
category lift over the suspension (W-hat), and obstructed-cobordism
block data assembles into a bimodule W_minus into a suspended target.
"""

from __future__ import annotations

from fractions import Fraction

from .equivariant import euler_char, irreducible_complex
from .flow import (Block, BimoduleData, FlowCategoryData, FlowError, FlowObject,
                   SectionIncompatible, coeff_to_ring, compose_bimodules,
                   identity_block, induced_map, require_valid, validate_bimodule,
                   validate_flowcat)
from .complexes import GradedComplex
from .rings import QQ, ZZ

# the pullback operator C_*(S^2) -> C_*(SO(3)): points lift to circles
# (zero in the minimal model), the fundamental class to the fundamental class
SIGMA_PULL = Block({("s2", "g3"): 1})

# the bundle projection operator C_*(SO(3)) -> C_*(S^2): the fundamental
# class pushes to a degenerate chain
PROJECTION = Block({("g0", "s0"): 1})


class SectionData:
    """Blowup and zero-locus blocks over the moduli out of rho.

    ``B[beta]``: operator from the SO(3) model to C_*(beta) (realized
    degree fiber(rho,beta) - 2); ``Z[beta]``: from the S^2 model
    (realized degree fiber(rho,beta) - 3).
    """

    def __init__(self, B=None, Z=None):
        self.B = {k: (v if isinstance(v, Block) else Block(v))
                  for k, v in (B or {}).items() if v}
        self.Z = {k: (v if isinstance(v, Block) else Block(v))
                  for k, v in (Z or {}).items() if v}
        self.B = {k: v for k, v in self.B.items() if not v.is_zero()}
        self.Z = {k: v for k, v in self.Z.items() if not v.is_zero()}

    def to_document(self):
        return {
            "B": {k: [[s, d, str(c)] for (s, d), c in sorted(v.entries.items())]
                  for k, v in self.B.items()},
            "Z": {k: [[s, d, str(c)] for (s, d), c in sorted(v.entries.items())]
                  for k, v in self.Z.items()},
        }

    @classmethod
    def from_document(cls, doc):
        return cls(
            B={k: Block({(s, d): Fraction(c) for s, d, c in rows})
               for k, rows in doc.get("B", {}).items()},
            Z={k: Block({(s, d): Fraction(c) for s, d, c in rows})
               for k, rows in doc.get("Z", {}).items()},
        )


def default_sections(fc, rho):
    """Nowhere-zero sections for the three-dimensional-moduli case.

    Every nonzero block out of rho must have fiber degree 2 (free-orbit
    moduli); B transcribes each such block as count x identity on the
    SO(3) model and Z vanishes.
    """
    _require_abelian(fc, rho)
    B = {}
    for (a, b), block in fc.blocks.items():
        if a != rho:
            continue
        fiber = fc.fiber_degree(a, b)
        if fiber != 2:
            raise FlowError(
                f"higher-block-present: block ({a},{b}) has fiber degree {fiber}, "
                "default sections require 2; supply explicit sections")
        count = block.entries.get(("s2", "g3"), Fraction(0))
        B[b] = identity_block("irreducible").scaled(count)
    return SectionData(B=B, Z={})


def _require_abelian(fc, rho):
    if rho not in fc.objects:
        raise FlowError(f"unknown object {rho}")
    if fc.objects[rho].kind != "abelian":
        raise FlowError(f"not-abelian: {rho} has kind {fc.objects[rho].kind}")


def validate_sections(fc, rho, sections):
    """Compatibility (B pushes down to the rho-blocks) and the blowup
    boundary constraints that thm-level suspension validity needs."""
    _require_abelian(fc, rho)
    failures = []
    targets = set(sections.B) | set(sections.Z) | \
        {b for (a, b) in fc.blocks if a == rho}
    for beta in sorted(targets):
        if beta == rho:
            failures.append(("sections.target", beta, "sections may not target rho"))
            continue
        F = fc.block(rho, beta)
        B = sections.B.get(beta, Block())
        Z = sections.Z.get(beta, Block())
        # pushing B down to the base recovers the flow block
        if B.compose(SIGMA_PULL) != F:
            failures.append(
                ("sections.compat", beta,
                 f"B does not collapse to the rho-block: {B.compose(SIGMA_PULL)} != {F}"))
    # boundary constraint of the blowup: for each target beta,
    # sum_gamma (-1)^{i(rho,gamma)} F_{gamma beta} o B_gamma = Z_beta o proj
    for beta in sorted(fc.object_names()):
        if beta == rho:
            continue
        total = Block()
        for gamma in fc.object_names():
            if gamma == rho:
                continue
            B_g = sections.B.get(gamma)
            F_gb = fc.blocks.get((gamma, beta))
            if B_g is None or F_gb is None:
                continue
            parity = fc.lift_diff(rho, gamma) % fc.period % 2
            total = total.plus(F_gb.compose(B_g), -1 if parity else 1)
        Z_b = sections.Z.get(beta, Block())
        total = total.plus(Z_b.compose(PROJECTION), -1)
        if not total.is_zero():
            failures.append(("sections.boundary", beta,
                             f"blowup boundary relation fails: {total}"))
    # zero-locus shadow of the flow relation
    for beta in sorted(fc.object_names()):
        if beta == rho:
            continue
        total = Block()
        for gamma in fc.object_names():
            if gamma == rho:
                continue
            Z_g = sections.Z.get(gamma)
            F_gb = fc.blocks.get((gamma, beta))
            if Z_g is None or F_gb is None:
                continue
            parity = fc.lift_diff(rho, gamma) % fc.period % 2
            total = total.plus(F_gb.compose(Z_g), -1 if parity else 1)
        if not total.is_zero():
            failures.append(("sections.zero-locus", beta,
                             f"zero-locus boundary relation fails: {total}"))
    return failures


def suspended_names(rho):
    return f"S({rho})", f"{rho}-bar"


def suspend(fc, rho, sections=None):
    """The suspended flow category at an abelian orbit.

    rho is replaced by S_rho (irreducible kind, grading lift - 1) and
    rho-bar (abelian kind, grading lift - 2); blocks follow the
    suspension matrix.  The output is validated as a flow category.
    """
    require_valid(fc)
    _require_abelian(fc, rho)
    if sections is None:
        sections = default_sections(fc, rho)
    failures = validate_sections(fc, rho, sections)
    if failures:
        axiom, witness, detail = failures[0]
        raise SectionIncompatible(f"section-incompatible [{axiom}] at {witness}: {detail}")

    s_name, bar_name = suspended_names(rho)
    lift = fc.objects[rho].lift
    objects = [obj for name, obj in fc.objects.items() if name != rho]
    objects.append(FlowObject(s_name, "irreducible", lift - 1))
    objects.append(FlowObject(bar_name, "abelian", lift - 2))

    blocks = {}
    for (a, b), block in fc.blocks.items():
        if a == rho and b == rho:
            raise FlowError("self-block at rho cannot be suspended")
        if a == rho:
            continue  # replaced by section blocks out of S_rho / rho-bar
        if b == rho:
            pulled = SIGMA_PULL.compose(block)
            if not pulled.is_zero():
                blocks[(a, s_name)] = pulled
        else:
            blocks[(a, b)] = block
    for beta, B in sections.B.items():
        nb = B.scaled(-1)
        if not nb.is_zero():
            blocks[(s_name, beta)] = nb
    for beta, Z in sections.Z.items():
        blocks[(bar_name, beta)] = Z
    blocks[(s_name, bar_name)] = PROJECTION

    out = FlowCategoryData(objects, blocks, period=fc.period)
    report = validate_flowcat(out)
    if not report.ok:
        raise SectionIncompatible(f"section-incompatible: suspension fails {report.first}")
    return out


def sigma_rho(fc, rho, sections=None, ring=QQ, suspension=None):
    """Comparison bimodule fc -> suspend(fc, rho): identity off rho, the
    circle-bundle pullback on rho, and a correction block rho -> rho-bar
    solved for so that the bimodule relation holds and the induced map
    is a quasi-isomorphism (coefficient 1/2 in the clean case, whence
    characteristic != 2)."""
    if suspension is None:
        suspension = suspend(fc, rho, sections)
    s_name, bar_name = suspended_names(rho)

    def build(t):
        blocks = {}
        for name, obj in fc.objects.items():
            if name != rho:
                blocks[(name, name)] = identity_block(obj.kind)
        blocks[(rho, s_name)] = SIGMA_PULL
        if t != 0:
            blocks[(rho, bar_name)] = Block({("s0", "s2"): t})
        return BimoduleData(fc, suspension, blocks, offset=0)

    last_error = None
    for t in (Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1), Fraction(0)):
        bm = build(t)
        report = validate_bimodule(bm)
        if not report.ok:
            last_error = report.first
            continue
        phi = induced_map(bm, ring)
        if phi.is_quasi_iso():
            return bm
        last_error = ("sigma.quasi-iso", t, "induced map is not a quasi-isomorphism")
    raise FlowError(f"sigma_rho failed: {last_error}")


def lift_Wplus(w, rho, wsections, suspension=None):
    """Lift a bimodule w: fc -> fc' over the suspension of its source.

    ``wsections`` provides, per target object, the blowup block B^W
    (from the SO(3) model) and zero-locus block Z^W (from the S^2
    model) over the w-moduli out of rho.  The result W-hat satisfies
    compose(W-hat, Sigma_rho) = w block-exactly, which is verified.
    """
    fc = w.source
    _require_abelian(fc, rho)
    if suspension is None:
        raise FlowError("lift_Wplus needs the suspension of the source category")
    s_name, bar_name = suspended_names(rho)

    blocks = {}
    for (a, b), block in w.blocks.items():
        if a == rho:
            continue
        blocks[(a, b)] = block
    for beta, B in wsections.B.items():
        if not B.is_zero():
            blocks[(s_name, beta)] = B
    for beta, Z in wsections.Z.items():
        if not Z.is_zero():
            blocks[(bar_name, beta)] = Z
    what = BimoduleData(suspension, w.target, blocks, offset=w.offset)
    report = validate_bimodule(what)
    if not report.ok:
        raise SectionIncompatible(f"section-incompatible: {report.first}")
    return what


def verify_wplus_composite(what, sigma, w):
    """compose(W-hat, Sigma_rho) = w, block by block."""
    composite = compose_bimodules(what, sigma)
    names_a = list(w.source.object_names())
    names_b = list(w.target.object_names())
    for a in names_a:
        for b in names_b:
            if composite.block(a, b) != w.block(a, b):
                return False, (a, b)
    return True, None


def build_Wminus(fc, fc_target, rho, rho_prime, n_blocks, sections_source,
                 target_sections=None, offset=None, suspension=None):
    """Bimodule of an obstructed cobordism into a suspended target.

    ``n_blocks``: modified-moduli operator data (fc objects x fc_target
    objects); ``sections_source``: B(alpha,rho)/Z(alpha,rho) blocks over
    the source moduli into rho, mapping to the S_rho' and rho-bar'
    models.  The (alpha, S_rho') entry is N(alpha,rho') pulled back
    minus (-1)^{i(alpha,rho)} B(alpha,rho); the (rho, rho-bar') entry is
    the obstructed-orbit correspondence.
    """
    _require_abelian(fc, rho)
    _require_abelian(fc_target, rho_prime)
    if suspension is None:
        suspension = suspend(fc_target, rho_prime, target_sections)
    s_name, bar_name = suspended_names(rho_prime)
    if offset is None:
        # pinned by the obstructed reducible: fiber degree -2 across (rho, rho')
        offset = (-2 - fc.objects[rho].lift + fc_target.objects[rho_prime].lift) \
            % fc.period

    blocks = {}
    for (a, b), block in n_blocks.items():
        if not isinstance(block, Block):
            block = Block(block)
        if block.is_zero():
            continue
        if b == rho_prime:
            continue  # enters through the pullback below
        blocks[(a, b)] = block
    for a in fc.object_names():
        if a == rho:
            continue
        n_rho = n_blocks.get((a, rho_prime), Block())
        if not isinstance(n_rho, Block):
            n_rho = Block(n_rho)
        term = SIGMA_PULL.compose(n_rho)
        B = sections_source.B.get(a, Block())
        fiber = fc.fiber_degree(a, rho)
        if not B.is_zero():
            if fiber is None:
                raise SectionIncompatible(
                    f"section-incompatible: B({a},{rho}) without a flow block")
            sign = -1 if fiber % 2 else 1
            term = term.plus(B, -sign)
        if not term.is_zero():
            blocks[(a, s_name)] = term
    # bottom-right entry: the obstructed-orbit correspondence rho -> rho-bar'
    blocks[(rho, bar_name)] = identity_block("abelian")

    wminus = BimoduleData(fc, suspension, blocks, offset=offset)
    report = validate_bimodule(wminus)
    if not report.ok:
        axiom, (a, b), detail = report.first
        if a == rho:
            tag = "r"
        elif b in (s_name, bar_name):
            tag = "l"
        else:
            tag = "c"
        raise FlowError(f"relation-violated({tag}) at {(a, b)}: {detail}")
    return wminus


# ---- wall-crossing -----------------------------------------------------------

class WallcrossReport:
    def __init__(self, rho, lift, v2, i0, i1, triangle_checks, chi0, chi1):
        self.rho = rho
        self.lift = lift
        self.v2 = v2
        self.i0 = i0
        self.i1 = i1
        self.triangle_checks = triangle_checks
        self.chi0 = chi0
        self.chi1 = chi1

    @property
    def triangle_exact(self):
        return all(ok for _, ok in self.triangle_checks)

    @property
    def chi_drop(self):
        return self.chi0 - self.chi1

    def to_document(self):
        return {
            "rho": self.rho,
            "grading": self.lift,
            "V2": {k: str(v) for k, v in sorted(self.v2.items())},
            "I0": {str(g): list(map(str, v)) for g, v in sorted(self.i0.items())},
            "I1": {str(g): list(map(str, v)) for g, v in sorted(self.i1.items())},
            "triangle_exact": self.triangle_exact,
            "chi": [self.chi0, self.chi1],
            "chi_drop": self.chi_drop,
        }


def _homology_ranks(hom):
    return {g: free for g, (free, _) in hom.items()}


def wallcross(fc, rho, sections=None, ring=ZZ):
    """Irreducible homology on both sides of a wall, the V2 class, and a
    rank-exact check of the surgery-style triangle; chi drops by one."""
    require_valid(fc)
    suspension = suspend(fc, rho, sections)
    s_name, _ = suspended_names(rho)
    lift = fc.objects[rho].lift

    c0 = irreducible_complex(fc, ring)
    c1 = irreducible_complex(suspension, ring)
    i0 = c0.homology()
    i1 = c1.homology()

    # V2: signed counts of isolated irreducible components of the
    # rho-moduli, read off the suspension differential at S_rho
    v2 = {}
    for b, coeff in c1.differential.get(s_name, {}).items():
        v2[b] = ring.neg(coeff)  # d(S_rho) = -V2

    # rank-exactness of ... -> Z[lift] -> I0 -> I1 -> ... via the cone
    # sub/quotient long exact sequence of C0 -> C1 -> Z<S_rho>
    checks = _cone_exactness(c0, c1, s_name, ring)

    chi0 = euler_char(i0)
    chi1 = euler_char(i1)
    return WallcrossReport(rho, lift, v2, i0, i1, checks, chi0, chi1)


class _FieldComplex:
    """A finite mod-2N complex over a field, with explicit cycle and
    boundary spaces per grading (vectors in the generator basis)."""

    def __init__(self, c, field):
        self.field = field
        self.period = c.period
        self.generators = {}   # grading -> [names]
        for name, _ in c.generators:
            self.generators.setdefault(c.grading_of(name), []).append(name)
        self.vectors = {}
        self.cycles = {}
        self.boundaries = {}
        for g in self.gradings():
            self.cycles[g] = self._cycles_at(c, g)
            self.boundaries[g] = self._boundaries_at(c, g)

    def gradings(self):
        gs = set(self.generators)
        if self.period is not None:
            gs |= {(g - 1) % self.period for g in self.generators}
        return sorted(gs)

    def names(self, g):
        return self.generators.get(g, [])

    def _entry(self, v):
        if isinstance(v, int):
            return coeff_to_ring(self.field, Fraction(v))
        return v

    def _cycles_at(self, c, g):
        from .matrices import SparseMatrix, kernel_basis
        src = c.generators_in(g)
        if not src:
            return []
        M, _, dst = c.d_matrix(g)
        entries = {(i, j): self._entry(v) for (i, j), v in M.entries.items()}
        A = SparseMatrix(self.field, len(dst), len(src), entries)
        return kernel_basis(A)

    def _boundaries_at(self, c, g):
        up = g + 1 if self.period is None else (g + 1) % self.period
        src = c.generators_in(up)
        dst = c.generators_in(g)
        idx = {n: i for i, n in enumerate(dst)}
        out = []
        for s in src:
            vec = [self.field.zero()] * len(dst)
            hit = False
            for t, coeff in c.differential.get(s, {}).items():
                if t in idx:
                    vec[idx[t]] = self._entry(coeff)
                    hit = True
            if hit:
                out.append(vec)
        return out

    def hom_rank(self, g):
        from .equivariant import _field_rank
        cyc = self.cycles.get(g, [])
        if not cyc:
            return 0
        bnd = self.boundaries.get(g, [])
        rank_b = _field_rank(self.field, bnd) if bnd else 0
        return len(cyc) - rank_b

    def class_rank(self, g, vectors):
        """Rank of the span of the given vectors in H_g (mod boundaries)."""
        from .equivariant import _field_rank
        bnd = self.boundaries.get(g, [])
        base = _field_rank(self.field, bnd) if bnd else 0
        rows = [v for v in vectors if any(not self.field.is_zero(x) for x in v)]
        if not rows:
            return 0
        return _field_rank(self.field, rows + bnd) - base


def _cone_exactness(c0, c1, new_gen, ring):
    """Rank-exactness of the triangle from the short exact sequence
    0 -> C0 -> C1 -> (free rank one on new_gen) -> 0."""
    field = QQ if ring is ZZ else ring
    F0 = _FieldComplex(c0, field)
    F1 = _FieldComplex(c1, field)
    period = c1.period
    lift_q = dict(c1.generators)[new_gen] % period

    def include(g):
        """Rank of H_g(C0) -> H_g(C1)."""
        names0 = F0.names(g)
        names1 = F1.names(g)
        idx1 = {n: i for i, n in enumerate(names1)}
        mapped = []
        for col in F0.cycles.get(g, []):
            vec = [field.zero()] * len(names1)
            for i, n in enumerate(names0):
                vec[idx1[n]] = col[i]
            mapped.append(vec)
        return F1.class_rank(g, mapped)

    def project(g):
        """Rank of H_g(C1) -> H_g(quotient): the new_gen coefficient of
        any cycle (boundaries never meet new_gen: C0 is a subcomplex)."""
        if g != lift_q:
            return 0
        names1 = F1.names(g)
        if new_gen not in names1:
            return 0
        k = names1.index(new_gen)
        for col in F1.cycles.get(g, []):
            if not field.is_zero(col[k]):
                return 1
        return 0

    def connect(g):
        """Rank of H_g(Q) -> H_{g-1}(C0): [new_gen] -> [d new_gen]."""
        if g != lift_q:
            return 0
        prev = (g - 1) % period
        names0 = F0.names(prev)
        idx0 = {n: i for i, n in enumerate(names0)}
        vec = [field.zero()] * len(names0)
        for t, coeff in c1.differential.get(new_gen, {}).items():
            if t in idx0:
                vec[idx0[t]] = coeff if not isinstance(coeff, int) else \
                    coeff_to_ring(field, Fraction(coeff))
        return F0.class_rank(prev, [vec])

    checks = []
    for g in sorted(set(F0.gradings()) | set(F1.gradings()) | {lift_q}):
        h0 = F0.hom_rank(g)
        h1 = F1.hom_rank(g)
        hq = 1 if g == lift_q else 0
        ok = (include(g) + project(g) == h1)          # exact at H_g(C1)
        ok = ok and (project(g) + connect(g) == hq)   # exact at H_g(Q)
        up = (g + 1) % period
        ok = ok and (connect(up) + include(g) == h0)  # exact at H_g(C0)
        checks.append((g, ok))
    return checks


def chamber_ledger(fc, rhos, ring=ZZ, sections_for=None):
    """Euler characteristics along an adjacent-chamber path of suspensions.

    Crossing the wall at each listed abelian orbit drops chi by exactly
    one; the cumulative drop is the number of steps, matching the
    quarter-sum of the signature-data increments (4 per step).
    """
    chis = []
    current = fc
    chis.append(euler_char(irreducible_complex(current, ring).homology()))
    for rho in rhos:
        sections = sections_for(current, rho) if sections_for else None
        current = suspend(current, rho, sections)
        chis.append(euler_char(irreducible_complex(current, ring).homology()))
    return chis
