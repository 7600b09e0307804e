"""Combinatorial oriented stratified chains with signed boundary calculus.

A chain is a graded face poset with signed codimension-1 incidences,
plus degeneracy/triviality flags and collapse classes.  The validator
enforces the formal shadow of the stratified-smooth axioms: strictly
order-preserving dimensions, pairwise-cancelling rank-2 intervals, the
one-dimensional vertex sign law, and (on demand) cube-shaped up-sets.
Products, truncation and real blowup implement the exact sign formulas
of the boundary calculus; gm_complex assembles truncated geometric
chain complexes whose homology the exact kernel computes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .complexes import GradedComplex
from .rings import ZZ


class StrataError(ValueError):
    pass


class ValidationFailure:
    def __init__(self, axiom, witness, detail):
        self.axiom = axiom
        self.witness = witness
        self.detail = detail

    def __repr__(self):
        return f"[{self.axiom}] at {self.witness}: {self.detail}"


class ValidationReport:
    def __init__(self, failures=None):
        self.failures = failures or []

    @property
    def ok(self):
        return not self.failures

    @property
    def first(self):
        return self.failures[0] if self.failures else None

    def __repr__(self):
        if self.ok:
            return "valid"
        return "; ".join(repr(f) for f in self.failures)


@dataclass
class Face:
    name: str
    dim: int
    orientation: int = 1          # orientation unit, +1 or -1
    degenerate: bool = False
    trivial: bool = False         # admits an orientation-reversing self-map

    def normal(self):
        return not (self.degenerate or self.trivial)


class StratifiedChain:
    """Oriented stratified chain: faces, signed incidences, flags, classes."""

    def __init__(self, faces, incidences, collapse_classes=None):
        """faces: iterable of Face; incidences: {(upper, lower): sign in -1..1}."""
        self.faces = {}
        for f in faces:
            if f.name in self.faces:
                raise StrataError(f"duplicate face {f.name}")
            if f.dim < 0:
                raise StrataError(f"face {f.name} has negative dimension")
            if f.orientation not in (1, -1):
                raise StrataError(f"face {f.name} orientation must be +-1")
            self.faces[f.name] = f
        self.incidence = {}
        for (up, lo), sign in incidences.items():
            if up not in self.faces or lo not in self.faces:
                raise StrataError(f"incidence ({up},{lo}) references unknown face")
            if self.faces[up].dim != self.faces[lo].dim + 1:
                raise StrataError(
                    f"incidence ({up},{lo}) is not a codimension-1 pair")
            if sign not in (-1, 0, 1):
                raise StrataError(f"incidence sign must be in -1..1, got {sign}")
            self.incidence[(up, lo)] = sign
        self.collapse_classes = []
        seen = set()
        for cls in (collapse_classes or []):
            cls = list(cls)
            for name in cls:
                if name not in self.faces:
                    raise StrataError(f"collapse class references unknown face {name}")
                if name in seen:
                    raise StrataError(f"face {name} appears in two collapse classes")
                seen.add(name)
            dims = {self.faces[n].dim for n in cls}
            if len(dims) > 1:
                raise StrataError(f"collapse class {cls} mixes dimensions")
            self.collapse_classes.append(cls)

    # ---- poset structure -------------------------------------------------

    @property
    def dim(self):
        return max((f.dim for f in self.faces.values()), default=0)

    def faces_of_dim(self, d):
        return [f.name for f in self.faces.values() if f.dim == d]

    def covers_of(self, name):
        """Upper neighbours through recorded incidences (any sign, incl. 0)."""
        return [up for (up, lo) in self.incidence if lo == name]

    def covered_by(self, name):
        return [lo for (up, lo) in self.incidence if up == name]

    def less_than(self):
        """Full order relation generated by the covering pairs."""
        rel = {name: set() for name in self.faces}
        for (up, lo) in self.incidence:
            rel[up].add(lo)
        changed = True
        while changed:
            changed = False
            for up in rel:
                new = set()
                for mid in rel[up]:
                    new |= rel[mid]
                if not new <= rel[up]:
                    rel[up] |= new
                    changed = True
        return rel

    def collapse_representative(self):
        rep = {}
        for cls in self.collapse_classes:
            head = sorted(cls)[0]
            for name in cls:
                rep[name] = head
        return lambda name: rep.get(name, name)

    # ---- validation ------------------------------------------------------

    def validate(self, cubical=False):
        failures = []
        below = self.less_than()
        for up, lows in below.items():
            for lo in lows:
                if self.faces[up].dim <= self.faces[lo].dim:
                    failures.append(ValidationFailure(
                        "strata.dim-order", (up, lo),
                        "dimension function is not strictly order-preserving"))
        failures.extend(self._check_rank_two_intervals())
        if self.dim == 1:
            failures.extend(self._check_vertex_signs())
        if cubical:
            failures.extend(self._check_cubical_above(below))
        failures.extend(self._check_collapse_classes())
        return ValidationReport(failures)

    def _check_rank_two_intervals(self):
        """Shadow of del-sq / del-sq-or: two middles per interval, signed
        paths cancelling; zero-incidence wraps checked via the matrix law."""
        failures = []
        ups = {}
        for (up, lo), sign in self.incidence.items():
            ups.setdefault(lo, []).append((up, sign))
        for s in self.faces:
            paths = {}
            for mid, sign1 in ups.get(s, ()):  # s < mid
                for top, sign2 in ups.get(mid, ()):  # mid < top
                    paths.setdefault(top, []).append((mid, sign2 * sign1))
            for top, route in paths.items():
                total = sum(sign for _, sign in route)
                if total != 0:
                    failures.append(ValidationFailure(
                        "strata.del-sq", (s, top),
                        f"composite incidence signs sum to {total}, not 0"))
                middles = {mid for mid, sign in route if sign != 0}
                if middles and len(middles) not in (0, 2):
                    # a lone signed middle cannot cancel; >2 is fine only
                    # when the signed total above vanishes
                    if len(middles) == 1:
                        failures.append(ValidationFailure(
                            "strata.del-sq", (s, top),
                            "exactly one signed middle face in a rank-2 interval"))
        return failures

    def _check_vertex_signs(self):
        """1d-ss-bdry-zero: each vertex signed count in {-1,+1}, total 0."""
        failures = []
        total = 0
        for v in self.faces_of_dim(0):
            count = 0
            incident = False
            for (up, lo), sign in self.incidence.items():
                if lo == v:
                    incident = True
                    count += sign * self.faces[up].orientation
            if not incident:
                continue
            if count not in (-1, 1):
                failures.append(ValidationFailure(
                    "strata.vertex-sign", v,
                    f"signed arc count {count} not in -1,+1"))
            else:
                total += count
        if total != 0:
            failures.append(ValidationFailure(
                "strata.vertex-sign-total", None,
                f"vertex signs sum to {total}, not 0"))
        return failures

    def _check_cubical_above(self, below):
        """Up-sets must be cube posets (upward-closed local models)."""
        failures = []
        above = {name: set() for name in self.faces}
        for up, lows in below.items():
            for lo in lows:
                above[lo].add(up)
        for s in self.faces:
            upset = sorted(above[s] | {s})
            reldim = {t: self.faces[t].dim - self.faces[s].dim for t in upset}
            m = max(reldim.values())
            if len(upset) != 2 ** m:
                failures.append(ValidationFailure(
                    "strata.cubical-above", s,
                    f"up-set size {len(upset)} != 2^{m}"))
                continue
            if not self._isomorphic_to_cube(upset, reldim, below, m):
                failures.append(ValidationFailure(
                    "strata.cubical-above", s,
                    f"up-set is not poset-isomorphic to the {m}-cube"))
        return failures

    def _isomorphic_to_cube(self, upset, reldim, below, m):
        cube = list(itertools.product((0, 1), repeat=m))
        cube_rank = {c: sum(c) for c in cube}
        by_rank = {}
        for t in upset:
            by_rank.setdefault(reldim[t], []).append(t)
        cube_by_rank = {}
        for c in cube:
            cube_by_rank.setdefault(cube_rank[c], []).append(c)
        if sorted(by_rank) != sorted(cube_by_rank):
            return False
        if any(len(by_rank[r]) != len(cube_by_rank[r]) for r in by_rank):
            return False

        def le_chain(a, b):  # a <= b in the chain's poset
            return a == b or a in below.get(b, ())

        def cube_le(a, b):
            return all(x <= y for x, y in zip(a, b))

        assignment = {}

        def backtrack(items):
            if not items:
                return True
            t = items[0]
            for c in cube_by_rank[reldim[t]]:
                if c in assignment.values():
                    continue
                ok = True
                for u, cu in assignment.items():
                    if le_chain(t, u) != cube_le(c, cu) or le_chain(u, t) != cube_le(cu, c):
                        ok = False
                        break
                if ok:
                    assignment[t] = c
                    if backtrack(items[1:]):
                        return True
                    del assignment[t]
            return False

        ordered = sorted(upset, key=lambda t: reldim[t])
        return backtrack(ordered)

    def _check_collapse_classes(self):
        """Boundaries within a class agree up to degenerate faces."""
        failures = []
        rep = self.collapse_representative()
        for cls in self.collapse_classes:
            head, rest = cls[0], cls[1:]
            base = self._boundary_of_face(head, rep)
            for other in rest:
                delta = _combine(base, self._boundary_of_face(other, rep), -1)
                for name, coeff in delta.items():
                    if coeff != 0 and self.faces[name].normal():
                        failures.append(ValidationFailure(
                            "strata.collapse-boundary", (head, other),
                            f"boundaries differ on nondegenerate face {name}"))
                        break
        return failures

    def _boundary_of_face(self, name, rep):
        out = {}
        for (up, lo), sign in self.incidence.items():
            if up == name and sign != 0:
                key = rep(lo)
                out[key] = out.get(key, 0) + sign
        return out

    # ---- boundary --------------------------------------------------------

    def raw_boundary(self):
        """Signed codim-1 face coefficients of the top-dimensional chain."""
        n = self.dim
        out = {}
        for (up, lo), sign in self.incidence.items():
            if self.faces[up].dim == n and sign != 0:
                coeff = self.faces[up].orientation * sign
                out[lo] = out.get(lo, 0) + coeff
        return {k: v for k, v in out.items() if v != 0}

    def boundary(self):
        """Boundary as a GeoChainElement (flags and collapse applied)."""
        report = self.validate()
        if not report.ok:
            raise StrataError(f"invalid-chain: {report.first}")
        return GeoChainElement.from_coefficients(self, self.raw_boundary())

    def incidence_matrix(self, d):
        """d-dimensional faces -> (d-1)-dimensional faces, signed."""
        from .matrices import SparseMatrix
        src = sorted(self.faces_of_dim(d))
        dst = sorted(self.faces_of_dim(d - 1))
        dst_index = {n: i for i, n in enumerate(dst)}
        entries = {}
        for j, up in enumerate(src):
            for (u, lo), sign in self.incidence.items():
                if u == up and sign != 0:
                    entries[(dst_index[lo], j)] = sign
        return SparseMatrix(ZZ, len(dst), len(src), entries), src, dst

    def boundary_square_is_zero(self):
        for d in range(2, self.dim + 1):
            A, _, _ = self.incidence_matrix(d)
            B, _, _ = self.incidence_matrix(d - 1)
            if not (B * A).is_zero():
                return False
        return True

    # ---- serialization ---------------------------------------------------

    def to_document(self):
        return {
            "faces": [
                {"name": f.name, "dim": f.dim, "orientation": f.orientation}
                for f in sorted(self.faces.values(), key=lambda f: f.name)
            ],
            "incidences": [
                {"upper": up, "lower": lo, "sign": sign}
                for (up, lo), sign in sorted(self.incidence.items())
            ],
            "flags": {
                f.name: {"degenerate": f.degenerate, "trivial": f.trivial}
                for f in sorted(self.faces.values(), key=lambda f: f.name)
                if f.degenerate or f.trivial
            },
            "collapse_classes": [sorted(c) for c in self.collapse_classes],
        }

    @classmethod
    def from_document(cls, doc):
        faces = []
        flags = doc.get("flags", {})
        for fd in doc["faces"]:
            fl = flags.get(fd["name"], {})
            faces.append(Face(fd["name"], fd["dim"], fd.get("orientation", 1),
                              fl.get("degenerate", False), fl.get("trivial", False)))
        incidences = {(e["upper"], e["lower"]): e["sign"] for e in doc.get("incidences", [])}
        return cls(faces, incidences, doc.get("collapse_classes", []))


def _combine(a, b, sign):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0}


class GeoChainElement:
    """Formal integer combination of nondegenerate nontrivial class reps."""

    def __init__(self, coefficients):
        self.coefficients = {k: v for k, v in coefficients.items() if v != 0}

    @classmethod
    def from_coefficients(cls, chain, coeffs):
        rep = chain.collapse_representative()
        out = {}
        for name, coeff in coeffs.items():
            face = chain.faces[name]
            if not face.normal():
                continue
            key = rep(name)
            if not chain.faces[key].normal():
                continue
            out[key] = out.get(key, 0) + coeff
        return cls(out)

    def is_zero(self):
        return not self.coefficients

    def __eq__(self, other):
        return isinstance(other, GeoChainElement) and self.coefficients == other.coefficients

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for name in sorted(self.coefficients):
            c = self.coefficients[name]
            terms.append(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{name}")
        return " ".join(terms)


# ---- operations ----------------------------------------------------------

def product(X, Y):
    """Product chain with the Leibniz incidence signs.

    Boundary satisfies d(X x Y) = dX x Y + (-1)^{dim X} X x dY, the
    base-point case of the fiber-product boundary formula.
    """
    for chain in (X, Y):
        report = chain.validate()
        if not report.ok:
            raise StrataError(f"invalid-chain: {report.first}")

    def pname(a, b):
        return f"({a}*{b})"

    faces = []
    for fx in X.faces.values():
        for fy in Y.faces.values():
            faces.append(Face(
                pname(fx.name, fy.name), fx.dim + fy.dim,
                fx.orientation * fy.orientation,
                fx.degenerate or fy.degenerate,
                fx.trivial or fy.trivial,
            ))
    incidences = {}
    for (up, lo), sign in X.incidence.items():
        for fy in Y.faces.values():
            incidences[(pname(up, fy.name), pname(lo, fy.name))] = sign
    for (up, lo), sign in Y.incidence.items():
        for fx in X.faces.values():
            factor = -1 if fx.dim % 2 else 1
            incidences[(pname(fx.name, up), pname(fx.name, lo))] = factor * sign

    repX = X.collapse_representative()
    repY = Y.collapse_representative()
    groups = {}
    for fx in X.faces:
        for fy in Y.faces:
            groups.setdefault((repX(fx), repY(fy)), []).append(pname(fx, fy))
    classes = [g for g in groups.values() if len(g) > 1]
    return StratifiedChain(faces, incidences, classes)


def point_chain(name="pt"):
    return StratifiedChain([Face(name, 0)], {})


def interval_chain(name="I", lo="0", hi="1"):
    """Oriented closed interval; boundary is {hi} - {lo}."""
    return StratifiedChain(
        [Face(name, 1), Face(lo, 0), Face(hi, 0)],
        {(name, lo): -1, (name, hi): 1},
    )


def closed_circle_chain(name="circle"):
    """Circle as a single closed 1-stratum (no 0-strata, empty boundary)."""
    return StratifiedChain([Face(name, 1)], {})


def circle_probes(prefix="c"):
    """Circle as two interval probes sharing endpoint names.

    A single poset with two head-to-tail arcs would violate the vertex
    sign law (counts 0); the honest fixture is a pair of probes whose
    boundaries cancel as geometric chains.
    """
    top = StratifiedChain(
        [Face(f"{prefix}_top", 1), Face(f"{prefix}_w", 0), Face(f"{prefix}_e", 0)],
        {(f"{prefix}_top", f"{prefix}_w"): -1, (f"{prefix}_top", f"{prefix}_e"): 1},
    )
    bot = StratifiedChain(
        [Face(f"{prefix}_bot", 1), Face(f"{prefix}_e", 0), Face(f"{prefix}_w", 0)],
        {(f"{prefix}_bot", f"{prefix}_e"): -1, (f"{prefix}_bot", f"{prefix}_w"): 1},
    )
    return [top, bot]


def boundary_of_chains(chains):
    """Boundary of a formal sum of probes, as one GeoChainElement."""
    total = {}
    for chain in chains:
        element = chain.boundary()
        for name, coeff in element.coefficients.items():
            total[name] = total.get(name, 0) + coeff
    return GeoChainElement(total)


def theta_graph(directions=(1, 1, -1)):
    """Theta graph: two vertices, three arcs with the given directions.

    direction +1 points from vertex l to vertex r.  Exactly six of the
    eight assignments yield a valid oriented stratified chain.
    """
    faces = [Face("l", 0), Face("r", 0)]
    incidences = {}
    for i, d in enumerate(directions):
        name = f"arc{i}"
        faces.append(Face(name, 1))
        incidences[(name, "l")] = -d
        incidences[(name, "r")] = d
    return StratifiedChain(faces, incidences)


def truncate(X, cuts, removed=()):
    """Cut a chain along new interior faces.

    ``cuts`` maps a face name to its new transverse-cut face name; the
    cut of a d-face is a (d-1)-face attached with sign (-1)^(d-1), and
    cuts of incident faces attach to each other with the inherited sign.
    ``removed`` lists old faces beyond the cut to discard.
    """
    report = X.validate()
    if not report.ok:
        raise StrataError(f"invalid-chain: {report.first}")
    removed = set(removed)
    for name, cut_name in cuts.items():
        if name not in X.faces:
            raise StrataError(f"cut assigned to unknown face {name}")
        if X.faces[name].dim < 1:
            raise StrataError("cut-overlaps-boundary: cannot cut a 0-face")
        if cut_name in X.faces:
            raise StrataError(f"cut-overlaps-boundary: {cut_name} already exists")
        if name in removed:
            raise StrataError(f"face {name} cannot be both cut and removed")

    faces = []
    for f in X.faces.values():
        if f.name in removed:
            continue
        faces.append(replace(f))
    for name, cut_name in cuts.items():
        f = X.faces[name]
        faces.append(Face(cut_name, f.dim - 1, 1, f.degenerate, f.trivial))

    incidences = {}
    for (up, lo), sign in X.incidence.items():
        if up in removed or lo in removed:
            continue
        incidences[(up, lo)] = sign
    for name, cut_name in cuts.items():
        d = X.faces[name].dim
        incidences[(name, cut_name)] = (-1) ** (d - 1)
        for lo in X.covered_by(name):
            if lo in cuts:  # the cut face inherits incidences between cuts
                incidences[(cut_name, cuts[lo])] = X.incidence[(name, lo)]

    classes = [[n for n in cls if n not in removed] for cls in X.collapse_classes]
    classes = [c for c in classes if len(c) > 1]
    out = StratifiedChain(faces, incidences, classes)
    check = out.validate()
    if not check.ok:
        raise StrataError(f"cut-overlaps-boundary: truncation breaks {check.first}")
    return out


def blowup(X, zero_faces, codim, hosts):
    """Real blowup along a transverse zero locus of even codimension >= 2.

    ``zero_faces``: the new locus as a StratifiedChain (its own poset);
    ``hosts``: map from zero-face name to the X-face whose interior it
    sits in, with dim(host) - dim(z) = codim.  The output carries one
    sphere-bundle face per zero face, of dimension dim(z) + codim - 1,
    and satisfies dB = B(d-restriction) - (-1)^{dim Z} Z x S(E).
    """
    if codim < 2 or codim % 2 != 0:
        raise StrataError(f"bad-codimension: {codim} (need even codimension >= 2)")
    report = X.validate()
    if not report.ok:
        raise StrataError(f"invalid-chain: {report.first}")
    zreport = zero_faces.validate()
    if not zreport.ok:
        raise StrataError(f"invalid-chain in zero locus: {zreport.first}")
    for zname, host in hosts.items():
        if zname not in zero_faces.faces or host not in X.faces:
            raise StrataError(f"blowup host map references unknown face ({zname},{host})")
        if X.faces[host].dim - zero_faces.faces[zname].dim != codim:
            raise StrataError(
                f"bad-codimension: face {zname} sits in {host} with wrong codimension")

    dim_z = zero_faces.dim

    def sname(z):
        return f"S({z})"

    faces = [replace(f) for f in X.faces.values()]
    for z in zero_faces.faces.values():
        faces.append(Face(sname(z.name), z.dim + codim - 1, z.orientation))

    incidences = dict(X.incidence)
    for zname, host in hosts.items():
        z = zero_faces.faces[zname]
        if z.dim == dim_z:
            incidences[(host, sname(zname))] = -((-1) ** dim_z)
    for (up, lo), sign in zero_faces.incidence.items():
        incidences[(sname(up), sname(lo))] = sign
        # sphere faces over boundary strata of the locus also bound the
        # host faces of those strata
        host_lo = hosts[lo]
        if X.faces[host_lo].dim == zero_faces.faces[lo].dim + codim:
            pass  # already covered by the host assignment of lo

    classes = [list(c) for c in X.collapse_classes]
    out = StratifiedChain(faces, incidences, classes)
    out.blown_faces = [sname(z) for z in zero_faces.faces]
    check = out.validate()
    if not check.ok:
        raise StrataError(f"invalid-chain after blowup: {check.first}")
    return out


def push_blowup_to_base(B):
    """Flag the sphere-bundle faces degenerate, as chains over the base."""
    blown = set(getattr(B, "blown_faces", []))
    faces = []
    for f in B.faces.values():
        faces.append(replace(f, degenerate=f.degenerate or f.name in blown))
    return StratifiedChain(faces, dict(B.incidence), [list(c) for c in B.collapse_classes])


def gm_complex(chains, ambient_dim, ring=ZZ):
    """Truncated geometric chain complex of a list of probes.

    Faces sharing a name across probes are identified (dims and flags
    must agree).  Generators are nondegenerate, nontrivial collapse
    representatives in dimensions [0, ambient_dim]; the differential is
    the signed incidence boundary.  d^2 = 0 is validated downstream.
    """
    merged_faces = {}
    merged_inc = {}
    classes = {}
    for chain in chains:
        report = chain.validate()
        if not report.ok:
            raise StrataError(f"invalid-chain: {report.first}")
        for f in chain.faces.values():
            if f.name in merged_faces:
                g = merged_faces[f.name]
                if (g.dim, g.degenerate, g.trivial) != (f.dim, f.degenerate, f.trivial):
                    raise StrataError(f"face {f.name} inconsistent across probes")
            else:
                merged_faces[f.name] = f
        for key, sign in chain.incidence.items():
            if key in merged_inc and merged_inc[key] != sign:
                raise StrataError(f"incidence {key} inconsistent across probes")
            merged_inc[key] = sign
        rep = chain.collapse_representative()
        for name in chain.faces:
            head = rep(name)
            if head != name:
                classes.setdefault(head, set()).add(name)

    rep_map = {}
    for head, members in classes.items():
        for m in members:
            rep_map[m] = head

    def rep(name):
        return rep_map.get(name, name)

    generators = []
    for name, f in sorted(merged_faces.items()):
        if rep(name) != name or not f.normal():
            continue
        if f.dim > ambient_dim + 1:
            continue  # cannot influence homology through ambient_dim
        generators.append((name, f.dim))

    gen_names = {name for name, _ in generators}
    differential = {}
    for (up, lo), sign in merged_inc.items():
        if sign == 0:
            continue
        if up not in gen_names:
            continue
        target = rep(lo)
        if target not in gen_names:
            continue
        fup = merged_faces[up]
        img = differential.setdefault(up, {})
        img[target] = img.get(target, 0) + sign * fup.orientation
    differential = {
        src: {dst: c for dst, c in img.items() if c != 0}
        for src, img in differential.items()
    }
    differential = {src: img for src, img in differential.items() if img}

    complex_ = GradedComplex(ring, generators, differential, period=None)
    complex_.check_d_squared()
    return complex_


def gm_homology(chains, ambient_dim, ring=ZZ):
    """Homology of the truncated geometric chain complex, degrees 0..ambient."""
    C = gm_complex(chains, ambient_dim, ring)
    hom = C.homology()
    return {g: hom.get(g, (0, [])) for g in range(ambient_dim + 1)}
