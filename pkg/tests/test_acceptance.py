"""Acceptance criteria, one test per criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail
line per criterion.
"""

import itertools
import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from instanton.abelian import FinAbGroup
from instanton.casson import (dedekind_reciprocity_residual, dedekind_s,
                              lens_sweep)
from instanton.equivariant import equivariant_triple, euler_char, verify_floer_iso
from instanton.flow import (Block, BimoduleData, FlowCategoryData, cm_complex,
                            identity_block, induced_map, validate_bimodule,
                            validate_flowcat)
from instanton.ledger import (CobordismSheet, SignatureChamber,
                              ThreeManifoldSheet, classify, compose_shift,
                              enum_reducibles_3d, enum_reducibles_4d,
                              normal_index, pseudocentral_count,
                              shift_identity_check, shift_search)
from instanton.rings import GF, QQ, ZZ
from instanton.strata import (Face, StratifiedChain, blowup, circle_probes,
                              gm_homology, interval_chain, point_chain,
                              product, theta_graph, truncate)
from instanton.suspension import (SectionData, chamber_ledger, default_sections,
                                  lift_Wplus, sigma_rho, suspend,
                                  verify_wplus_composite, wallcross)

from test_flow import disjoint_union, random_motif


def report(number, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number:>2}: {status} - {detail}")
    assert passed, f"criterion {number}: {detail}"


# ---------------------------------------------------------------- criterion 1

def test_criterion_01_lens_casson_sweep():
    t0 = time.time()
    rows = lens_sweep(50, "trivial", precision=12)
    rows += lens_sweep(50, "odd", precision=12)
    elapsed = time.time() - t0
    tol = mpmath.mpf(10) ** -9
    worst = max(r["residual"] for r in rows)
    ok = all(r["pass"] for r in rows) and worst < tol and elapsed < 10.0
    report(1, ok, f"{len(rows)} lens pairs, worst residual {mpmath.nstr(worst, 3)}, "
                  f"{elapsed:.2f}s (< 10s)")


# ---------------------------------------------------------------- criterion 2

def test_criterion_02_dedekind_reciprocity():
    t0 = time.time()
    checked = 0
    for p in range(1, 201):
        for q in range(1, p + 1):
            if math.gcd(p, q) == 1:
                assert dedekind_reciprocity_residual(q, p) == 0
                checked += 1
    elapsed = time.time() - t0
    ok = elapsed < 5.0
    report(2, ok, f"reciprocity exact on {checked} coprime pairs, "
                  f"{elapsed:.2f}s (< 5s)")


# ---------------------------------------------------------------- criterion 3

GROUP_FIXTURES = [
    [], [2], [3], [4], [5], [6], [7], [8], [9], [2, 2], [2, 4], [3, 3],
    [12], [2, 6], [16], [5, 5], [2, 2, 2], [25], [3, 9], [2, 8], [6, 6],
    [49], [2, 2, 4], [11], [13], [10, 10], [100], [125], [2, 100], [15, 15],
    [17], [19], [23], [2, 2, 2, 2], [3, 27], [64], [81], [121], [169], [500],
]


def test_criterion_03_reducible_enumeration():
    rng = random.Random(42)
    cases = 0
    for factors in GROUP_FIXTURES:
        G = FinAbGroup.from_moduli(factors) if factors else FinAbGroup([])
        if G.order() > 500:
            continue
        for _ in range(2):
            w = tuple(rng.randrange(d) for d in G.factors)
            sheet = ThreeManifoldSheet(G, w)
            centrals, abelians = enum_reducibles_3d(sheet)
            slow_central = sorted(x for x in G.torsion_elements()
                                  if G.eq(G.scale(2, x), w))
            slow_pairs = set()
            for z in G.torsion_elements():
                other = G.sub(w, z)
                if z != other:
                    slow_pairs.add((min(z, other), max(z, other)))
            assert centrals == slow_central
            assert set(abelians) == slow_pairs
            # 4d counts through a cobordism sheet with this H^2
            S3 = ThreeManifoldSheet(FinAbGroup([]), ())
            W = CobordismSheet(S3, S3, 0, 0, 0, 0, G, w,
                               [[0] * G.rank] * 0, [[0] * G.rank] * 0)
            records, _ = enum_reducibles_4d(W)
            assert sorted(r.x for r in records if r.kind == "central") \
                == slow_central
            assert {(r.x, r.y) for r in records if r.kind == "abelian"} \
                == slow_pairs
            cases += 1
    report(3, True, f"3d and 4d enumeration matches brute force on {cases} "
                    f"group fixtures of order <= 500")


# ---------------------------------------------------------------- criterion 4

def test_criterion_04_normal_index_suite():
    S3 = ThreeManifoldSheet(FinAbGroup([]), ())
    # cylinder value 0 and adjacent value -2
    G = FinAbGroup([5])
    Y = ThreeManifoldSheet(G, (0,), h1_dims={(1,): 0, (2,): 0},
                           rho={(1,): 0, (2,): 0})
    W = CobordismSheet(Y, Y, 0, 0, 0, 0, G, (0,), [[1]], [[1]])
    records, _ = enum_reducibles_4d(W)
    rec = next(r for r in records if r.kind == "abelian" and r.x == (1,))
    sigma = SignatureChamber(Y)
    assert normal_index(rec, W, sigma, sigma) == 0
    sigma_drop = SignatureChamber(Y, {(1,): -4})
    assert normal_index(rec, W, sigma, sigma_drop) == -2
    # pseudocentral value 2(b1 - b+ - 1)
    for b1, bplus in ((0, 0), (1, 0), (2, 1), (3, 0)):
        Wp = CobordismSheet(S3, S3, b1, bplus, 0, 0, FinAbGroup([3]), (0,),
                            [], [])
        recs, _ = enum_reducibles_4d(Wp)
        pc = next(r for r in recs if r.kind == "abelian")
        assert pc.pseudocentral
        assert normal_index(pc, Wp, SignatureChamber(S3), SignatureChamber(S3)) \
            == 2 * (b1 - bplus - 1)
    # shift identity on 500 randomized inputs
    rng = random.Random(314)
    checked = 0
    while checked < 500:
        p = rng.choice([3, 5, 7, 9, 11])
        G = FinAbGroup([p])
        probe = ThreeManifoldSheet(G, (0,))
        h1 = {k: 2 * rng.randint(0, 2) for k in probe.abelian_classes()}
        rho = {k: Fraction(2 * rng.randint(-5, 5)) for k in probe.abelian_classes()}
        Y = ThreeManifoldSheet(G, (0,), h1_dims=h1, rho=rho)
        W = CobordismSheet(Y, Y, rng.randint(0, 2), 0, 0, 0, G, (0,),
                           [[1]], [[1]])
        sigma0 = SignatureChamber(Y, {k: v + 4 * rng.randint(-3, 3)
                                      for k, v in h1.items()})
        sigma1 = SignatureChamber(Y, {k: v + 4 * rng.randint(-3, 3)
                                      for k, v in h1.items()})
        records, _ = enum_reducibles_4d(W)
        abelian = [r for r in records if r.kind == "abelian"
                   and not r.source_central]
        if not abelian:
            continue
        rec = rng.choice(abelian)
        a, b = 4 * rng.randint(-4, 4), 4 * rng.randint(-4, 4)
        assert shift_identity_check(rec, W, sigma0, sigma1,
                                    lambda key: a, lambda key: b)
        checked += 1
    report(4, True, "cylinder 0 / adjacent -2 / pseudocentral 2(b1-b+-1) exact; "
                    "shift identity on 500 randomized inputs")


# ---------------------------------------------------------------- criterion 5

def test_criterion_05_shift_postconditions():
    rng = random.Random(2718)
    shift_ok = 0
    for trial in range(500):
        p = rng.choice([3, 5, 7, 9])
        G = FinAbGroup([p])
        probe = ThreeManifoldSheet(G, (0,))
        h1 = {k: 2 * rng.randint(0, 2) for k in probe.abelian_classes()}
        rho = {k: Fraction(2 * rng.randint(-4, 4)) for k in probe.abelian_classes()}
        Y = ThreeManifoldSheet(G, (0,), h1_dims=h1, rho=rho)
        W = CobordismSheet(Y, Y, 0, 0, 0, 0, G, (0,), [[1]], [[1]])
        records, _ = enum_reducibles_4d(W)
        sigma0 = SignatureChamber(Y, {k: v + 4 * rng.randint(-4, 4)
                                      for k, v in h1.items()})
        sigma1 = SignatureChamber(Y, {k: v + 4 * rng.randint(-4, 4)
                                      for k, v in h1.items()})
        _, _, _, (level, _) = shift_search(W, records, sigma0, sigma1)
        assert level in ("unobstructed", "pseudo-unobstructed"), \
            f"shift_search postcondition failed on trial {trial}"
        shift_ok += 1
    compose_ok = 0
    for trial in range(500):
        p = rng.choice([3, 5, 7])
        S3a = ThreeManifoldSheet(FinAbGroup([]), (), name="A")
        S3b = ThreeManifoldSheet(FinAbGroup([]), (), name="B")
        G = FinAbGroup([p])
        probe = ThreeManifoldSheet(G, (0,))
        rho = {k: Fraction(4 * rng.randint(-3, 3) + 2)
               for k in probe.abelian_classes()}
        Ymid = ThreeManifoldSheet(G, (0,), h1_dims={k: 0 for k in rho}, rho=rho)
        W1 = CobordismSheet(S3a, Ymid, 0, 0, 0, 0, G, (0,), [], [[1]])
        W2 = CobordismSheet(Ymid, S3b, 0, 0, 0, 0, G, (0,), [[1]], [])
        r1, _ = enum_reducibles_4d(W1)
        r2, _ = enum_reducibles_4d(W2)
        sigma_mid = SignatureChamber(Ymid, {k: 4 * rng.randint(-3, 3)
                                            for k in Ymid.abelian_classes()})
        out = compose_shift(W1, W2, r1, r2, SignatureChamber(S3a), sigma_mid,
                            SignatureChamber(S3b))
        assert out["split_ok"]
        assert all(lv in ("unobstructed", "pseudo-unobstructed")
                   for lv in out["levels"]), f"trial {trial}: {out['levels']}"
        assert all(cert[-1] for cert in out["certificates"])
        compose_ok += 1
    report(5, shift_ok == 500 and compose_ok == 500,
           f"shift_search {shift_ok}/500 and compose_shift {compose_ok}/500 "
           f"postconditions certified, zero failures")


# ---------------------------------------------------------------- criterion 6

def test_criterion_06_pseudocentral_count():
    rng = random.Random(6)
    S3 = ThreeManifoldSheet(FinAbGroup([]), ())
    cases = 0
    for factors in GROUP_FIXTURES:
        G = FinAbGroup.from_moduli(factors) if factors else FinAbGroup([])
        if G.order() > 200:
            continue
        for _ in range(2):
            c = tuple(rng.randrange(d) for d in G.factors)
            W = CobordismSheet(S3, S3, 0, 0, 0, 0, G, c,
                               [[0] * G.rank] * 0, [[0] * G.rank] * 0)
            out = pseudocentral_count(W, (), ())
            assert out["identity_holds"]
            assert out["z_tilde"] == out["central"] + 2 * out["pseudocentral"]
            # cross-check against the enumerated records
            records, _ = enum_reducibles_4d(W)
            n_central = sum(1 for r in records if r.kind == "central")
            n_pseudo = sum(1 for r in records if r.pseudocentral)
            assert out["central"] == n_central
            assert out["pseudocentral"] == n_pseudo
            cases += 1
    report(6, True, f"|Z~| = |Z| + 2|P| exact on {cases} fixtures with "
                    f"|H^2(W)| <= 200")


# ---------------------------------------------------------------- criterion 7

def test_criterion_07_flow_complex_soundness():
    rng = random.Random(1729)
    valid_count = 0
    mutation_count = 0
    for trial in range(200):
        fc = disjoint_union([random_motif(rng, i)
                             for i in range(rng.randint(1, 4))])
        assert validate_flowcat(fc).ok
        eq = cm_complex(fc, QQ)
        eq.complex.check_d_squared()   # d^2 = 0 through the exact kernel
        valid_count += 1
        diamond_edges = [key for key in fc.blocks
                         if key[0].endswith("t") and "m" in key[1]]
        if diamond_edges:
            key = rng.choice(diamond_edges)
            mutated = dict(fc.blocks)
            mutated[key] = mutated[key].scaled(2)
            bad = FlowCategoryData(fc.objects.values(), mutated, period=fc.period)
            bad_report = validate_flowcat(bad)
            assert not bad_report.ok
            assert any(f[0] == "flowcat.AX1" for f in bad_report.failures)
            mutation_count += 1
    report(7, valid_count == 200 and mutation_count >= 40,
           f"d^2 = 0 on {valid_count} randomized categories; "
           f"{mutation_count} AX1-violating mutations rejected")


# ---------------------------------------------------------------- criterion 8

def suspension_fixtures():
    out = []
    for n in (0, 1, 2, 3):
        for lift in (0, 2, 4):
            blocks = {("rho", "beta"): Block({("s2", "g3"): n})} if n else {}
            out.append(FlowCategoryData(
                [("rho", "abelian", lift), ("beta", "irreducible", lift - 2),
                 ("c", "irreducible", lift + 1)], blocks))
    out.append(FlowCategoryData([("rho", "abelian", 0)]))
    return out


def test_criterion_08_suspension_suite():
    fixtures = suspension_fixtures()
    for fc in fixtures:
        susp = suspend(fc, "rho")
        assert validate_flowcat(susp).ok
        bm = sigma_rho(fc, "rho", ring=QQ, suspension=susp)
        assert validate_bimodule(bm).ok
        assert induced_map(bm, QQ).is_quasi_iso()
    # lift over the suspension: composite law block-exact
    fc = FlowCategoryData([("rho", "abelian", 0), ("a", "irreducible", 1)])
    target = FlowCategoryData([("a2", "irreducible", 1)])
    w = BimoduleData(fc, target, {("a", "a2"): identity_block("irreducible")},
                     offset=0)
    susp = suspend(fc, "rho")
    sigma = sigma_rho(fc, "rho", suspension=susp)
    what = lift_Wplus(w, "rho", SectionData(), suspension=susp)
    ok, _ = verify_wplus_composite(what, sigma, w)
    assert ok
    fc2 = FlowCategoryData([("rho", "abelian", 0)])
    target2 = FlowCategoryData([("rho2", "abelian", -2)])
    w2 = BimoduleData(fc2, target2, {("rho", "rho2"): Block({("s0", "s2"): 3})},
                      offset=0)
    susp2 = suspend(fc2, "rho")
    sigma2 = sigma_rho(fc2, "rho", suspension=susp2)
    t = sigma2.block("rho", "rho-bar").entries[("s0", "s2")]
    what2 = lift_Wplus(w2, "rho",
                       SectionData(Z={"rho2": Block({("s2", "s2"): 3 / t})}),
                       suspension=susp2)
    ok2, _ = verify_wplus_composite(what2, sigma2, w2)
    assert ok2
    report(8, True, f"suspend validates on {len(fixtures)} fixtures; sigma_rho "
                    f"quasi-isos verified; lift composite law block-exact")


# ---------------------------------------------------------------- criterion 9

def test_criterion_09_wallcross_suite():
    fixtures = suspension_fixtures()
    for fc in fixtures:
        eq = cm_complex(fc, QQ)
        ok, witness = verify_floer_iso(eq, fc)
        assert ok, witness
        rep = wallcross(fc, "rho", ring=ZZ)
        assert rep.triangle_exact
        assert rep.chi_drop == 1
    # cumulative drop along a three-wall path = (1/4) * sum(sigma1 - sigma0)
    fc = FlowCategoryData([
        ("r1", "abelian", 0), ("r2", "abelian", 2), ("r3", "abelian", 4),
        ("c", "irreducible", 1)])
    chis = chamber_ledger(fc, ["r1", "r2", "r3"], ring=ZZ)
    drops = [a - b for a, b in zip(chis, chis[1:])]
    assert drops == [1, 1, 1]
    assert chis[0] - chis[-1] == Fraction(1, 4) * (3 * 4)
    report(9, True, f"floer iso + rank-exact triangle + chi drop on "
                    f"{len(fixtures)} fixtures; cumulative drop 3 = (1/4)(12)")


# ---------------------------------------------------------------- criterion 10

def test_criterion_10_equivariant_triple():
    fixtures = {
        "point": FlowCategoryData([("th", "central", 0)]),
        "free": FlowCategoryData([("a", "irreducible", 0)]),
        "abelian": FlowCategoryData([("rho", "abelian", 0)]),
        "pair": FlowCategoryData(
            [("a", "irreducible", 1), ("b", "irreducible", 0)],
            {("a", "b"): identity_block("irreducible")}),
        "cone": FlowCategoryData(
            [("rho", "abelian", 2), ("beta", "irreducible", 0)],
            {("rho", "beta"): Block({("s2", "g3"): 1})}),
        "two-free": FlowCategoryData(
            [("a", "irreducible", 0), ("b", "irreducible", 4)]),
    }
    for name, fc in fixtures.items():
        for ring in (QQ, GF(5)):
            triple = equivariant_triple(cm_complex(fc, ring))
            assert triple.exact, f"{name} over {ring.tag}"
    # point-orbit tower: free rank one over R[U]
    triple = equivariant_triple(cm_complex(fixtures["point"], QQ))
    assert triple.minus_module == (1, [])
    assert not triple.infty_is_zero()
    # irreducible-only categories have vanishing I^infty
    for name in ("free", "pair", "two-free"):
        triple = equivariant_triple(cm_complex(fixtures[name], QQ))
        assert triple.infty_is_zero(), name
    report(10, True, f"triangle rank-exact on {len(fixtures)} fixtures x 2 "
                     f"rings; point tower free rank 1; free-orbit I^inf = 0")


# ---------------------------------------------------------------- criterion 11

def test_criterion_11_strata_suite():
    # d^2 = 0 on all fixtures
    fixtures = [interval_chain(), theta_graph((1, 1, -1)),
                product(interval_chain(), interval_chain()),
                product(theta_graph((1, -1, 1)), interval_chain())]
    for chain in fixtures:
        assert chain.validate().ok
        assert chain.boundary_square_is_zero()
    # theta graph accepts exactly 6 of 8 orientations
    accepted = sum(1 for dirs in itertools.product((1, -1), repeat=3)
                   if theta_graph(dirs).validate().ok)
    assert accepted == 6
    # product / truncation / blowup sign identities
    sq = product(interval_chain(), interval_chain())
    assert sq.raw_boundary() == {"(0*I)": -1, "(1*I)": 1, "(I*0)": 1, "(I*1)": -1}
    cut = truncate(sq, {"(I*I)": "chord", "(0*I)": "pL", "(1*I)": "pR"},
                   removed={"(I*1)", "(0*1)", "(1*1)"})
    assert cut.incidence[("(I*I)", "chord")] == -1
    half = truncate(interval_chain(), {"I": "mid"}, removed={"1"})
    assert half.incidence[("I", "mid")] == 1
    disk = StratifiedChain([Face("D", 2), Face("bd", 1)], {("D", "bd"): 1})
    annulus = blowup(disk, point_chain("z"), 2, {"z": "D"})
    assert annulus.raw_boundary() == {"bd": 1, "S(z)": -1}
    sphere = StratifiedChain([Face("S", 2)], {})
    two = blowup(sphere, StratifiedChain([Face("z1", 0), Face("z2", 0)], {}),
                 2, {"z1": "S", "z2": "S"})
    assert two.raw_boundary() == {"S(z1)": -1, "S(z2)": -1}
    # gm homology of the four reference fixtures
    assert gm_homology([point_chain()], 0) == {0: (1, [])}
    assert gm_homology(circle_probes(), 1) == {0: (1, []), 1: (1, [])}
    eqt = Face("eq", 1)
    dplus = StratifiedChain([Face("D+", 2), eqt], {("D+", "eq"): 1})
    dminus = StratifiedChain([Face("D-", 2), Face("eq", 1)], {("D-", "eq"): -1})
    assert gm_homology([dplus, dminus, point_chain()], 2) == \
        {0: (1, []), 1: (0, []), 2: (1, [])}
    torus = StratifiedChain(
        [Face("T", 2), Face("a", 1), Face("b", 1), Face("v", 0)],
        {("T", "a"): 0, ("T", "b"): 0, ("a", "v"): 0, ("b", "v"): 0})
    assert gm_homology([torus], 2) == {0: (1, []), 1: (2, []), 2: (1, [])}
    report(11, True, "d^2 = 0, theta 6/8, sign identities, and pt/S1/S2/T2 "
                     "homology all exact")
