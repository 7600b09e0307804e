"""Flow categories, bimodules, homotopies, suspension, wall-crossing."""

import random
from fractions import Fraction

import pytest

from instanton.flow import (Block, BimoduleData, FlowCategoryData, FlowError,
                            HomotopyData, SectionIncompatible, cm_complex,
                            compose_bimodules, identity_bimodule, identity_block,
                            induced_homotopy, induced_map, validate_bimodule,
                            validate_flowcat, validate_homotopy)
from instanton.rings import GF, QQ, ZZ
from instanton.suspension import (SectionData, build_Wminus, chamber_ledger,
                                  default_sections, lift_Wplus, sigma_rho,
                                  suspend, suspended_names,
                                  verify_wplus_composite, wallcross)


# ---- fixture builders -------------------------------------------------------

def lone_irreducible(lift=0):
    return FlowCategoryData([("a", "irreducible", lift)])


def cancelling_pair(n=1, lifts=(1, 0)):
    return FlowCategoryData(
        [("a", "irreducible", lifts[0]), ("b", "irreducible", lifts[1])],
        {("a", "b"): identity_block("irreducible").scaled(n)},
    )


def central_sink(n=2, lifts=(0, -1)):
    """Irreducible orbit flowing to a central orbit with multiplicity n."""
    return FlowCategoryData(
        [("a", "irreducible", lifts[0]), ("th", "central", lifts[1])],
        {("a", "th"): Block({("g0", "g0"): n})},
    )


def cone_fixture(n=1, rho_lift=2):
    """Abelian rho over an irreducible beta through fiber-degree-2 moduli."""
    return FlowCategoryData(
        [("rho", "abelian", rho_lift), ("beta", "irreducible", rho_lift - 2)],
        {("rho", "beta"): Block({("s2", "g3"): n})},
    )


def lone_abelian(lift=0, name="rho"):
    return FlowCategoryData([(name, "abelian", lift)])


def diamond(a1=1, b1=1, a2=1, b2=-1):
    """Two-step irreducible diamond; AX1 forces a1 b1 + a2 b2 = 0."""
    return FlowCategoryData(
        [("top", "irreducible", 2), ("m1", "irreducible", 1),
         ("m2", "irreducible", 1), ("bot", "irreducible", 0)],
        {("top", "m1"): identity_block("irreducible").scaled(a1),
         ("top", "m2"): identity_block("irreducible").scaled(a2),
         ("m1", "bot"): identity_block("irreducible").scaled(b1),
         ("m2", "bot"): identity_block("irreducible").scaled(b2)},
    )


# ---- validators -------------------------------------------------------------

def test_lone_orbit_valid():
    assert validate_flowcat(lone_irreducible()).ok


def test_cancelling_pair_valid():
    assert validate_flowcat(cancelling_pair()).ok


def test_u_equivariance_violation():
    fc = FlowCategoryData(
        [("a", "irreducible", 1), ("b", "irreducible", 0)],
        {("a", "b"): Block({("g0", "g0"): 1, ("g3", "g3"): 2})},
    )
    report = validate_flowcat(fc)
    assert not report.ok
    assert report.first[0] == "flowcat.u-equivariance"


def test_ax1_diamond():
    assert validate_flowcat(diamond()).ok
    bad = diamond(b2=1)  # paths no longer cancel
    report = validate_flowcat(bad)
    assert not report.ok
    assert report.first[0] == "flowcat.AX1"


def test_degree_bookkeeping_rejects_g3_to_point():
    with_bad = FlowCategoryData(
        [("a", "irreducible", 1), ("th", "central", 0)],
        {("a", "th"): Block({("g3", "g0"): 1})},
    )
    report = validate_flowcat(with_bad)
    assert not report.ok
    assert report.first[0] == "flowcat.degree"


# ---- flow complexes ---------------------------------------------------------

def test_cm_single_orbit():
    eq = cm_complex(lone_irreducible(), QQ)
    hom = eq.homology()
    assert hom[0] == (1, []) and hom[3] == (1, [])


def test_cm_cancelling_pair_acyclic():
    eq = cm_complex(cancelling_pair(), QQ)
    assert all(v == (0, []) for v in eq.homology().values())


def test_cm_central_sink_torsion():
    eq = cm_complex(central_sink(n=2), ZZ)
    hom = eq.homology()
    assert hom[7] == (0, [2])   # lift -1 mod 8
    assert hom[0] == (0, [])
    assert hom[3] == (1, [])
    eq_q = cm_complex(central_sink(n=2), QQ)
    hom_q = eq_q.homology()
    assert hom_q[7] == (0, []) and hom_q[0] == (0, [])


def test_cm_d_squared_via_kernel():
    for fc in (diamond(), cone_fixture(3), central_sink(5)):
        eq = cm_complex(fc, QQ)
        eq.complex.check_d_squared()


# ---- bimodules and homotopies ----------------------------------------------

def test_identity_bimodule_and_induced_map():
    fc = cancelling_pair()
    one = identity_bimodule(fc)
    assert validate_bimodule(one).ok
    phi = induced_map(one, QQ)
    for gen, _ in phi.source.generators:
        assert phi.apply({gen: QQ.one()}) == {gen: QQ.one()}
    assert phi.is_quasi_iso()


def test_composite_bimodule_is_composition():
    fc = cancelling_pair()
    one = identity_bimodule(fc)
    two = compose_bimodules(one, one)
    assert validate_bimodule(two).ok
    phi = induced_map(two, QQ)
    for gen, _ in phi.source.generators:
        assert phi.apply({gen: QQ.one()}) == {gen: QQ.one()}


def test_scaled_identity_bimodule_homotopy():
    fc = cancelling_pair()
    m0 = identity_bimodule(fc)
    m1 = BimoduleData(fc, fc, {
        ("a", "a"): identity_block("irreducible").scaled(2),
        ("b", "b"): identity_block("irreducible").scaled(2),
    }, offset=0)
    assert validate_bimodule(m1).ok
    h = HomotopyData(m0, m1, {("b", "a"): identity_block("irreducible")})
    assert validate_homotopy(h).ok
    K = induced_homotopy(h, QQ)
    assert K is not None


def test_zero_homotopy_between_equal_bimodules():
    fc = cancelling_pair()
    m = identity_bimodule(fc)
    h = HomotopyData(m, m, {})
    assert validate_homotopy(h).ok
    induced_homotopy(h, QQ)


def test_homotopy_wrong_degree_rejected():
    fc = cancelling_pair()
    m = identity_bimodule(fc)
    h = HomotopyData(m, m, {("a", "b"): identity_block("irreducible")})
    report = validate_homotopy(h)
    assert not report.ok
    assert report.first[0] == "homotopy.degree"


# ---- suspension -------------------------------------------------------------

def test_suspend_lone_abelian():
    fc = lone_abelian(lift=0)
    susp = suspend(fc, "rho")
    assert validate_flowcat(susp).ok
    s_name, bar_name = suspended_names("rho")
    assert susp.objects[s_name].kind == "irreducible"
    assert susp.objects[s_name].lift == -1
    assert susp.objects[bar_name].kind == "abelian"
    assert susp.objects[bar_name].lift == -2
    # mapping-cone homology: classes in lifts 0 and 2, as for S^2
    hom = cm_complex(susp, QQ).homology()
    assert hom.get(0) == (1, []) and hom.get(2) == (1, [])


def test_suspend_cone_fixture_counts():
    fc = cone_fixture(n=3)
    susp = suspend(fc, "rho")
    assert validate_flowcat(susp).ok
    s_name, _ = suspended_names("rho")
    assert susp.block(s_name, "beta") == identity_block("irreducible").scaled(-3)


def test_default_sections_higher_block_error():
    fc = FlowCategoryData(
        [("rho", "abelian", 1), ("th", "central", 0)],
        {("rho", "th"): Block({("s0", "g0"): 2})},  # fiber degree 1
    )
    with pytest.raises(FlowError, match="higher-block-present"):
        default_sections(fc, "rho")


def test_sections_incompatible_rejected():
    fc = cone_fixture(n=2)
    bad = SectionData(B={"beta": identity_block("irreducible").scaled(5)})
    with pytest.raises(SectionIncompatible):
        suspend(fc, "rho", bad)


def test_suspend_requires_abelian():
    fc = lone_irreducible()
    with pytest.raises(FlowError, match="not-abelian"):
        suspend(fc, "a")


def test_sigma_rho_lone_abelian_quasi_iso():
    fc = lone_abelian()
    bm = sigma_rho(fc, "rho", ring=QQ)
    assert validate_bimodule(bm).ok
    phi = induced_map(bm, QQ)
    assert phi.is_quasi_iso()
    s_name, _ = suspended_names("rho")
    assert bm.block("rho", s_name) == Block({("s2", "g3"): 1})


def test_sigma_rho_with_disjoint_irreducible():
    fc = FlowCategoryData([("rho", "abelian", 0), ("c", "irreducible", 5)])
    bm = sigma_rho(fc, "rho", ring=QQ)
    assert induced_map(bm, QQ).is_quasi_iso()


def test_sigma_rho_cone_fixture():
    fc = cone_fixture(n=1)
    bm = sigma_rho(fc, "rho", ring=QQ)
    assert induced_map(bm, QQ).is_quasi_iso()
    fc3 = cone_fixture(n=2)
    bm3 = sigma_rho(fc3, "rho", ring=GF(5))
    assert induced_map(bm3, GF(5)).is_quasi_iso()


# ---- lifts over the suspension ----------------------------------------------

def test_lift_wplus_trivial_extension():
    fc = FlowCategoryData([("rho", "abelian", 0), ("a", "irreducible", 1)])
    target = FlowCategoryData([("a2", "irreducible", 1)])
    w = BimoduleData(fc, target, {("a", "a2"): identity_block("irreducible")}, offset=0)
    assert validate_bimodule(w).ok
    susp = suspend(fc, "rho")
    what = lift_Wplus(w, "rho", SectionData(), suspension=susp)
    assert validate_bimodule(what).ok
    sigma = sigma_rho(fc, "rho", suspension=susp)
    ok, witness = verify_wplus_composite(what, sigma, w)
    assert ok, witness


def test_lift_wplus_zero_locus_count():
    # w has one abelian-to-abelian block of fiber degree 2; the lift pushes
    # it into the zero-locus block over rho-bar with the doubled count
    fc = lone_abelian(lift=0)
    target = FlowCategoryData([("rho2", "abelian", -2)])
    w = BimoduleData(fc, target, {("rho", "rho2"): Block({("s0", "s2"): 3})}, offset=0)
    assert validate_bimodule(w).ok
    susp = suspend(fc, "rho")
    sigma = sigma_rho(fc, "rho", suspension=susp)
    t = sigma.block("rho", suspended_names("rho")[1]).entries.get(("s0", "s2"))
    sections = SectionData(Z={"rho2": Block({("s2", "s2"): Fraction(3) / t})})
    what = lift_Wplus(w, "rho", sections, suspension=susp)
    assert validate_bimodule(what).ok
    ok, witness = verify_wplus_composite(what, sigma, w)
    assert ok, witness


def test_lift_wplus_incompatible_sections():
    fc = lone_abelian(lift=0)
    target = FlowCategoryData([("rho2", "abelian", -2)])
    w = BimoduleData(fc, target, {("rho", "rho2"): Block({("s0", "s2"): 3})}, offset=0)
    susp = suspend(fc, "rho")
    sections = SectionData(Z={"rho2": Block({("s0", "s0"): 1, ("s2", "s2"): 6})})
    with pytest.raises(SectionIncompatible):
        lift_Wplus(w, "rho", sections, suspension=susp)


# ---- the obstructed-cobordism bimodule ---------------------------------------

def test_wminus_minimal():
    fc = lone_abelian(lift=0)
    target = lone_abelian(lift=2, name="rho2")
    wm = build_Wminus(fc, target, "rho", "rho2", {}, SectionData())
    assert validate_bimodule(wm).ok
    _, bar = suspended_names("rho2")
    assert wm.block("rho", bar) == identity_block("abelian")
    assert wm.degree_of("rho", bar) == 0


def test_wminus_cylinder_shape():
    # cylinder with signature data dropping at rho: the obstructed
    # reducible has fiber index -2; irreducibles continue with index 0
    fc = FlowCategoryData([("al", "irreducible", 2), ("rho", "abelian", 0)])
    target = FlowCategoryData([("al2", "irreducible", 2), ("rho2", "abelian", 2)])
    n_blocks = {("al", "al2"): identity_block("irreducible")}
    wm = build_Wminus(fc, target, "rho", "rho2", n_blocks, SectionData())
    assert validate_bimodule(wm).ok
    assert wm.degree_of("rho", suspended_names("rho2")[1]) == 0
    # the obstructed fiber index: lift difference plus offset = -2 mod 8
    assert (fc.objects["rho"].lift - target.objects["rho2"].lift + wm.offset) % 8 == 6


def test_wminus_relation_violated_tag():
    fc = FlowCategoryData([("al", "irreducible", 2), ("rho", "abelian", 0)])
    target = FlowCategoryData(
        [("al2", "irreducible", 2), ("bt2", "irreducible", 1), ("rho2", "abelian", 2)],
        {("al2", "bt2"): identity_block("irreducible")},
    )
    n_blocks = {("al", "al2"): identity_block("irreducible")}
    with pytest.raises(FlowError, match=r"relation-violated\(c\)"):
        build_Wminus(fc, target, "rho", "rho2", n_blocks, SectionData())


# ---- wall-crossing ------------------------------------------------------------

def test_wallcross_lone_rho():
    report = wallcross(lone_abelian(lift=0), "rho", ring=ZZ)
    assert report.triangle_exact
    assert report.chi0 == 0
    assert report.chi1 == -1     # one class in odd grading -1
    assert report.chi_drop == 1


def test_wallcross_cone_n1():
    report = wallcross(cone_fixture(n=1, rho_lift=2), "rho", ring=ZZ)
    assert report.triangle_exact
    assert report.v2 == {"beta": 1}
    assert all(free == 0 for free, _ in report.i1.values())
    assert report.chi_drop == 1


def test_wallcross_cone_n0():
    fc = FlowCategoryData([("rho", "abelian", 2), ("beta", "irreducible", 0)])
    report = wallcross(fc, "rho", ring=ZZ)
    assert report.triangle_exact
    assert report.chi_drop == 1
    ranks1 = {g: free for g, (free, _) in report.i1.items() if free}
    assert ranks1 == {0: 1, 1: 1}  # I0 plus Z[lift(rho) - 1]


def test_wallcross_cone_n2_torsion():
    report = wallcross(cone_fixture(n=2, rho_lift=2), "rho", ring=ZZ)
    assert report.triangle_exact
    assert report.chi_drop == 1
    assert report.i1[0] == (0, [2])


def test_chamber_ledger_three_crossings():
    fc = FlowCategoryData([
        ("r1", "abelian", 0), ("r2", "abelian", 2), ("r3", "abelian", 4),
        ("c", "irreducible", 1),
    ])
    chis = chamber_ledger(fc, ["r1", "r2", "r3"], ring=ZZ)
    assert len(chis) == 4
    for a, b in zip(chis, chis[1:]):
        assert b == a - 1
    assert chis[0] - chis[-1] == 3  # = (1/4) * (3 walls * 4)


# ---- randomized soundness (acceptance criterion 7) ---------------------------

MOTIFS = ["lone", "pair", "diamond", "sink", "cone", "abelian", "covering"]


def random_motif(rng, idx):
    kind = rng.choice(MOTIFS)
    shift = rng.randrange(-4, 5)
    tag = f"m{idx}"
    if kind == "lone":
        k = rng.choice(["irreducible", "central", "abelian"])
        return FlowCategoryData([(f"{tag}x", k, shift)])
    if kind == "pair":
        return FlowCategoryData(
            [(f"{tag}a", "irreducible", shift + 1), (f"{tag}b", "irreducible", shift)],
            {(f"{tag}a", f"{tag}b"):
             identity_block("irreducible").scaled(rng.randint(1, 4))})
    if kind == "diamond":
        a1, b1, a2 = (rng.randint(1, 3) for _ in range(3))
        # force a1 b1 + a2 b2 = 0 with integer b2
        b2 = -a1 * b1
        a2 = 1
        return FlowCategoryData(
            [(f"{tag}t", "irreducible", shift + 2), (f"{tag}m1", "irreducible", shift + 1),
             (f"{tag}m2", "irreducible", shift + 1), (f"{tag}b", "irreducible", shift)],
            {(f"{tag}t", f"{tag}m1"): identity_block("irreducible").scaled(a1),
             (f"{tag}t", f"{tag}m2"): identity_block("irreducible").scaled(a2),
             (f"{tag}m1", f"{tag}b"): identity_block("irreducible").scaled(b1),
             (f"{tag}m2", f"{tag}b"): identity_block("irreducible").scaled(b2)})
    if kind == "sink":
        return FlowCategoryData(
            [(f"{tag}a", "irreducible", shift + 1), (f"{tag}t", "central", shift)],
            {(f"{tag}a", f"{tag}t"): Block({("g0", "g0"): rng.randint(1, 5)})})
    if kind == "cone":
        return FlowCategoryData(
            [(f"{tag}r", "abelian", shift + 2), (f"{tag}b", "irreducible", shift)],
            {(f"{tag}r", f"{tag}b"): Block({("s2", "g3"): rng.randint(1, 4)})})
    if kind == "abelian":
        return FlowCategoryData(
            [(f"{tag}r", "abelian", shift), (f"{tag}r2", "abelian", shift - 1)],
            {(f"{tag}r", f"{tag}r2"):
             Block({("s0", "s0"): rng.randint(1, 3), ("s2", "s2"): rng.randint(1, 3)})
             if rng.random() < 0.5 else
             Block({("s0", "s0"): rng.randint(1, 3)})})
    # covering: abelian over central, fiber degree 1
    return FlowCategoryData(
        [(f"{tag}r", "abelian", shift + 1), (f"{tag}t", "central", shift)],
        {(f"{tag}r", f"{tag}t"): Block({("s0", "g0"): rng.randint(1, 4)})})


def disjoint_union(cats):
    objects = []
    blocks = {}
    for fc in cats:
        objects.extend(fc.objects.values())
        blocks.update(fc.blocks)
    return FlowCategoryData(objects, blocks)


def test_random_flowcats_d_squared_and_mutations():
    rng = random.Random(99)
    rejected = 0
    for trial in range(200):
        fc = disjoint_union([random_motif(rng, i) for i in range(rng.randint(1, 4))])
        report = validate_flowcat(fc)
        assert report.ok, f"trial {trial}: {report.first}"
        eq = cm_complex(fc, QQ)
        eq.complex.check_d_squared()  # d^2 = 0 through the exact kernel
        # mutate a diamond edge if one exists; this provably breaks AX1
        diamond_edges = [key for key in fc.blocks
                         if key[0].endswith("t") and "m" in key[1]]
        if diamond_edges:
            key = rng.choice(diamond_edges)
            mutated = {k: v for k, v in fc.blocks.items()}
            mutated[key] = mutated[key].scaled(2)
            bad = FlowCategoryData(fc.objects.values(), mutated, period=fc.period)
            bad_report = validate_flowcat(bad)
            assert not bad_report.ok
            assert any(f[0] == "flowcat.AX1" for f in bad_report.failures)
            rejected += 1
    assert rejected >= 30


def test_document_roundtrips():
    fc = cone_fixture(n=3)
    doc = fc.to_document()
    assert FlowCategoryData.from_document(doc).to_document() == doc
    bm = identity_bimodule(fc)
    bdoc = bm.to_document()
    assert BimoduleData.from_document(bdoc).to_document() == bdoc
    sections = default_sections(fc, "rho")
    sdoc = sections.to_document()
    assert SectionData.from_document(sdoc).to_document() == sdoc


def test_suspension_validates_on_randomized_cones():
    rng = random.Random(7)
    for trial in range(40):
        n = rng.randint(0, 5)
        lift = 2 * rng.randrange(-2, 3)
        fc = FlowCategoryData(
            [("rho", "abelian", lift), ("beta", "irreducible", lift - 2),
             ("c", "irreducible", lift + rng.randrange(1, 4))],
            {("rho", "beta"): Block({("s2", "g3"): n})} if n else {},
        )
        susp = suspend(fc, "rho")
        assert validate_flowcat(susp).ok
        bm = sigma_rho(fc, "rho", ring=QQ, suspension=susp)
        assert induced_map(bm, QQ).is_quasi_iso()
        report = wallcross(fc, "rho", ring=ZZ)
        assert report.triangle_exact
        assert report.chi_drop == 1
