import random
from fractions import Fraction

import pytest

import piclat.picard as picard
from piclat.exactalg import FGAbGroup
from piclat.invforms import FormKind, basic_form, form_from_params, form_lattice, pullback_form
from piclat.picard import (
    ClReport,
    FormNotDEven,
    Genus0NotHere,
    GenusOutOfRange,
    InconsistentResult,
    MarkedGenus,
    NeedsMarkedPoint,
    NSClass,
    cl_report,
    coker_gamma_bar,
    coker_omega,
    coker_res_bar,
    curve_ns,
    genus0_report,
    im_omega_gamma,
    marked_genus,
    ns_lattice,
    ns_membership,
    ns_pullback,
    ns_rig_lattice,
    ns_same_class,
    rpic_report,
    rpic_rig_report,
    torus_cokernels,
)
from piclat.rootdata import build_named, enumerate_pi1_ss_lifts, pi1_class

MIXED = ["GL:2", "GL:3", "torus:1 x SL:2", "torus:2 x PGL:3", "C[mu:2](Sp:4)", "torus:1 x PSO:8", "torus:2", "SO:7"]


def cyc(*orders):
    return FGAbGroup.from_cyclic_orders(orders)


def random_class(nsl, rng, spread=4):
    vec = [Fraction(0)] * nsl.lattice.ambient_dim
    for b in nsl.lattice.basis:
        c = rng.randint(-spread, spread)
        vec = [x + c * y for x, y in zip(vec, b)]
    return nsl.to_class(vec)


def components(spec, limit=3):
    datum = build_named(spec)
    out = [pi1_class(datum, l) for l in enumerate_pi1_ss_lifts(datum)[:limit]]
    if datum.pi1_generators and datum.abelian_rank:
        out.append(pi1_class(datum, [2 * x for x in datum.pi1_generators[0]]))
    return datum, out


# --- marked genus and ranks


def test_marked_genus_examples():
    mg = marked_genus(2, 2)
    assert mg.rank_h == 2
    assert mg.h_basis == ((-1, 2, 0), (0, 1, -1))
    assert marked_genus(1, 3).rank_h == 2
    assert (marked_genus(3, 0).rank_h, marked_genus(3, 0).rank_h_hat) == (0, 1)
    with pytest.raises(Genus0NotHere):
        marked_genus(0, 2).h_basis
    with pytest.raises(ValueError):
        marked_genus(-1, 0)


@pytest.mark.parametrize("g, n", [(1, 0), (1, 4), (2, 0), (2, 3), (5, 2)])
def test_h_basis_lies_on_the_degree_hyperplane(g, n):
    mg = marked_genus(g, n)
    for v in mg.h_basis:
        if g >= 2:
            assert (2 * g - 2) * v[0] + sum(v[1:]) == 0
        else:
            assert sum(v) == 0
    assert mg.rank_h == max(mg.rank_h_hat - 1, 0)


def test_rpic_examples():
    assert rpic_report(build_named("GL:2"), MarkedGenus(2, 0)).free_rank == 3
    assert rpic_report(build_named("torus:1"), MarkedGenus(2, 0)).free_rank == 2
    assert rpic_report(build_named("SL:2"), MarkedGenus(1, 0)).free_rank == 1
    with pytest.raises(GenusOutOfRange):
        rpic_report(build_named("SL:2"), MarkedGenus(0, 1))


@pytest.mark.parametrize("spec", MIXED)
def test_rigidification_drops_rank_by_abelian_dimension(spec):
    datum, comps = components(spec)
    s = datum.abelian_rank
    for delta in comps:
        assert ns_lattice(datum, delta).rank - ns_rig_lattice(datum, delta)[1].rank == s
        for g, n in ((2, 0), (3, 2)):
            mg = MarkedGenus(g, n)
            assert rpic_report(datum, mg, delta).free_rank - rpic_rig_report(datum, mg, delta).free_rank == s


# --- Neron-Severi membership and pullbacks


def test_membership_examples():
    t2 = build_named("torus:2")
    rng = random.Random(1)
    for _ in range(10):
        form = form_from_params(t2, [rng.randint(-3, 3) for _ in range(3)])
        cls = NSClass((rng.randint(-5, 5), rng.randint(-5, 5)), form)
        d = [rng.randint(-3, 3), rng.randint(-3, 3)]
        assert ns_membership(t2, d, cls)
        assert ns_membership(t2, d, cls, rigidified=True)
    sl2 = build_named("SL:2")
    assert ns_membership(sl2, 0, NSClass((0,), basic_form(sl2, 0)), rigidified=True)


def test_pgl2_twice_basic_is_not_derived_even():
    pgl2 = build_named("PGL:2")
    delta = pi1_class(pgl2, [Fraction(1, 2)])
    cls = NSClass((0,), basic_form(pgl2, 0).scale(2))
    assert not ns_membership(pgl2, delta, cls, rigidified=True)
    with pytest.raises(FormNotDEven):
        ns_membership(pgl2, delta, cls, rigidified=True, strict=True)
    # four times basic is derived-even and b(d, -) dies in the character quotient
    assert ns_membership(pgl2, delta, NSClass((0,), basic_form(pgl2, 0).scale(4)), rigidified=True)


@pytest.mark.parametrize("spec", MIXED)
def test_ns_basis_members_and_non_members(spec):
    datum, comps = components(spec)
    for delta in comps:
        nsl = ns_lattice(datum, delta)
        for cls in nsl.basis:
            assert ns_membership(datum, delta, cls)
        if datum.ss_dim:
            # shifting the character by a fractional coroot functional leaves NS
            cls = nsl.basis[0]
            bad = tuple(x + (Fraction(1, 7) if i == 0 else 0) for i, x in enumerate(cls.chi))
            assert not ns_membership(datum, delta, NSClass(bad, cls.form))


def test_pullback_identity():
    gl2 = build_named("GL:2")
    rng = random.Random(5)
    d = [Fraction(1, 2), 1]
    nsl = ns_lattice(gl2, d)
    for _ in range(10):
        cls = random_class(nsl, rng)
        back = ns_pullback([[1, 0], [0, 1]], gl2, gl2, d, cls)
        assert ns_same_class(gl2, back, cls)


def test_pullback_to_maximal_torus():
    """On the maximal torus the character becomes the canonical lift and b restricts."""
    gl2, t2 = build_named("GL:2"), build_named("torus:2")
    # columns: a basis of the cocharacters of GL_2 in its own coordinates
    iota = [[1, Fraction(1, 2)], [0, 1]]
    rng = random.Random(9)
    for d_t in ([0, 1], [1, -1], [2, 3]):
        d = [iota[0][0] * d_t[0] + iota[0][1] * d_t[1], iota[1][1] * d_t[1]]
        nsl = ns_lattice(gl2, d)
        for _ in range(5):
            cls = random_class(nsl, rng)
            back = ns_pullback(iota, t2, gl2, d_t, cls)
            assert back.form == pullback_form(iota, cls.form, t2, gl2)
            chi = picard.canonical_lift(gl2, pi1_class(gl2, d), cls)
            assert back.chi == tuple(sum(iota[i][j] * chi[i] for i in range(2)) for j in range(2))
            assert ns_membership(t2, d_t, back)


def test_pullback_composition_through_sl2():
    t1, sl2, gl2 = build_named("torus:1"), build_named("SL:2"), build_named("GL:2")
    rng = random.Random(11)
    for d in (-2, 0, 1, 3):
        nsl = ns_lattice(gl2, [d, 0])
        for _ in range(5):
            cls = random_class(nsl, rng)
            direct = ns_pullback([[1], [0]], t1, gl2, [d], cls)
            step = ns_pullback([[1]], t1, sl2, [d], ns_pullback([[1], [0]], sl2, gl2, [d], cls))
            assert ns_same_class(t1, direct, step)
            assert ns_membership(t1, [d], direct)


def test_pullback_rejects_wrong_component():
    sl2, gl2 = build_named("SL:2"), build_named("GL:2")
    cls = ns_lattice(gl2, [0, 0]).basis[0]
    with pytest.raises(picard.IncompatibleDelta):
        ns_pullback([[1], [0]], sl2, gl2, [0], cls, delta_target=[Fraction(1, 2), 1])


# --- images and cokernels


@pytest.mark.parametrize("spec", ["GL:3", "torus:1 x SO:7", "torus:1"])
def test_image_factors_one_abelian_dimension(spec):
    datum = build_named(spec)
    im = im_omega_gamma(datum, MarkedGenus(3, 0))
    assert im.invariant_factors == (1,) * (im.ambient.rank - 1) + (4,)
    im2 = im_omega_gamma(datum, MarkedGenus(3, 2))
    assert set(im2.invariant_factors) == {1}


def test_rigidified_image_for_gm():
    im = im_omega_gamma(build_named("torus:1"), MarkedGenus(3, 0), [0], rigidified=True)
    assert im.invariant_factors == (2,)
    # the condition reads 2 | b on the generator
    assert im.contains(im.ambient.basis[0]) is False


def test_coker_omega_examples():
    gm = build_named("torus:1")
    assert coker_omega(gm, MarkedGenus(3, 0), [0]).group == cyc(2)
    sl2 = build_named("SL:2")
    for g in (1, 2, 4):
        assert coker_omega(sl2, MarkedGenus(g, 1), 0).group == cyc(2)
    for dim in (1, 2, 3):
        t = build_named(f"torus:{dim}")
        assert coker_omega(t, MarkedGenus(2, 1), [1] * dim).group.is_trivial


def test_coker_gamma_bar_examples():
    assert coker_gamma_bar(build_named("torus:1"), 3, [0]) == cyc(2)
    # first summand 2/gcd(2, 1+1-2) = 1, second 2/gcd(1, 1) = 2
    assert coker_gamma_bar(build_named("torus:2"), 2, [1, 0]) == cyc(2)
    for spec in ("SL:3", "Spin:8", "E6ad"):
        assert coker_gamma_bar(build_named(spec), 3, 0).is_trivial


def test_coker_omega_reports_pieces():
    rep = coker_omega(build_named("GL:2"), MarkedGenus(3, 0), [0, 0])
    assert rep.piece("Hom(Lambda(G^ab), Z/(2g-2))") == cyc(4)
    assert rep.piece("coker(ev)") == cyc(2)
    assert rep.group.order * rep.piece("coker(gamma-bar)").order == 4 * 2
    assert "weight-cokernel-sequence" in rep.theorem_tags


@pytest.mark.parametrize("dim, g", [(1, 2), (1, 5), (2, 3), (2, 1), (3, 2)])
def test_torus_fast_path_matches_engine(dim, g):
    rng = random.Random(dim * 10 + g)
    for _ in range(6):
        d = [rng.randint(-6, 6) for _ in range(dim)]
        assert torus_cokernels(dim, g, d) == torus_cokernels(dim, g, d, generic=True)


def test_torus_genus_one_convention():
    assert torus_cokernels(1, 1, [0])[1].is_trivial
    assert torus_cokernels(2, 1, [0, 0])[1].is_trivial
    assert torus_cokernels(1, 1, [3])[1] == cyc(0)


def _transformed_basis(monkeypatch, U):
    original = picard._ab_basis_with_lifts

    def patched(datum):
        basis, lifts = original(datum)
        mix = lambda rows: tuple(
            tuple(sum(U[i][k] * rows[k][j] for k in range(len(rows))) for j in range(len(rows[0]))) for i in range(len(U))
        )
        return mix(basis), mix(lifts)

    monkeypatch.setattr(picard, "_ab_basis_with_lifts", patched)


@pytest.mark.parametrize("spec", ["torus:2", "torus:2 x SL:3", "torus:2 x Sp:4"])
def test_divisibility_conditions_do_not_depend_on_basis(spec, monkeypatch):
    datum = build_named(spec)
    mg = MarkedGenus(3, 0)
    deltas = [[0] * datum.ambient_dim, [0] * datum.ss_dim + [1, 2]]
    before = [(im_omega_gamma(datum, mg, d).image, im_omega_gamma(datum, mg, d, True).image) for d in deltas]
    picard._ns_lattice_cached.cache_clear()
    picard._ns_rig_cached.cache_clear()
    _transformed_basis(monkeypatch, [[2, 1], [1, 1]])
    after = [(im_omega_gamma(datum, mg, d).image, im_omega_gamma(datum, mg, d, True).image) for d in deltas]
    assert before == after


# --- the fixed curve


def test_curve_ns_examples():
    t1 = curve_ns(build_named("torus:1"), [0], 2)
    assert t1.rank == 2
    assert t1.contains([Fraction(0)], [[Fraction(3)]], []) and t1.contains([5], [[-1]], [])
    sl2 = curve_ns(build_named("SL:2"), 0, 2)
    assert sl2.rank == 1 and sl2.contains([], [], [1])
    gl2 = curve_ns(build_named("GL:2"), [Fraction(1, 2), 1], 2)
    half = Fraction(1, 2)
    assert gl2.contains([half], [[half]], [1])
    assert not gl2.contains([0], [[half]], [1])
    assert gl2.contains([0], [[0]], [2])
    assert any("End(J_C)" in n for n in gl2.notes)


@pytest.mark.parametrize("spec", MIXED)
def test_restriction_lands_in_curve_ns(spec):
    datum, comps = components(spec)
    rng = random.Random(len(spec))
    for delta in comps:
        cns = curve_ns(datum, delta, 2)
        nsl = ns_lattice(datum, delta)
        for _ in range(5):
            cls = random_class(nsl, rng)
            assert cns.contains(*cns.res_ns(cls))


def test_coker_res_bar_examples():
    assert coker_res_bar(build_named("GL:3"), MarkedGenus(2, 1), 0).group.is_trivial
    assert coker_res_bar(build_named("SO:11"), MarkedGenus(2, 1), 0).group == cyc(2)
    rep = coker_res_bar(build_named("GL:2"), MarkedGenus(3, 0), 0)
    assert rep.group == cyc(4)
    assert (rep.piece("coker(omega_ab + gamma_ab)"), rep.piece("coker(r_G)")) == (cyc(4), cyc())


# --- genus zero and class groups


def test_genus0_examples():
    rep = genus0_report(build_named("SL:2"), 1, 0)
    assert (rep.free_rank, rep.piece("coker(omega)")) == (1, cyc(2))
    rep = genus0_report(build_named("torus:1"), 1, [0])
    assert (rep.free_rank, rep.piece("coker(omega)")) == (1, cyc())
    rep = genus0_report(build_named("GL:2"), 1, [Fraction(1, 2), 1])
    assert rep.piece("coker(omega)").is_trivial
    with pytest.raises(NeedsMarkedPoint):
        genus0_report(build_named("SL:2"), 0, 0)


def test_cl_report_examples():
    rep = cl_report(build_named("torus:1"), MarkedGenus(2, 1), [0])
    assert isinstance(rep, ClReport) and rep.applicable is True and rep.case == "torus"
    rep = cl_report(build_named("SL:2"), MarkedGenus(2, 1), 0)
    assert rep.applicable is None and any("PGL_2" in c for c in rep.caveats)
    rep = cl_report(build_named("SL:3"), MarkedGenus(3, 0), 0, characteristic=5)
    assert rep.applicable is False and any("g >= 4" in r for r in rep.reasons)
    assert cl_report(build_named("SL:3"), MarkedGenus(4, 0), 0, characteristic=5).applicable is True
    assert cl_report(build_named("SL:3"), MarkedGenus(1, 1), 0).applicable is False


def test_inconsistent_result_is_an_assertion():
    assert issubclass(InconsistentResult, AssertionError)
