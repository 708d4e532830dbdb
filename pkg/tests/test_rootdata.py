from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from piclat.exactalg import FGAbGroup, LatticeInAmbient
from piclat.groupspec import ParseError, format_group_spec, parse_group_spec
from piclat.rootdata import (
    InvalidIsogeny,
    UnsupportedType,
    build_named,
    datum_from_text,
    derive_parts,
    enumerate_pi1_ss_lifts,
    make_datum,
    pi1_class,
    simple_factor_table,
    validate_datum,
)

TYPES = ["A1", "A4", "B3", "C4", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]


def det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(n))


def test_a1_table():
    t = simple_factor_table("A1")
    assert t.cartan == ((2,),)
    assert t.basic_gram == ((2,),)
    assert t.fund_group.invariant_factors == (2,)


def test_fundamental_groups_of_types():
    assert simple_factor_table("D4").fund_group.invariant_factors == (2, 2)
    assert simple_factor_table("D5").fund_group.invariant_factors == (4,)
    assert simple_factor_table("G2").fund_group.is_trivial


@pytest.mark.parametrize("tag", TYPES)
def test_cartan_determinant_is_center_order(tag):
    t = simple_factor_table(tag)
    assert det([list(r) for r in t.cartan]) == t.fund_group.order


@pytest.mark.parametrize("tag", TYPES)
def test_basic_gram_is_even_symmetric_and_invariant(tag):
    t = simple_factor_table(tag)
    G = [list(r) for r in t.basic_gram]
    l = t.rank
    assert all(G[i][j] == G[j][i] for i in range(l) for j in range(l))
    assert all(G[i][i] % 2 == 0 for i in range(l))
    assert min(G[i][i] for i in range(l)) == 2, "short coroots have length 2"
    for node in range(1, l + 1):
        S = t.reflection(node)
        SGS = [[sum(S[k][i] * G[k][m] * S[m][j] for k in range(l) for m in range(l)) for j in range(l)] for i in range(l)]
        assert SGS == G


def test_unsupported_type():
    with pytest.raises(UnsupportedType):
        simple_factor_table("H3")


# closed forms for pi_1 and the character group of the center
NAMED = [
    ("SL:5", (), (5,)),
    ("SL:6/mu:2", (2,), (3,)),
    ("SL:4/mu:2", (2,), (2,)),
    ("PGL:4", (4,), ()),
    ("Spin:7", (), (2,)),
    ("SO:7", (2,), ()),
    ("Sp:6", (), (2,)),
    ("PSp:6", (2,), ()),
    ("Spin:10", (), (4,)),
    ("Spin:8", (), (2, 2)),
    ("SO:10", (2,), (2,)),
    ("SO:8", (2,), (2,)),
    ("PSO:10", (4,), ()),
    ("PSO:8", (2, 2), ()),
    ("Omega+:8", (2,), (2,)),
    ("Omega-:12", (2,), (2,)),
    ("E6sc", (), (3,)),
    ("E6ad", (3,), ()),
    ("E7sc", (), (2,)),
    ("E7ad", (2,), ()),
    ("E8", (), ()),
    ("F4", (), ()),
    ("G2", (), ()),
]


@pytest.mark.parametrize("spec, pi1, center", NAMED)
def test_named_semisimple_groups(spec, pi1, center):
    parts = derive_parts(build_named(spec))
    assert parts.pi1.invariant_factors == pi1
    assert parts.center_chars.invariant_factors == center
    assert parts.dcenter_chars == parts.center_chars


def test_gl_and_tori():
    parts = derive_parts(build_named("GL:3"))
    assert parts.pi1.invariant_factors == (0,)
    assert parts.lambda_D == LatticeInAmbient.from_generators(3, [[1, 0, 0], [0, 1, 0]])
    assert parts.lambda_ab.rank == 1
    assert parts.center_chars.free_rank == 1
    t2 = derive_parts(build_named("torus:2"))
    assert t2.pi1.invariant_factors == (0, 0)
    assert t2.lambda_D.rank == 0


@pytest.mark.parametrize(
    "spec",
    ["GL:4", "torus:2 x SL:3", "C[mu:2](Spin:7)", "C[mu:2](SL:4/mu:2)", "torus:1 x PSO:8", "C[mu:3](E6sc)", "SO:9 x Sp:4"],
)
def test_pi1_exact_sequence(spec):
    """Torsion of pi_1 is pi_1 of the derived group and the free part that of G^ab."""
    datum = build_named(spec)
    parts = derive_parts(datum)
    tors = FGAbGroup(parts.pi1.torsion)
    from piclat.exactalg import quotient_group

    assert quotient_group(parts.lambda_D, parts.lambda_sc) == tors
    assert parts.pi1.free_rank == datum.abelian_rank
    assert validate_datum(datum) == []


def test_validate_datum_violations():
    assert validate_datum(build_named("SL:2")) == []
    missing = make_datum(["A1"], 0, [[2]])
    assert [v.kind for v in validate_datum(missing)] == ["MissingCoroot"]
    too_big = make_datum(["A1"], 0, [[Fraction(1, 4)]])
    assert "NotInCoweightLattice" in [v.kind for v in validate_datum(too_big)]


def test_bad_isogenies_rejected():
    for spec in ("SL:7/mu:2", "Omega+:10", "C[mu:4](SL:4/mu:2)"):
        with pytest.raises(InvalidIsogeny):
            build_named(spec)


def test_pi1_class_examples():
    gl = build_named("GL:4")
    gen = gl.pi1_generators[0]
    for d in range(-5, 6):
        el = pi1_class(gl, [d * x for x in gen])
        assert el.delta_ab[-1] == d
        assert el.ss_order == 4 // gcd(4, d)
    sl3 = build_named("SL:3")
    assert pi1_class(sl3, [1, 0]).order_in_pi1 == 1
    so10 = build_named("SO:10")
    eps1 = simple_factor_table("D5").coweight(1)
    assert pi1_class(so10, eps1).order_in_pi1 == 2


@pytest.mark.parametrize("spec", ["PSO:8", "C[mu:2](SL:4/mu:2)", "SL:6/mu:3", "E6ad"])
def test_enumerated_lifts_hit_every_class(spec):
    datum = build_named(spec)
    lifts = enumerate_pi1_ss_lifts(datum)
    classes = {pi1_class(datum, l).delta_ss_class for l in lifts}
    assert len(classes) == len(lifts) == derive_parts(datum).pi1_ss.order


# --- group-spec strings and custom data

specs = st.recursive(
    st.one_of(
        st.integers(1, 3).map(lambda a: f"torus:{a}"),
        st.integers(2, 5).map(lambda n: f"SL:{n}"),
        st.integers(2, 5).map(lambda n: f"GL:{n}"),
        st.sampled_from(["Spin:7", "SO:8", "PSO:8", "Omega+:8", "Sp:4", "PSp:6", "E6sc", "E7ad", "G2", "SL:6/mu:2"]),
    ),
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(" x ".join),
        st.tuples(st.integers(2, 4), inner).map(lambda t: f"C[mu:{t[0]}]({t[1]})"),
    ),
    max_leaves=4,
)


@given(specs)
def test_group_spec_round_trip(text):
    spec = parse_group_spec(text)
    again = parse_group_spec(str(spec))
    assert again.ast == spec.ast
    assert format_group_spec(again.ast) == str(spec)


def test_group_spec_errors():
    for bad in ("", "Foo:3", "GL:3 x", "C[mu:2](SL:2", "Sp:4/mu:2"):
        with pytest.raises(ParseError):
            parse_group_spec(bad)


def test_datum_file_matches_builder():
    text = """
    # GL_4 as (SL_4 x G_m)/mu_4
    abelian_rank = 1
    factors = [A:3]
    cochar = [[1,0,0,0], [0,1,0,0], [0,0,1,0], [1/4,1/2,3/4,1]]
    """
    datum = datum_from_text(text)
    built = build_named("GL:4")
    assert datum.cochar == LatticeInAmbient.from_generators(4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]])
    assert derive_parts(datum).pi1 == derive_parts(built).pi1
    assert validate_datum(datum) == []


@pytest.mark.parametrize(
    "text",
    [
        "abelian_rank = 1\nfactors = [A:3]",
        "abelian_rank = x\nfactors = [A:1]\ncochar = [[1]]",
        "abelian_rank = 0\nfactors = [A:1]\ncochar = [[1, 0]]",
        "abelian_rank = 0\nfactors = [Q:1]\ncochar = [[1]]",
        "abelian_rank = 0\nfactors = [A:1]\ncochar = [[1/0]]",
    ],
)
def test_datum_file_errors(text):
    with pytest.raises(ParseError):
        datum_from_text(text)
