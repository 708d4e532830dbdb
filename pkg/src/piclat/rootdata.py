"""Root data of reductive groups.

A reductive group is described by its simple factors, an abelian rank ``a``
and its cocharacter lattice, all inside one ambient space::

    Q^(l_1) + ... + Q^(l_k) + Q^a

The first blocks hold simple-coroot coordinates of each simple factor (in
Bourbaki numbering), the last block is the abelian part.  With these
coordinates the coroot lattice of the simply connected cover is the standard
integer lattice of the semisimple block, and the coweight lattice is spanned
by the rows of the inverse Cartan matrices.

Cartan entries follow ``a_ij = <alpha_i^vee, alpha_j>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .exactalg import (
    FGAbGroup,
    LatticeInAmbient,
    NotInLattice,
    _hnf_rows,
    integer_left_kernel,
    _scaled_int_rows,
    lattice_dual,
    lcm,
    quotient_group,
    rational_inverse,
    rational_rank,
)
from .groupspec import Atom, ParseError, Product, Twist, format_group_spec, parse_group_spec

__all__ = [
    "UnsupportedType",
    "InvalidIsogeny",
    "ParseError",
    "NotInLattice",
    "SimpleFactorTable",
    "ReductiveDatum",
    "DerivedParts",
    "Pi1Element",
    "Violation",
    "simple_factor_table",
    "build_named",
    "make_datum",
    "direct_product",
    "central_twist",
    "derive_parts",
    "validate_datum",
    "pi1_class",
    "datum_from_text",
    "enumerate_pi1_ss_lifts",
]


class UnsupportedType(ValueError):
    pass


class InvalidIsogeny(ValueError):
    pass


# ---------------------------------------------------------------------------
# Simple factors


def _dynkin_edges(family: str, l: int) -> list[tuple[int, int, int, int]]:
    """Edges ``(i, j, a_ij, a_ji)`` with 1-based Bourbaki labels."""
    chain = [(i, i + 1, -1, -1) for i in range(1, l)]
    if family == "A":
        return chain
    if family == "B":
        return chain[:-1] + [(l - 1, l, -1, -2)]
    if family == "C":
        return chain[:-1] + [(l - 1, l, -2, -1)]
    if family == "D":
        return chain[:-1] + [(l - 2, l, -1, -1)]
    if family == "E":
        return [(1, 3, -1, -1), (2, 4, -1, -1)] + [(i, i + 1, -1, -1) for i in range(3, l)]
    if family == "F":
        return [(1, 2, -1, -1), (2, 3, -1, -2), (3, 4, -1, -1)]
    if family == "G":
        return [(1, 2, -3, -1)]
    raise UnsupportedType(family)


_RANK_BOUNDS = {"A": 1, "B": 2, "C": 2, "D": 3}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


def _parse_tag(tag: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*[_:]?\s*(\d+)\s*", tag)
    if not m:
        raise UnsupportedType(f"bad type tag {tag!r}")
    fam, l = m.group(1).upper(), int(m.group(2))
    if fam in _RANK_BOUNDS:
        if l < _RANK_BOUNDS[fam]:
            raise UnsupportedType(f"{fam}{l} is below the rank bound")
    elif fam in _FIXED_RANKS:
        if l not in _FIXED_RANKS[fam]:
            raise UnsupportedType(f"no exceptional type {fam}{l}")
    else:
        raise UnsupportedType(f"unknown family {fam}")
    return fam, l


@dataclass(frozen=True)
class SimpleFactorTable:
    """Data of one simple factor in simple-coroot coordinates."""

    type_tag: str
    family: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    coweights: tuple[tuple[Fraction, ...], ...]
    basic_gram: tuple[tuple[int, ...], ...]
    fund_group: FGAbGroup
    root_length_factors: tuple[int, ...]

    def coweight(self, node: int) -> tuple[Fraction, ...]:
        """Fundamental coweight of the 1-based node, in coroot coordinates."""
        return tuple(row[node - 1] for row in self.coweights)

    def reflection(self, node: int) -> tuple[tuple[int, ...], ...]:
        """Matrix of the simple reflection ``s_node`` on coroot coordinates."""
        j = node - 1
        l = self.rank
        S = [[int(r == c) for c in range(l)] for r in range(l)]
        for i in range(l):
            S[j][i] -= self.cartan[i][j]
        return tuple(tuple(r) for r in S)


@lru_cache(maxsize=None)
def simple_factor_table(type_tag: str) -> SimpleFactorTable:
    """Cartan matrix, coweights, basic Gram and fundamental group of a type."""
    fam, l = _parse_tag(type_tag)
    A = [[2 if i == j else 0 for j in range(l)] for i in range(l)]
    for i, j, aij, aji in _dynkin_edges(fam, l):
        A[i - 1][j - 1] = aij
        A[j - 1][i - 1] = aji
    # symmetrize: a_ij d_j = a_ji d_i, smallest value 1 (long roots)
    d: list[Fraction | None] = [None] * l
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if A[i][j] and d[j] is None:
                d[j] = d[i] * Fraction(A[j][i], A[i][j])
                stack.append(j)
    dmin = min(d)
    dint = tuple(int(x / dmin) for x in d)
    gram = tuple(tuple(A[i][j] * dint[j] for j in range(l)) for i in range(l))
    Ainv = rational_inverse(A)
    # column i of ``coweights`` is row i of A^{-1}
    coweights = tuple(tuple(Ainv[c][r] for c in range(l)) for r in range(l))
    P = LatticeInAmbient.from_generators(l, Ainv)
    fund = quotient_group(P, LatticeInAmbient.standard(l))
    return SimpleFactorTable(
        type_tag=f"{fam}{l}",
        family=fam,
        rank=l,
        cartan=tuple(tuple(r) for r in A),
        coweights=coweights,
        basic_gram=gram,
        fund_group=fund,
        root_length_factors=dint,
    )


# ---------------------------------------------------------------------------
# Reductive data


@dataclass(frozen=True)
class ReductiveDatum:
    """Simple factors, abelian rank and cocharacter lattice.

    ``pi1_generators`` are preferred lifts used to resolve integer
    shorthands for a component; they do not affect equality.
    """

    factors: tuple[SimpleFactorTable, ...]
    abelian_rank: int
    cochar: LatticeInAmbient
    label: str = field(default="", compare=False)
    pi1_generators: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False)

    @property
    def ss_dim(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def ambient_dim(self) -> int:
        return self.ss_dim + self.abelian_rank

    @property
    def factor_slices(self) -> tuple[range, ...]:
        out, start = [], 0
        for f in self.factors:
            out.append(range(start, start + f.rank))
            start += f.rank
        return tuple(out)

    @property
    def ab_slice(self) -> range:
        return range(self.ss_dim, self.ambient_dim)

    @property
    def is_torus(self) -> bool:
        return not self.factors

    def embed_factor_vector(self, index: int, v: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.ambient_dim
        for pos, x in zip(self.factor_slices[index], v):
            out[pos] = Fraction(x)
        return tuple(out)

    def ss_part(self, v: Sequence) -> tuple[Fraction, ...]:
        s = self.ss_dim
        return tuple(Fraction(x) if i < s else Fraction(0) for i, x in enumerate(v))

    def ab_part(self, v: Sequence) -> tuple[Fraction, ...]:
        s = self.ss_dim
        return tuple(Fraction(x) if i >= s else Fraction(0) for i, x in enumerate(v))

    def __str__(self):
        return self.label or f"datum({'x'.join(f.type_tag for f in self.factors)}; a={self.abelian_rank})"


def make_datum(
    factor_tags: Sequence[str],
    abelian_rank: int,
    generators: Sequence[Sequence],
    label: str = "",
    pi1_generators: Sequence[Sequence] = (),
) -> ReductiveDatum:
    """Datum from type tags, abelian rank and cocharacter generators (rows).

    Nothing is validated here; see :func:`validate_datum`.
    """
    factors = tuple(simple_factor_table(t) for t in factor_tags)
    dim = sum(f.rank for f in factors) + abelian_rank
    lat = LatticeInAmbient.from_generators(dim, generators)
    gens = tuple(tuple(Fraction(x) for x in g) for g in pi1_generators)
    return ReductiveDatum(factors, abelian_rank, lat, label, gens)


def _coroot_rows(datum: ReductiveDatum) -> list[tuple[Fraction, ...]]:
    m = datum.ambient_dim
    return [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(datum.ss_dim)]


def _simple_datum(tag: str, extra_gens: Sequence[Sequence], label: str, pi1_gens=()) -> ReductiveDatum:
    t = simple_factor_table(tag)
    gens = [[int(i == j) for j in range(t.rank)] for i in range(t.rank)] + [list(g) for g in extra_gens]
    return make_datum([tag], 0, gens, label, pi1_gens)


def direct_product(*data: ReductiveDatum) -> ReductiveDatum:
    """Product datum; semisimple blocks come first, then the abelian blocks."""
    factors = tuple(f for d in data for f in d.factors)
    a = sum(d.abelian_rank for d in data)
    ss_total = sum(d.ss_dim for d in data)
    m = ss_total + a

    def embedder(idx: int):
        ss_off = sum(d.ss_dim for d in data[:idx])
        ab_off = ss_total + sum(d.abelian_rank for d in data[:idx])
        d = data[idx]

        def emb(v):
            out = [Fraction(0)] * m
            for i, x in enumerate(v):
                pos = ss_off + i if i < d.ss_dim else ab_off + (i - d.ss_dim)
                out[pos] = Fraction(x)
            return tuple(out)

        return emb

    gens, pi1 = [], []
    for idx, d in enumerate(data):
        emb = embedder(idx)
        gens += [emb(b) for b in d.cochar.basis]
        pi1 += [emb(g) for g in d.pi1_generators]
    label = " x ".join(d.label for d in data)
    return ReductiveDatum(factors, a, LatticeInAmbient.from_generators(m, gens), label, tuple(pi1))


def _coweight_in_ambient(datum: ReductiveDatum, global_node: int) -> tuple[Fraction, ...]:
    """Fundamental coweight of a node numbered across all factors (1-based)."""
    for idx, f in enumerate(datum.factors):
        if global_node <= f.rank:
            return datum.embed_factor_vector(idx, f.coweight(global_node))
        global_node -= f.rank
    raise InvalidIsogeny("twist node index out of range")


def _order_modulo(lat: LatticeInAmbient, v: Sequence[Fraction]) -> int:
    rc = lat.rational_coordinates(v)
    if rc is None:
        return 0
    return lcm(*[x.denominator for x in rc]) if rc else 1


def central_twist(inner: ReductiveDatum, k: int, node: int | None = None, label: str = "") -> ReductiveDatum:
    """``(inner x G_m)/mu_k`` with ``mu_k`` embedded through a coweight.

    Cocharacters: ``(Lambda_inner + k Z) + Z (x, 1)`` where ``x`` is a
    multiple of the chosen fundamental coweight of exact order ``k`` modulo
    ``Lambda_inner``.  By default the first node admitting such an ``x`` is
    used.
    """
    if k < 1:
        raise InvalidIsogeny("twist order must be positive")
    nodes = [node] if node is not None else list(range(1, inner.ss_dim + 1))
    x = None
    for nd in nodes:
        w = _coweight_in_ambient(inner, nd)
        o = _order_modulo(inner.cochar, w)
        if o and o % k == 0:
            x = tuple(c * (o // k) for c in w)
            break
    if x is None:
        raise InvalidIsogeny(f"no coweight of order divisible by {k} modulo the cocharacters")
    m = inner.ambient_dim + 1
    gens = [tuple(b) + (Fraction(0),) for b in inner.cochar.basis]
    gens.append((Fraction(0),) * (m - 1) + (Fraction(k),))
    twist_gen = tuple(x) + (Fraction(1),)
    gens.append(twist_gen)
    pi1 = (twist_gen,) + tuple(tuple(g) + (Fraction(0),) for g in inner.pi1_generators)
    lbl = label or f"C[mu:{k}]({inner.label})"
    return ReductiveDatum(
        inner.factors, inner.abelian_rank + 1, LatticeInAmbient.from_generators(m, gens), lbl, pi1
    )


def _build_atom(atom: Atom) -> ReductiveDatum:
    name, args = atom.name, atom.args
    label = format_group_spec(atom)
    if name == "torus":
        (a,) = args
        if a < 1:
            raise InvalidIsogeny("torus rank must be positive")
        eye = [[int(i == j) for j in range(a)] for i in range(a)]
        return make_datum([], a, eye, label, eye)
    if name in ("SL", "PGL", "GL"):
        n = args[0]
        if n < 2:
            if name == "GL" and n == 1:
                return make_datum([], 1, [[1]], label, [[1]])
            raise InvalidIsogeny(f"{name}:{n} needs n >= 2")
        r = n if name == "PGL" else (args[1] if len(args) == 2 else 1)
        if name == "GL":
            return central_twist(_build_atom(Atom("SL", (n,))), n, 1, label)
        if r < 1 or n % r:
            raise InvalidIsogeny(f"r = {r} does not divide n = {n}")
        t = simple_factor_table(f"A{n - 1}")
        g = tuple(c * (n // r) for c in t.coweight(1))
        return _simple_datum(f"A{n - 1}", [g], label, [g])
    if name in ("Sp", "PSp"):
        m = args[0]
        if m % 2 or m < 2:
            raise InvalidIsogeny(f"{name}:{m} needs an even size")
        l = m // 2
        if l == 1:
            return _build_atom(Atom("SL" if name == "Sp" else "PGL", (2,)))
        t = simple_factor_table(f"C{l}")
        w = t.coweight(l)
        if name == "Sp":
            return _simple_datum(f"C{l}", [], label, [[0] * l])
        return _simple_datum(f"C{l}", [w], label, [w])
    if name in ("Spin", "SO"):
        m = args[0]
        if m < 5:
            raise InvalidIsogeny(f"{name}:{m} is not supported (needs m >= 5)")
        if m % 2:
            l = (m - 1) // 2
            tag = f"B{l}"
        else:
            l = m // 2
            tag = f"D{l}"
        t = simple_factor_table(tag)
        if name == "Spin":
            return _simple_datum(tag, [], label, [[0] * l])
        w = t.coweight(1)
        return _simple_datum(tag, [w], label, [w])
    if name in ("PSO", "Omega+", "Omega-"):
        m = args[0]
        if m % 2 or m < 6:
            raise InvalidIsogeny(f"{name}:{m} needs an even size >= 6")
        l = m // 2
        t = simple_factor_table(f"D{l}")
        if name == "PSO":
            gens = [t.coweight(l), t.coweight(1)]
            return _simple_datum(f"D{l}", gens, label, gens)
        if l % 2:
            raise InvalidIsogeny(f"{name} needs l even (got l = {l})")
        w = t.coweight(l if name == "Omega+" else l - 1)
        return _simple_datum(f"D{l}", [w], label, [w])
    exceptional = {
        "E6sc": ("E6", None),
        "E6ad": ("E6", 1),
        "E7sc": ("E7", None),
        "E7ad": ("E7", 7),
        "E8": ("E8", None),
        "F4": ("F4", None),
        "G2": ("G2", None),
    }
    if name in exceptional:
        tag, node = exceptional[name]
        t = simple_factor_table(tag)
        if node is None:
            return _simple_datum(tag, [], label, [[0] * t.rank])
        w = t.coweight(node)
        return _simple_datum(tag, [w], label, [w])
    raise ParseError(f"unknown builder {name}")


def _build_node(node) -> ReductiveDatum:
    if isinstance(node, Atom):
        return _build_atom(node)
    if isinstance(node, Product):
        d = direct_product(*[_build_node(p) for p in node.parts])
        return ReductiveDatum(d.factors, d.abelian_rank, d.cochar, format_group_spec(node), d.pi1_generators)
    if isinstance(node, Twist):
        return central_twist(_build_node(node.inner), node.k, node.node, format_group_spec(node))
    raise ParseError(f"unexpected node {node!r}")


@lru_cache(maxsize=512)
def build_named(spec: str) -> ReductiveDatum:
    """Datum for a group-spec string such as ``"SL:4/mu:2"`` or ``"torus:1 x Sp:4"``."""
    datum = _build_node(parse_group_spec(spec).ast)
    bad = validate_datum(datum)
    if bad:
        raise InvalidIsogeny(f"{spec}: {', '.join(str(v) for v in bad)}")
    return datum


# ---------------------------------------------------------------------------
# Derived lattices


@dataclass(frozen=True)
class DerivedParts:
    """Canonical sub- and quotient lattices of a datum (all in the ambient)."""

    lambda_T: LatticeInAmbient
    lambda_sc: LatticeInAmbient
    lambda_D: LatticeInAmbient
    lambda_ss: LatticeInAmbient
    lambda_R: LatticeInAmbient
    lambda_ab: LatticeInAmbient
    lambda_ad: LatticeInAmbient
    dual_T: LatticeInAmbient
    dual_sc: LatticeInAmbient
    dual_D: LatticeInAmbient
    dual_ss: LatticeInAmbient
    dual_R: LatticeInAmbient
    dual_ab: LatticeInAmbient
    dual_ad: LatticeInAmbient
    pi1: FGAbGroup
    pi1_ss: FGAbGroup
    center_chars: FGAbGroup
    dcenter_chars: FGAbGroup
    # lifts to lambda_T of the canonical bases of lambda_ab and lambda_ss
    ab_lifts: tuple[tuple[Fraction, ...], ...]
    ss_lifts: tuple[tuple[Fraction, ...], ...]


def _projection_with_lifts(
    L: LatticeInAmbient, keep: range
) -> tuple[LatticeInAmbient, tuple[tuple[Fraction, ...], ...]]:
    """Projection of ``L`` onto the ``keep`` coordinates and lifts of its basis."""
    B = L.basis
    m = L.ambient_dim
    if not B or not len(keep):
        return LatticeInAmbient.zero(m), ()
    proj = [[b[j] if j in keep else Fraction(0) for j in range(m)] for b in B]
    ints = _scaled_int_rows(proj)
    H, U, rank = _hnf_rows(ints, m, transform=True)
    image = LatticeInAmbient.from_generators(m, proj)
    lifts = []
    for i in range(rank):
        lifts.append(tuple(sum((U[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(m)))
    # order lifts to match the canonical basis of the image
    by_proj = {}
    for v in lifts:
        by_proj[tuple(v[j] if j in keep else Fraction(0) for j in range(m))] = v
    ordered = tuple(by_proj[b] for b in image.basis)
    return image, ordered


@lru_cache(maxsize=1024)
def derive_parts(datum: ReductiveDatum) -> DerivedParts:
    m = datum.ambient_dim
    s = datum.ss_dim
    L = datum.cochar
    ss_range = range(0, s)
    ab_range = datum.ab_slice
    unit = lambda i: tuple(Fraction(int(j == i)) for j in range(m))
    lam_sc = LatticeInAmbient.from_generators(m, [unit(i) for i in ss_range])
    ad_gens = []
    for idx, f in enumerate(datum.factors):
        for node in range(1, f.rank + 1):
            ad_gens.append(datum.embed_factor_vector(idx, f.coweight(node)))
    lam_ad = LatticeInAmbient.from_generators(m, ad_gens)
    # intersections with coordinate subspaces
    lam_D = _intersect_with_coordinate_span(L, ss_range)
    lam_R = _intersect_with_coordinate_span(L, ab_range)
    lam_ss, ss_lifts = _projection_with_lifts(L, ss_range)
    lam_ab, ab_lifts = _projection_with_lifts(L, ab_range)
    dual = lattice_dual
    parts = DerivedParts(
        lambda_T=L,
        lambda_sc=lam_sc,
        lambda_D=lam_D,
        lambda_ss=lam_ss,
        lambda_R=lam_R,
        lambda_ab=lam_ab,
        lambda_ad=lam_ad,
        dual_T=dual(L),
        dual_sc=dual(lam_sc),
        dual_D=dual(lam_D),
        dual_ss=dual(lam_ss),
        dual_R=dual(lam_R),
        dual_ab=dual(lam_ab),
        dual_ad=dual(lam_ad),
        pi1=quotient_group(L, lam_sc),
        pi1_ss=quotient_group(lam_ss, lam_sc),
        center_chars=quotient_group(dual(L), dual(lam_ad)),
        dcenter_chars=quotient_group(dual(lam_D), dual(lam_ad)),
        ab_lifts=ab_lifts,
        ss_lifts=ss_lifts,
    )
    return parts


def _intersect_with_coordinate_span(L: LatticeInAmbient, coords: range) -> LatticeInAmbient:
    m = L.ambient_dim
    if not len(coords):
        return LatticeInAmbient.zero(m)
    if len(coords) == m:
        return L
    # kernel of the complementary projection restricted to L
    other = [j for j in range(m) if j not in coords]
    B = L.basis
    comp = _scaled_int_rows([[b[j] for j in other] for b in B])
    ker = integer_left_kernel(comp)
    gens = [[sum((k[i] * B[i][j] for i in range(len(B))), Fraction(0)) for j in range(m)] for k in ker]
    return LatticeInAmbient.from_generators(m, gens)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str = ""

    def __str__(self):
        return f"{self.kind}({self.detail})" if self.detail else self.kind


def validate_datum(datum: ReductiveDatum) -> list[Violation]:
    """All violated datum invariants; empty for a valid datum."""
    out: list[Violation] = []
    m = datum.ambient_dim
    L = datum.cochar
    if L.ambient_dim != m:
        return [Violation("AmbientMismatch", f"lattice in Q^{L.ambient_dim}, expected Q^{m}")]
    if L.rank != m:
        out.append(Violation("RankDeficient", f"rank {L.rank} < {m}"))
    for i, row in enumerate(_coroot_rows(datum)):
        if not L.contains(row):
            out.append(Violation("MissingCoroot", f"coordinate {i}"))
    for b in L.basis:
        for idx, f in enumerate(datum.factors):
            block = [b[j] for j in datum.factor_slices[idx]]
            pairings = [sum((block[i] * f.cartan[i][j] for i in range(f.rank)), Fraction(0)) for j in range(f.rank)]
            if any(x.denominator != 1 for x in pairings):
                out.append(Violation("NotInCoweightLattice", f"generator {[str(x) for x in b]}"))
                break
    # Weyl stability through explicit reflection matrices
    for b in L.basis:
        for idx, f in enumerate(datum.factors):
            sl = datum.factor_slices[idx]
            block = [b[j] for j in sl]
            for node in range(1, f.rank + 1):
                S = f.reflection(node)
                image = [sum((S[r][c] * block[c] for c in range(f.rank)), Fraction(0)) for r in range(f.rank)]
                moved = list(b)
                for pos, x in zip(sl, image):
                    moved[pos] = x
                diff = [x - y for x, y in zip(moved, b)]
                if not L.contains(moved) or any(x.denominator != 1 for x in diff):
                    out.append(Violation("NotWeylStable", f"s_{node} on factor {f.type_tag}"))
    return out


# ---------------------------------------------------------------------------
# Elements of the fundamental group


@dataclass(frozen=True)
class Pi1Element:
    """A component class given by a lift ``d`` in the cocharacter lattice.

    ``delta_ss_class`` is the canonical representative of the semisimple
    image modulo coroots (fractional parts of coroot coordinates).
    ``order_in_pi1`` is 0 when the class has infinite order.
    """

    lift: tuple[Fraction, ...]
    delta_ss: tuple[Fraction, ...]
    delta_ss_class: tuple[Fraction, ...]
    delta_ab: tuple[Fraction, ...]
    order_in_pi1: int
    div_ab: int

    @property
    def ss_order(self) -> int:
        """Order of the semisimple image in ``pi_1(G^ss)``."""
        return lcm(*[x.denominator for x in self.delta_ss_class]) if self.delta_ss_class else 1

    @property
    def key(self) -> tuple:
        """Data independent of the chosen lift."""
        return (self.delta_ss_class, self.delta_ab, self.order_in_pi1, self.div_ab)


def pi1_class(datum: ReductiveDatum, lift: Sequence) -> Pi1Element:
    d = tuple(Fraction(x) for x in lift)
    if len(d) != datum.ambient_dim:
        raise NotInLattice(f"lift has length {len(d)}, expected {datum.ambient_dim}")
    if not datum.cochar.contains(d):
        raise NotInLattice(f"{[str(x) for x in d]} is not a cocharacter")
    parts = derive_parts(datum)
    dss = datum.ss_part(d)
    dab = datum.ab_part(d)
    s = datum.ss_dim
    cls = tuple(x - (x.numerator // x.denominator) for x in dss[:s])
    if any(dab):
        order = 0
        coords = parts.lambda_ab.coordinates(dab)
        div = 0
        for c in coords:
            div = gcd(div, c)
    else:
        order = lcm(*[x.denominator for x in cls]) if cls else 1
        div = 0
    return Pi1Element(d, dss, cls, dab, order, div)


def enumerate_pi1_ss_lifts(datum: ReductiveDatum) -> list[tuple[Fraction, ...]]:
    """One lift in the cocharacter lattice for every element of ``pi_1(G^ss)``."""
    parts = derive_parts(datum)
    gens = parts.pi1_ss.basis_map or ()
    orders = parts.pi1_ss.invariant_factors
    # lift each generator of lambda_ss / Q^vee through lambda_ss's lifts
    lifts_of_gens = []
    for gvec in gens:
        c = parts.lambda_ss.coordinates(gvec)
        lifted = [sum((ci * parts.ss_lifts[i][j] for i, ci in enumerate(c)), Fraction(0)) for j in range(datum.ambient_dim)]
        lifts_of_gens.append(lifted)
    out = [tuple(Fraction(0) for _ in range(datum.ambient_dim))]
    for gl, o in zip(lifts_of_gens, orders):
        nxt = []
        for base in out:
            for k in range(o):
                nxt.append(tuple(b + k * x for b, x in zip(base, gl)))
        out = nxt
    return out


# ---------------------------------------------------------------------------
# Custom datum files


def _parse_rational(tok: str) -> Fraction:
    tok = tok.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", tok):
        raise ParseError(f"not a rational number: {tok!r}")
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {tok!r}") from None


def datum_from_text(text: str) -> ReductiveDatum:
    """Parse a custom datum document.

    Format (``#`` starts a comment; values may span lines)::

        abelian_rank = 1
        factors = [A:3]
        cochar = [[1,0,0,0], [0,1,0,0], [0,0,1,0], [1/4,1/2,3/4,1]]

    ``cochar`` rows are generators in ambient coordinates: simple-coroot
    coordinates of each factor in order, then the abelian block.
    ``cochar_generators`` is accepted as a synonym of ``cochar``.
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    entries: dict[str, str] = {}
    keys = list(re.finditer(r"(\w+)\s*=\s*", body))
    for i, m in enumerate(keys):
        end = keys[i + 1].start() if i + 1 < len(keys) else len(body)
        entries[m.group(1)] = body[m.end():end].strip()
    if "cochar_generators" in entries and "cochar" not in entries:
        entries["cochar"] = entries.pop("cochar_generators")
    for key in ("abelian_rank", "factors", "cochar"):
        if key not in entries:
            raise ParseError(f"datum file lacks '{key}'")
    unknown = set(entries) - {"abelian_rank", "factors", "cochar", "label"}
    if unknown:
        raise ParseError(f"unknown keys in datum file: {sorted(unknown)}")
    try:
        a = int(entries["abelian_rank"])
    except ValueError:
        raise ParseError("abelian_rank must be an integer") from None
    fs = entries["factors"].strip()
    if not (fs.startswith("[") and fs.endswith("]")):
        raise ParseError("factors must be a bracketed list")
    tags = [t.strip().strip("'\"") for t in fs[1:-1].split(",") if t.strip()]
    try:
        tables = [simple_factor_table(t.replace(":", "")) for t in tags]
    except UnsupportedType as exc:
        raise ParseError(str(exc)) from None
    mat = entries["cochar"].strip()
    rows = re.findall(r"\[([^\[\]]*)\]", mat)
    if not rows:
        raise ParseError("cochar must be a list of rows")
    gens = [[_parse_rational(x) for x in row.split(",") if x.strip()] for row in rows]
    dim = sum(t.rank for t in tables) + a
    if any(len(r) != dim for r in gens):
        raise ParseError(f"every cochar row must have {dim} entries")
    label = entries.get("label", "").strip().strip("'\"") or "custom"
    datum = make_datum([t.type_tag for t in tables], a, gens, label)
    if rational_rank(gens) != dim:
        raise ParseError("cochar generators do not span the ambient space")
    return datum
