"""Picard-type invariants of moduli stacks of G-bundles over marked curves.

Everything here is lattice bookkeeping on top of :mod:`piclat.invforms`.
A Neron-Severi class ``([chi], b)`` is stored through its canonical lift: the
character whose semisimple part equals ``b(d, -)`` there.  With that choice
the Neron-Severi group becomes a sublattice of ``Q^m + Z^r`` (character
coordinates plus coordinates in a basis of derived-even forms), and every
divisibility condition is a congruence on that lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Sequence

from .exactalg import (
    FGAbGroup,
    LatticeInAmbient,
    NotInLattice,
    congruence_lattice,
    image_in_finite_quotient,
    lattice_saturate,
    quotient_group,
    snf,
)
from .invforms import (
    EvVariant,
    FormKind,
    WInvForm,
    _pair_functional,
    _parameter_denominator,
    _zero_form,
    coker_r_G,
    evaluate_form,
    ev_hom,
    form_from_params,
    form_lattice,
    form_params,
    pullback_form,
)
from .rootdata import Pi1Element, ReductiveDatum, build_named, derive_parts, pi1_class

__all__ = [
    "GenusOutOfRange",
    "Genus0NotHere",
    "NeedsMarkedPoint",
    "FormNotDEven",
    "IncompatibleDelta",
    "NotInNS",
    "InconsistentResult",
    "MarkedGenus",
    "marked_genus",
    "NSClass",
    "NSLattice",
    "Piece",
    "PicardReport",
    "ImageResult",
    "CurveNS",
    "ClReport",
    "ns_lattice",
    "ns_rig_lattice",
    "ns_membership",
    "ns_same_class",
    "ns_pullback",
    "rpic_report",
    "rpic_rig_report",
    "im_omega_gamma",
    "coker_omega",
    "coker_gamma_bar",
    "curve_ns",
    "coker_res_bar",
    "genus0_report",
    "cl_report",
    "torus_cokernels",
]


class GenusOutOfRange(ValueError):
    pass


class Genus0NotHere(ValueError):
    pass


class NeedsMarkedPoint(ValueError):
    pass


class FormNotDEven(ValueError):
    pass


class IncompatibleDelta(ValueError):
    pass


class NotInNS(ValueError):
    pass


class InconsistentResult(AssertionError):
    """Two independent routes to the same group disagreed."""


END_JC_NOTE = "End(J_C) = Z assumed (very general curve)"
EXTENSION_NOTE = "extension between the graded pieces is not determined"


# ---------------------------------------------------------------------------
# Marked genus


@dataclass(frozen=True)
class MarkedGenus:
    g: int
    n: int

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError(f"genus and number of marks must be non-negative, got ({self.g}, {self.n})")

    def _need_positive(self):
        if self.g == 0:
            raise Genus0NotHere("the lattices H and H-hat are only defined for g >= 1")

    @property
    def h_hat_basis(self) -> tuple[tuple[int, ...], ...]:
        """Basis of ``Z + Z^n`` (g >= 2) or ``Z^n`` (g = 1)."""
        self._need_positive()
        dim = self.n + (1 if self.g >= 2 else 0)
        return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))

    @property
    def h_basis(self) -> tuple[tuple[int, ...], ...]:
        """Basis of the sublattice cut out by ``(2g-2) m + |zeta| = 0``."""
        self._need_positive()
        n = self.n
        if self.g >= 2:
            out = []
            if n:
                out.append((-1, 2 * self.g - 2) + (0,) * (n - 1))
            for i in range(n - 1):
                v = [0] * (n + 1)
                v[1 + i], v[2 + i] = 1, -1
                out.append(tuple(v))
            return tuple(out)
        out = []
        for i in range(n - 1):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            out.append(tuple(v))
        return tuple(out)

    @property
    def rank_h_hat(self) -> int:
        return len(self.h_hat_basis)

    @property
    def rank_h(self) -> int:
        return len(self.h_basis)

    @property
    def canonical_degree(self) -> int:
        return 2 * self.g - 2


def marked_genus(g: int, n: int) -> MarkedGenus:
    return MarkedGenus(g, n)


def _need_g(mg: MarkedGenus) -> None:
    if mg.g < 1:
        raise GenusOutOfRange(f"this quantity needs g >= 1, got g = {mg.g}")


def _as_mg(mg_or_g, n: int = 0) -> MarkedGenus:
    return mg_or_g if isinstance(mg_or_g, MarkedGenus) else MarkedGenus(int(mg_or_g), n)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class Piece:
    label: str
    value: object
    source: str


@dataclass(frozen=True)
class PicardReport:
    """A group (free rank plus torsion) with the pieces it was assembled from."""

    quantity: str
    free_rank: int
    torsion: FGAbGroup
    pieces: tuple[Piece, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def group(self) -> FGAbGroup:
        return FGAbGroup.from_cyclic_orders(list(self.torsion.invariant_factors) + [0] * self.free_rank)

    @property
    def theorem_tags(self) -> tuple[str, ...]:
        seen: list[str] = []
        for p in self.pieces:
            if p.source not in seen:
                seen.append(p.source)
        return tuple(seen)

    def piece(self, label: str):
        for p in self.pieces:
            if p.label == label:
                return p.value
        raise KeyError(label)


def _report(quantity: str, group: FGAbGroup, pieces=(), notes=()) -> PicardReport:
    torsion = FGAbGroup(group.torsion)
    return PicardReport(quantity, group.free_rank, torsion, tuple(pieces), tuple(notes))


# ---------------------------------------------------------------------------
# Helpers on forms and components


def _delta(datum: ReductiveDatum, delta) -> Pi1Element:
    if isinstance(delta, Pi1Element):
        return delta
    if isinstance(delta, int):
        gens = datum.pi1_generators
        if delta and not gens:
            raise IncompatibleDelta(f"{datum} has no preferred generator for the integer shorthand")
        base = gens[0] if gens else (0,) * datum.ambient_dim
        return pi1_class(datum, [delta * Fraction(x) for x in base])
    return pi1_class(datum, delta)


def _ss_functional(datum: ReductiveDatum, form: WInvForm, d: Sequence[Fraction]) -> list[Fraction]:
    """``y -> b(d_ss, y)`` as a vector supported on the semisimple block."""
    out = [Fraction(0)] * datum.ambient_dim
    for a, f, sl in zip(form.alpha, datum.factors, datum.factor_slices):
        if not a:
            continue
        ds = [d[t] for t in sl]
        G = f.basic_gram
        for j, pos in enumerate(sl):
            out[pos] = a * sum((ds[i] * G[i][j] for i in range(f.rank)), Fraction(0))
    return out


def _ab_functional(datum: ReductiveDatum, form: WInvForm, d: Sequence[Fraction]) -> list[Fraction]:
    """``y -> b(d_ab, y)`` as a vector supported on the abelian block."""
    out = [Fraction(0)] * datum.ambient_dim
    s = datum.ss_dim
    da = d[s:]
    for j in range(datum.abelian_rank):
        out[s + j] = sum((da[i] * form.b_ab[i][j] for i in range(datum.abelian_rank)), Fraction(0))
    return out


def _full_functional(datum: ReductiveDatum, form: WInvForm, d) -> list[Fraction]:
    return [x + y for x, y in zip(_ss_functional(datum, form, d), _ab_functional(datum, form, d))]


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def _ab_basis_with_lifts(datum: ReductiveDatum):
    parts = derive_parts(datum)
    return parts.lambda_ab.basis, parts.ab_lifts


# ---------------------------------------------------------------------------
# Neron-Severi lattices


@dataclass(frozen=True)
class NSClass:
    """``([chi], b)``: ``chi`` is any representative in the character lattice."""

    chi: tuple[Fraction, ...]
    form: WInvForm

    def __post_init__(self):
        object.__setattr__(self, "chi", tuple(Fraction(x) for x in self.chi))


@dataclass(frozen=True)
class NSLattice:
    """Neron-Severi lattice of one component, in ``(chi, q)`` coordinates.

    ``chi`` is the canonical lift (length ``m``) and ``q`` the coordinates of
    the form in the basis ``forms``.
    """

    datum: ReductiveDatum
    delta: Pi1Element
    forms: tuple[WInvForm, ...]
    lattice: LatticeInAmbient

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def to_class(self, vec: Sequence) -> NSClass:
        m = self.datum.ambient_dim
        chi = tuple(vec[:m])
        form = _combine(self.datum, self.forms, vec[m:])
        return NSClass(chi, form)

    @property
    def basis(self) -> tuple[NSClass, ...]:
        return tuple(self.to_class(v) for v in self.lattice.basis)

    def coordinates_of(self, cls: NSClass) -> tuple[Fraction, ...]:
        """Ambient coordinates ``(canonical chi, q)`` of a class."""
        q = _form_coords(self.datum, cls.form)
        chi = canonical_lift(self.datum, self.delta, cls)
        return tuple(chi) + tuple(q)


def _combine(datum: ReductiveDatum, forms: Sequence[WInvForm], q: Sequence) -> WInvForm:
    out = _zero_form(datum)
    for c, b in zip(q, forms):
        if c:
            out = out + b.scale(c)
    return out


def _form_coords(datum: ReductiveDatum, form: WInvForm) -> tuple[Fraction, ...]:
    """Coordinates in the derived-even basis (rational if the form is outside it)."""
    rc = form_lattice(datum, FormKind.D_EVEN).param_lattice.rational_coordinates(form_params(form))
    if rc is None:
        raise FormNotDEven(f"{form} is not in the span of the derived-even forms")
    return rc


def canonical_lift(datum: ReductiveDatum, delta, cls: NSClass) -> list[Fraction]:
    """The representative of ``[chi]`` agreeing with ``b(d, -)`` on the semisimple block."""
    delta = _delta(datum, delta)
    F = _ss_functional(datum, cls.form, delta.lift)
    s = datum.ss_dim
    return F[:s] + list(cls.chi[s:])


@lru_cache(maxsize=2048)
def _ns_lattice_cached(datum: ReductiveDatum, lift: tuple) -> NSLattice:
    delta = pi1_class(datum, lift)
    parts = derive_parts(datum)
    fl = form_lattice(datum, FormKind.D_EVEN)
    forms = fl.basis
    m, r = datum.ambient_dim, len(forms)
    s = datum.ss_dim
    gens = [tuple(v) + (Fraction(0),) * r for v in parts.dual_T.basis]
    gens += [(Fraction(0),) * m + tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
    big = LatticeInAmbient.from_generators(m + r, gens)
    cols = []
    for j, b in enumerate(forms):
        F = _ss_functional(datum, b, delta.lift)
        cols.append(F[:s] + [Fraction(0)] * datum.abelian_rank + [Fraction(int(i == j)) for i in range(r)])
    for i in datum.ab_slice:
        cols.append([Fraction(int(t == i)) for t in range(m + r)])
    rows = [list(r_) for r_ in zip(*cols)] if cols else []
    lat = lattice_saturate(big, rows) if cols else LatticeInAmbient.zero(m + r)
    return NSLattice(datum, delta, forms, lat)


def ns_lattice(datum: ReductiveDatum, delta) -> NSLattice:
    """Neron-Severi lattice of ``Bun_G^delta``; rank ``s + C(s+1, 2) + k``."""
    return _ns_lattice_cached(datum, _delta(datum, delta).lift)


@lru_cache(maxsize=2048)
def _ns_rig_cached(datum: ReductiveDatum, lift: tuple):
    delta = pi1_class(datum, lift)
    parts = derive_parts(datum)
    forms = form_lattice(datum, FormKind.D_EVEN).basis
    r = len(forms)
    Fs = [_ss_functional(datum, b, delta.lift) for b in forms]
    conds = [([_dot(F, w) for F in Fs], 1) for w in parts.lambda_ad.basis]
    return forms, congruence_lattice(r, conds)


def ns_rig_lattice(datum: ReductiveDatum, delta) -> tuple[tuple[WInvForm, ...], LatticeInAmbient]:
    """Neron-Severi lattice of the rigidification, in coordinates of the derived-even basis."""
    return _ns_rig_cached(datum, _delta(datum, delta).lift)


def ns_membership(datum: ReductiveDatum, delta, cls: NSClass, rigidified: bool = False, strict: bool = False) -> bool:
    """Whether ``cls`` lies in the (rigidified) Neron-Severi group.

    A form outside the derived-even lattice is not a member; with
    ``strict=True`` that case raises :class:`FormNotDEven` instead.
    """
    delta = _delta(datum, delta)
    parts = derive_parts(datum)
    if not form_lattice(datum, FormKind.D_EVEN).contains(cls.form):
        if strict:
            raise FormNotDEven(f"{cls.form} is not integral and derived-even on the cocharacters")
        return False
    F = _ss_functional(datum, cls.form, delta.lift)
    if rigidified:
        return parts.dual_ad.contains(F)
    chi = list(cls.chi)
    if not parts.dual_T.contains(chi):
        return False
    s = datum.ss_dim
    diff = [chi[i] - F[i] if i < s else Fraction(0) for i in range(datum.ambient_dim)]
    return parts.dual_ad.contains(diff)


def ns_same_class(datum: ReductiveDatum, a: NSClass, b: NSClass) -> bool:
    if a.form != b.form:
        return False
    diff = [x - y for x, y in zip(a.chi, b.chi)]
    return derive_parts(datum).dual_ad.contains(diff)


def ns_pullback(
    lambda_phi: Sequence[Sequence],
    source: ReductiveDatum,
    target: ReductiveDatum,
    delta_source,
    cls: NSClass,
    delta_target=None,
) -> NSClass:
    """Pull a Neron-Severi class back along ``phi: H -> G``.

    ``lambda_phi`` is the ``m_G x m_H`` matrix of ``phi`` on cocharacters.
    The character is first replaced by its lift agreeing with
    ``b(phi(e), -)`` on the derived part, then both entries are pulled back.
    """
    eps = _delta(source, delta_source)
    Lp = [[Fraction(x) for x in row] for row in lambda_phi]
    d = [sum((Lp[i][j] * eps.lift[j] for j in range(source.ambient_dim)), Fraction(0)) for i in range(target.ambient_dim)]
    if not target.cochar.contains(d):
        raise NotInLattice("lambda_phi does not map the source lift to a cocharacter")
    if delta_target is not None:
        dt = _delta(target, delta_target)
        diff = [x - y for x, y in zip(d, dt.lift)]
        if not derive_parts(target).lambda_sc.contains(diff):
            raise IncompatibleDelta("phi does not send the source component to the target component")
    dcls = pi1_class(target, d)
    if not ns_membership(target, dcls, cls):
        raise NotInNS("class is not in the Neron-Severi group of the target component")
    chi = canonical_lift(target, dcls, cls)
    chi_h = tuple(
        sum((Lp[i][j] * chi[i] for i in range(target.ambient_dim)), Fraction(0)) for j in range(source.ambient_dim)
    )
    return NSClass(chi_h, pullback_form(Lp, cls.form, source, target))


# ---------------------------------------------------------------------------
# Relative Picard groups


def rpic_report(datum: ReductiveDatum, mg: MarkedGenus, delta=0) -> PicardReport:
    """Relative Picard group: free of rank ``s * rank(H-hat) + rank(derived-even forms)``."""
    _need_g(mg)
    _delta(datum, delta)
    s = datum.abelian_rank
    dev = form_lattice(datum, FormKind.D_EVEN).rank
    pair = form_lattice(datum, FormKind.PAIR_EVEN).rank
    tautological = s * mg.rank_h_hat
    pieces = [
        Piece("Lambda*(G^ab) (x) H-hat", tautological, "rpic-forms-sequence"),
        Piece("derived-even invariant forms", dev, "rpic-forms-sequence"),
        Piece("RPic of G^ab", s * mg.rank_h_hat + comb(s + 1, 2), "rpic-abelian-sequence"),
        Piece("pair-even forms (upsilon quotient)", pair, "rpic-abelian-sequence"),
    ]
    return _report("rpic", FGAbGroup.from_cyclic_orders([0] * (tautological + dev)), pieces)


def rpic_rig_report(datum: ReductiveDatum, mg: MarkedGenus, delta=0) -> PicardReport:
    """Relative Picard group of the rigidification."""
    _need_g(mg)
    forms, rig = ns_rig_lattice(datum, delta)
    s = datum.abelian_rank
    pieces = [
        Piece("Lambda*(G^ab) (x) H", s * mg.rank_h, "rigidified-sequence"),
        Piece("NS(rig) rank", rig.rank, "rigidified-sequence"),
    ]
    return _report("rpic-rig", FGAbGroup.from_cyclic_orders([0] * (s * mg.rank_h + rig.rank)), pieces)


# ---------------------------------------------------------------------------
# Images and cokernels


@dataclass(frozen=True)
class ImageResult:
    """A sublattice of a Neron-Severi lattice and its index data."""

    ambient: LatticeInAmbient
    image: LatticeInAmbient
    quotient: FGAbGroup

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Factors of the inclusion padded with 1s to the ambient rank."""
        q = self.quotient.invariant_factors
        return (1,) * (self.ambient.rank - len(q)) + tuple(q)

    def contains(self, vec: Sequence) -> bool:
        return self.image.contains(vec)


def _ab_conditions(datum: ReductiveDatum, forms, delta: Pi1Element, quad: int, with_chi: bool):
    """Functionals ``x -> psi(x) + quad * b(x, x)`` for a basis of ``Lambda(G^ab)``.

    ``psi`` is the character of ``G^ab`` that ``[chi - b(d, -)]`` (or
    ``[b(d, -)]`` on the rigidification) comes from.
    """
    m = datum.ambient_dim
    s = datum.ss_dim
    _, lifts = _ab_basis_with_lifts(datum)
    conds = []
    for xt in lifts:
        coeffs = []
        if with_chi:
            coeffs += [xt[i] if i >= s else Fraction(0) for i in range(m)]
        sign = -1 if with_chi else 1
        for b in forms:
            psi_part = sign * _dot(_ab_functional(datum, b, delta.lift), xt)
            coeffs.append(psi_part + quad * evaluate_form(b, xt, xt))
        conds.append(coeffs)
    return conds


def im_omega_gamma(datum: ReductiveDatum, mg: MarkedGenus, delta=0, rigidified: bool = False) -> ImageResult:
    """Image of ``omega + gamma`` in NS (or of ``gamma-bar`` in NS(rig))."""
    _need_g(mg)
    delta = _delta(datum, delta)
    if rigidified:
        forms, amb = ns_rig_lattice(datum, delta)
    else:
        nsl = ns_lattice(datum, delta)
        forms, amb = nsl.forms, nsl.lattice
    if mg.n >= 1:
        return ImageResult(amb, amb, FGAbGroup())
    c = mg.canonical_degree
    conds = [(ell, c) for ell in _ab_conditions(datum, forms, delta, mg.g - 1, not rigidified)]
    img = congruence_lattice(amb.ambient_dim, conds, amb)
    return ImageResult(amb, img, quotient_group(amb, img))


def _boundary_images(datum: ReductiveDatum, mg: MarkedGenus, delta: Pi1Element):
    forms, rig = ns_rig_lattice(datum, delta)
    conds = _ab_conditions(datum, forms, delta, 1 - mg.g, False)
    return [[_dot(ell, q) for ell in conds] for q in rig.basis]


def coker_gamma_bar(datum: ReductiveDatum, g, delta=0) -> FGAbGroup:
    """``coker(gamma-bar)`` at ``n = 0``, as the image of the boundary map."""
    mg = _as_mg(g, 0)
    _need_g(mg)
    delta = _delta(datum, delta)
    a = len(derive_parts(datum).lambda_ab.basis)
    if a == 0:
        return FGAbGroup()
    c = mg.canonical_degree
    std = LatticeInAmbient.standard(a)
    imgs = _boundary_images(datum, mg, delta)
    sub, _ = image_in_finite_quotient((std, std.scaled(c)), imgs) if imgs else (FGAbGroup(), None)
    direct = im_omega_gamma(datum, mg, delta, rigidified=True).quotient
    if sub != direct:
        raise InconsistentResult(f"boundary image {sub} differs from NS(rig)/Im {direct}")
    return sub


def _weight_generators(datum: ReductiveDatum, mg: MarkedGenus, delta: Pi1Element) -> list[list[Fraction]]:
    parts = derive_parts(datum)
    gens = [_full_functional(datum, b, delta.lift) for b in form_lattice(datum, FormKind.FULL_EVEN).basis]
    es = parts.dual_ab.basis
    dd = [_dot(e, delta.lift) for e in es]
    g = mg.g
    for i, e in enumerate(es):
        if mg.n >= 1:
            gens.append(list(e))
        if g >= 2:
            gens.append([2 * dd[i] * x for x in e])
        gens.append([(dd[i] + 1 - g) * x for x in e])
        for k in range(i + 1, len(es)):
            gens.append([dd[k] * x + dd[i] * y for x, y in zip(e, es[k])])
    return gens


def coker_omega(datum: ReductiveDatum, mg: MarkedGenus, delta=0) -> PicardReport:
    """Cokernel of the weight map, computed from generators of its image."""
    _need_g(mg)
    delta = _delta(datum, delta)
    parts = derive_parts(datum)
    _, cok = image_in_finite_quotient((parts.dual_T, parts.dual_ad), _weight_generators(datum, mg, delta))
    ev = ev_hom(datum, delta, EvVariant.EV).cokernel
    pieces = [Piece("coker(ev)", ev, "weight-cokernel-sequence")]
    notes = []
    if mg.n >= 1:
        if cok != ev:
            raise InconsistentResult(f"coker(omega) = {cok} but coker(ev) = {ev} with marked points")
    else:
        s = len(parts.lambda_ab.basis)
        hom = FGAbGroup.from_cyclic_orders([mg.canonical_degree] * s)
        gb = coker_gamma_bar(datum, mg, delta)
        pieces += [
            Piece("coker(gamma-bar)", gb, "weight-cokernel-sequence"),
            Piece("Hom(Lambda(G^ab), Z/(2g-2))", hom, "weight-cokernel-sequence"),
        ]
        if mg.g >= 2 and cok.order * gb.order != hom.order * ev.order:
            raise InconsistentResult("order identity for coker(omega) fails")
        if not hom.is_trivial and not ev.is_trivial:
            notes.append(EXTENSION_NOTE)
    return _report("coker-omega", cok, pieces, notes)


# ---------------------------------------------------------------------------
# Fixed curve


@dataclass(frozen=True)
class CurveNS:
    """Neron-Severi lattice of ``Bun_G^delta(C)`` for a very general curve.

    Coordinates are ``(l_R, b_R, alpha)``: ``l_R`` on the abelian block
    (length ``s``), the upper-triangular entries of ``b_R`` and one
    multiplier per simple factor.
    """

    datum: ReductiveDatum
    delta: Pi1Element
    lattice: LatticeInAmbient
    notes: tuple[str, ...] = (END_JC_NOTE,)

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def vector(self, l_R: Sequence, b_R: Sequence[Sequence], alpha: Sequence) -> tuple[Fraction, ...]:
        a = self.datum.abelian_rank
        ab = [Fraction(b_R[i][j]) for i in range(a) for j in range(i, a)]
        return tuple(Fraction(x) for x in l_R) + tuple(ab) + tuple(Fraction(x) for x in alpha)

    def contains(self, l_R, b_R, alpha) -> bool:
        a = self.datum.abelian_rank
        if any(Fraction(b_R[i][j]) != Fraction(b_R[j][i]) for i in range(a) for j in range(a)):
            return False
        return self.lattice.contains(self.vector(l_R, b_R, alpha))

    def res_ns(self, cls: NSClass) -> tuple[tuple[Fraction, ...], tuple[tuple[Fraction, ...], ...], tuple[Fraction, ...]]:
        """Restriction of ``([chi], b)`` to the fixed curve."""
        s = self.datum.ss_dim
        return tuple(cls.chi[s:]), cls.form.b_ab, cls.form.alpha

    def res_vector(self, cls: NSClass) -> tuple[Fraction, ...]:
        return self.vector(*self.res_ns(cls))


def _curve_lattice(datum: ReductiveDatum, delta: Pi1Element, with_b_R: bool) -> LatticeInAmbient:
    parts = derive_parts(datum)
    s, a, k = datum.ss_dim, datum.abelian_rank, len(datum.factors)
    nab = a * (a + 1) // 2 if with_b_R else 0
    P = a + nab + k
    N = _parameter_denominator(datum)
    gens = [tuple(v[s:]) + (Fraction(0),) * (nab + k) for v in parts.dual_R.basis]
    gens += [(Fraction(0),) * a + tuple(Fraction(int(i == j), N) for j in range(nab + k)) for i in range(nab + k)]
    if not gens:
        return LatticeInAmbient.zero(P)
    base = LatticeInAmbient.from_generators(P, gens)
    unit_alpha = [form_from_params(datum, [Fraction(int(i == j)) for j in range(k)], False) for i in range(k)]
    conds = []
    for lam in parts.lambda_T.basis:
        ell = list(lam[s:]) + [Fraction(0)] * nab
        ell += [_dot(_ss_functional(datum, b, delta.lift), lam) for b in unit_alpha]
        conds.append((ell, 1))
    m = datum.ambient_dim
    coroots = [[Fraction(int(t == i)) for t in range(m)] for i in range(s)]
    # integrality on all cocharacter pairs on a curve, on coroot pairs in genus 0
    L = parts.lambda_T.basis if with_b_R else coroots
    for i, x in enumerate(L):
        for y in L[i:]:
            conds.append(([Fraction(0)] * a + _pair_functional(datum, x, y, with_b_R), 1))
    for e in coroots:
        conds.append(([Fraction(0)] * a + _pair_functional(datum, e, e, with_b_R), 2))
    return congruence_lattice(P, conds, base)


def curve_ns(datum: ReductiveDatum, delta, g: int = 1) -> CurveNS:
    """Neron-Severi lattice of ``Bun_G^delta(C)`` with ``End(J_C) = Z``."""
    _need_g(_as_mg(g))
    delta = _delta(datum, delta)
    return CurveNS(datum, delta, _curve_lattice(datum, delta, True))


def coker_res_bar(datum: ReductiveDatum, mg: MarkedGenus, delta=0) -> PicardReport:
    """Cokernel of restriction to a very general curve, with its two graded pieces."""
    _need_g(mg)
    delta = _delta(datum, delta)
    cns = curve_ns(datum, delta, mg.g)
    nsl = ns_lattice(datum, delta)
    img = im_omega_gamma(datum, mg, delta).image
    res_imgs = [cns.res_vector(nsl.to_class(v)) for v in img.basis]
    _, total = image_in_finite_quotient((cns.lattice, LatticeInAmbient.zero(cns.lattice.ambient_dim)), res_imgs)
    parts = derive_parts(datum)
    s = len(parts.lambda_ab.basis)
    if s:
        torus = build_named(f"torus:{s}")
        dab = parts.lambda_ab.coordinates(delta.delta_ab)
        first = im_omega_gamma(torus, mg, list(dab)).quotient
    else:
        first = FGAbGroup()
    rg = coker_r_G(datum)
    if total.order and first.order * rg.order != total.order:
        raise InconsistentResult(f"|coker(res)| = {total.order} but pieces give {first.order} * {rg.order}")
    notes = [END_JC_NOTE]
    if not first.is_trivial and not rg.is_trivial:
        notes.append(EXTENSION_NOTE)
    pieces = [
        Piece("coker(omega_ab + gamma_ab)", first, "restriction-cokernel-sequence"),
        Piece("coker(r_G)", rg, "restriction-cokernel-sequence"),
    ]
    return _report("coker-res-bar", total, pieces, notes)


# ---------------------------------------------------------------------------
# Genus zero


def genus0_report(datum: ReductiveDatum, n: int, delta=0) -> PicardReport:
    """Relative Picard group and ``coker(omega)`` for ``g = 0, n >= 1``."""
    if n < 1:
        raise NeedsMarkedPoint("genus 0 needs at least one marked point")
    delta = _delta(datum, delta)
    parts = derive_parts(datum)
    rpic = _curve_lattice(datum, delta, False)
    sc = form_lattice(datum, FormKind.SC_EVEN)
    Fs = [_ss_functional(datum, b, delta.lift) for b in sc.basis]
    conds = [([_dot(F, y) for F in Fs], 1) for y in parts.lambda_D.basis]
    constrained = congruence_lattice(sc.rank, conds)
    imgs = []
    for q in constrained.basis:
        v = [Fraction(0)] * datum.ambient_dim
        for c, F in zip(q, Fs):
            v = [x + c * y for x, y in zip(v, F)]
        imgs.append(v)
    _, cok = image_in_finite_quotient((parts.dual_D, parts.dual_ad), imgs)
    pieces = [
        Piece("coker(omega)", cok, "genus-zero-weight"),
        Piece("constrained sc-even forms", constrained.rank, "genus-zero-weight"),
    ]
    return _report("genus0-rpic", FGAbGroup.from_cyclic_orders([0] * rpic.rank), pieces)


# ---------------------------------------------------------------------------
# Class groups of moduli spaces


@dataclass(frozen=True)
class ClReport:
    """Whether ``Cl(M^{delta,ss}) = Pic(rigidification)`` is available.

    ``applicable`` is ``None`` when a caveat blocks a decision.
    """

    applicable: bool | None
    case: str | None
    reasons: tuple[str, ...]
    caveats: tuple[str, ...]
    moduli_space_known: tuple[str, ...]
    relative_part: PicardReport | None
    out_of_scope: tuple[str, ...] = ("Pic(M_{g,n}) contribution",)


def _is_gl(datum: ReductiveDatum) -> bool:
    if datum.abelian_rank != 1 or len(datum.factors) != 1 or datum.factors[0].family != "A":
        return False
    n = datum.factors[0].rank + 1
    return datum == build_named(f"GL:{n}")


def cl_report(datum: ReductiveDatum, mg: MarkedGenus, delta=0, characteristic: int = 0) -> ClReport:
    g, n = mg.g, mg.n
    reasons, caveats, known = [], [], []
    if datum.is_torus:
        known.append("torus (coarse moduli space)")
    if _is_gl(datum):
        known.append("GL_r")
    if characteristic == 0 and g >= 2 and n == 0:
        known.append("characteristic 0, g >= 2, n = 0")
    if characteristic == 0 and n > 2 * g + 2:
        known.append("characteristic 0, M_{g,n} a variety")
    applicable: bool | None
    case = None
    if g + n < 3:
        applicable = False
        reasons.append(f"needs g + n >= 3, got {g + n}")
    elif datum.is_torus:
        applicable, case = True, "torus"
    elif characteristic > 0:
        applicable = g >= 4
        case = "positive characteristic" if applicable else None
        if not applicable:
            reasons.append(f"non-torus in positive characteristic needs g >= 4, got g = {g}")
    elif g >= 3:
        applicable, case = True, "characteristic 0"
    elif g == 2:
        applicable, case = None, "characteristic 0"
        caveats.append("g = 2 excludes groups with a non-trivial homomorphism to PGL_2 (not decided here)")
    else:
        applicable = False
        reasons.append(f"non-torus in characteristic 0 needs g >= 2, got g = {g}")
    if applicable is not False and not known:
        caveats.append("existence of an adequate moduli space is assumed")
    relative = rpic_rig_report(datum, mg, delta) if applicable is not False and g >= 1 else None
    return ClReport(applicable, case, tuple(reasons), tuple(caveats), tuple(known), relative)


# ---------------------------------------------------------------------------
# Tori


def _torus_generators(g: int, d: Sequence[int]) -> list[list[int]]:
    """Integer generators of ``Im(omega)`` for a split torus with no marks.

    The two diagonal generators ``(d_i + 1 - g) e_i`` and ``2 d_i e_i`` are
    merged into their gcd multiple of ``e_i``.
    """
    t = len(d)
    rows = []
    for i in range(t):
        e = [0] * t
        e[i] = gcd(d[i] + 1 - g, 2 * d[i])
        rows.append(e)
        for k in range(i + 1, t):
            e = [0] * t
            e[i], e[k] = d[k], d[i]
            rows.append(e)
    return rows


def torus_cokernels(dim: int, g: int, d: Sequence[int], generic: bool = False) -> tuple[FGAbGroup, FGAbGroup]:
    """``(coker(omega), coker(gamma-bar))`` for a split torus at ``n = 0``.

    The default route works with plain integers.  For a torus the image of
    ``omega`` equals the lattice ``S`` spanned by the boundary images and
    ``(2g-2) Z^t``, and ``coker(gamma-bar) = S / (2g-2) Z^t``; so one Smith
    form gives both groups.
    ``generic=True`` runs the general engine instead.
    """
    if len(d) != dim:
        raise ValueError(f"lift has length {len(d)}, expected {dim}")
    if g < 1:
        raise GenusOutOfRange(f"this quantity needs g >= 1, got g = {g}")
    if generic:
        datum = build_named(f"torus:{dim}")
        mg = MarkedGenus(g, 0)
        delta = pi1_class(datum, list(d))
        return coker_omega(datum, mg, delta).group, coker_gamma_bar(datum, mg, delta)
    c = 2 * g - 2
    d = [int(x) for x in d]
    rows = _torus_generators(g, d)
    factors = snf(rows, transforms=False).factors
    a = list(factors) + [0] * (dim - len(factors))
    omega = FGAbGroup.from_cyclic_orders(a)
    if c == 0:
        # g = 1: the boundary map lands in Z^t and its image is the same span
        return omega, FGAbGroup.from_cyclic_orders([0] * sum(1 for x in a if x))
    return omega, FGAbGroup.from_cyclic_orders([c // x for x in a])
