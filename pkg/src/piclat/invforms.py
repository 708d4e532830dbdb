"""Weyl-invariant symmetric bilinear forms and evaluation homomorphisms.

A Weyl-invariant symmetric form on the cocharacter lattice has no cross
terms between the abelian and semisimple blocks, and on each simple factor
it is a multiple of that factor's basic form.  So a form is a symmetric
matrix on the abelian block plus one multiplier per simple factor, and the
lattices of integral forms are solved for in those parameters.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactalg import (
    FGAbGroup,
    LatticeInAmbient,
    NotInLattice,
    congruence_lattice,
    image_in_finite_quotient,
    lcm,
    quotient_group,
)
from .rootdata import Pi1Element, ReductiveDatum, derive_parts

__all__ = [
    "FormKind",
    "EvVariant",
    "WInvForm",
    "FormLattice",
    "NonIntegralEvaluation",
    "NotWInvariantPullback",
    "form_lattice",
    "evaluate_form",
    "form_gram",
    "form_from_params",
    "form_params",
    "ev_hom",
    "EvResult",
    "coker_r_G",
    "pullback_form",
    "basic_form",
]


class NonIntegralEvaluation(ArithmeticError):
    pass


class NotWInvariantPullback(ValueError):
    pass


class FormKind(enum.Enum):
    FULL = "full"
    FULL_EVEN = "full-even"
    D_EVEN = "derived-even"
    PAIR_EVEN = "pair-even"
    PAIR_SC_EVEN = "pair-sc-even"
    SC_EVEN = "sc-even"

    @property
    def has_abelian_block(self) -> bool:
        return self in (FormKind.FULL, FormKind.FULL_EVEN, FormKind.D_EVEN)


class EvVariant(enum.Enum):
    EV = "ev"
    EV_TILDE = "ev-tilde"


@dataclass(frozen=True)
class WInvForm:
    """``b_ab`` on the abelian block (ambient coordinates) plus multipliers.

    ``grams`` are the basic Gram matrices of the simple factors, kept so the
    form can be evaluated without its datum.
    """

    b_ab: tuple[tuple[Fraction, ...], ...]
    alpha: tuple[Fraction, ...]
    grams: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def ss_dim(self) -> int:
        return sum(len(g) for g in self.grams)

    @property
    def ambient_dim(self) -> int:
        return self.ss_dim + len(self.b_ab)

    def __add__(self, other: "WInvForm") -> "WInvForm":
        return WInvForm(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.b_ab, other.b_ab)),
            tuple(a + b for a, b in zip(self.alpha, other.alpha)),
            self.grams,
        )

    def scale(self, c) -> "WInvForm":
        c = Fraction(c)
        return WInvForm(
            tuple(tuple(c * x for x in r) for r in self.b_ab), tuple(c * a for a in self.alpha), self.grams
        )

    def __str__(self):
        parts = []
        if self.b_ab:
            parts.append("b_ab=" + str([[str(x) for x in r] for r in self.b_ab]))
        if self.alpha:
            parts.append("alpha=" + str([str(a) for a in self.alpha]))
        return "WInvForm(" + ", ".join(parts) + ")"


def _zero_form(datum: ReductiveDatum) -> WInvForm:
    a = datum.abelian_rank
    return WInvForm(
        tuple(tuple(Fraction(0) for _ in range(a)) for _ in range(a)),
        tuple(Fraction(0) for _ in datum.factors),
        tuple(f.basic_gram for f in datum.factors),
    )


def basic_form(datum: ReductiveDatum, factor_index: int) -> WInvForm:
    """The basic form of one simple factor, zero elsewhere."""
    z = _zero_form(datum)
    alpha = tuple(Fraction(int(i == factor_index)) for i in range(len(datum.factors)))
    return WInvForm(z.b_ab, alpha, z.grams)


def evaluate_form(form: WInvForm, x: Sequence, y: Sequence) -> Fraction:
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    total = Fraction(0)
    pos = 0
    for a, G in zip(form.alpha, form.grams):
        l = len(G)
        if a:
            xs, ys = x[pos:pos + l], y[pos:pos + l]
            total += a * sum((xs[i] * G[i][j] * ys[j] for i in range(l) for j in range(l) if G[i][j]), Fraction(0))
        pos += l
    xa, ya = x[pos:], y[pos:]
    for i, row in enumerate(form.b_ab):
        if xa[i]:
            total += xa[i] * sum((c * v for c, v in zip(row, ya)), Fraction(0))
    return total


def form_gram(form: WInvForm) -> list[list[Fraction]]:
    """Full Gram matrix on the ambient coordinates."""
    m = form.ambient_dim
    M = [[Fraction(0)] * m for _ in range(m)]
    pos = 0
    for a, G in zip(form.alpha, form.grams):
        for i in range(len(G)):
            for j in range(len(G)):
                M[pos + i][pos + j] = a * G[i][j]
        pos += len(G)
    for i, row in enumerate(form.b_ab):
        for j, v in enumerate(row):
            M[pos + i][pos + j] = v
    return M


# ---------------------------------------------------------------------------
# Parameterization


def _ab_pairs(a: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(a) for j in range(i, a)]


def form_from_params(datum: ReductiveDatum, params: Sequence, with_ab: bool = True) -> WInvForm:
    """Form from a parameter vector ``(upper-triangular b_ab entries, alpha)``."""
    a = datum.abelian_rank
    p = [Fraction(x) for x in params]
    B = [[Fraction(0)] * a for _ in range(a)]
    k = 0
    if with_ab:
        for i, j in _ab_pairs(a):
            B[i][j] = B[j][i] = p[k]
            k += 1
    alpha = tuple(p[k:k + len(datum.factors)])
    return WInvForm(tuple(tuple(r) for r in B), alpha, tuple(f.basic_gram for f in datum.factors))


def form_params(form: WInvForm, with_ab: bool = True) -> tuple[Fraction, ...]:
    a = len(form.b_ab)
    head = tuple(form.b_ab[i][j] for i, j in _ab_pairs(a)) if with_ab else ()
    return head + tuple(form.alpha)


def _pair_functional(datum: ReductiveDatum, x, y, with_ab: bool) -> list[Fraction]:
    """Coefficients of ``p -> b_p(x, y)`` in the parameters."""
    s = datum.ss_dim
    coeffs = []
    if with_ab:
        xa, ya = x[s:], y[s:]
        for i, j in _ab_pairs(datum.abelian_rank):
            coeffs.append(xa[i] * ya[j] + (xa[j] * ya[i] if i != j else 0))
    for f, sl in zip(datum.factors, datum.factor_slices):
        G = f.basic_gram
        xs = [x[t] for t in sl]
        ys = [y[t] for t in sl]
        l = f.rank
        coeffs.append(sum((xs[i] * G[i][j] * ys[j] for i in range(l) for j in range(l) if G[i][j]), Fraction(0)))
    return coeffs


@dataclass(frozen=True)
class FormLattice:
    """A lattice of invariant forms and its parameter-space realization."""

    kind: FormKind
    basis: tuple[WInvForm, ...]
    param_lattice: LatticeInAmbient

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, form: WInvForm) -> bool:
        return self.param_lattice.contains(form_params(form, self.kind.has_abelian_block))


def _parameter_denominator(datum: ReductiveDatum) -> int:
    """``N`` such that every integral invariant form has parameters in ``Z/N``."""
    parts = derive_parts(datum)
    M = 1
    for i in datum.ab_slice:
        e = [Fraction(int(j == i)) for j in range(datum.ambient_dim)]
        rc = parts.lambda_R.rational_coordinates(e)
        M = lcm(M, *[c.denominator for c in rc]) if rc else M
    return lcm(M * M, 2)


@lru_cache(maxsize=4096)
def form_lattice(datum: ReductiveDatum, kind: FormKind) -> FormLattice:
    parts = derive_parts(datum)
    with_ab = kind.has_abelian_block
    a = datum.abelian_rank
    nparams = (a * (a + 1) // 2 if with_ab else 0) + len(datum.factors)
    N = _parameter_denominator(datum)
    base = LatticeInAmbient.standard(nparams).scaled(Fraction(1, N))

    def pairs_of(xs, ys, symmetric):
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                if symmetric and j < i:
                    continue
                yield x, y

    conds: list[tuple[list[Fraction], int]] = []
    seen: set = set()

    def add(x, y, modulus):
        ell = _pair_functional(datum, x, y, with_ab)
        key = (tuple(ell), modulus)
        if key not in seen and any(ell):
            seen.add(key)
            conds.append((ell, modulus))

    L = parts.lambda_T.basis
    D = parts.lambda_D.basis
    SS = parts.lambda_ss.basis
    SC = parts.lambda_sc.basis
    if with_ab:
        for x, y in pairs_of(L, L, True):
            add(x, y, 1)
        even_on = {FormKind.FULL: (), FormKind.FULL_EVEN: L, FormKind.D_EVEN: D}[kind]
    elif kind is FormKind.SC_EVEN:
        for x, y in pairs_of(SC, SC, True):
            add(x, y, 1)
        even_on = SC
    else:
        for x, y in pairs_of(D, SS, False):
            add(x, y, 1)
        even_on = D if kind is FormKind.PAIR_EVEN else SC
    for x in even_on:
        add(x, x, 2)
    lat = congruence_lattice(nparams, conds, base)
    basis = tuple(form_from_params(datum, p, with_ab) for p in lat.basis)
    return FormLattice(kind, basis, lat)


# ---------------------------------------------------------------------------
# Evaluation homomorphisms


@dataclass(frozen=True)
class EvResult:
    """Images (functionals on the ambient, one per basis form) and groups."""

    images: tuple[tuple[Fraction, ...], ...]
    subgroup: FGAbGroup
    cokernel: FGAbGroup


def _ss_functional(datum: ReductiveDatum, form: WInvForm, d: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Coefficients of ``y -> b(d_ss, y)`` restricted to the semisimple block."""
    m = datum.ambient_dim
    out = [Fraction(0)] * m
    for a, f, sl in zip(form.alpha, datum.factors, datum.factor_slices):
        if not a:
            continue
        G = f.basic_gram
        ds = [d[t] for t in sl]
        for j, pos in enumerate(sl):
            out[pos] = a * sum((ds[i] * G[i][j] for i in range(f.rank)), Fraction(0))
    return tuple(out)


def ev_hom(datum: ReductiveDatum, delta: Pi1Element, variant: EvVariant = EvVariant.EV) -> EvResult:
    """``b -> [b(d_ss, -)]`` from a pair-form lattice to ``Lambda*(T_D)/Lambda*(T_ad)``."""
    parts = derive_parts(datum)
    kind = FormKind.PAIR_EVEN if variant is EvVariant.EV else FormKind.PAIR_SC_EVEN
    fl = form_lattice(datum, kind)
    images = []
    for b in fl.basis:
        f = _ss_functional(datum, b, delta.lift)
        if not parts.dual_D.contains(f):
            raise NonIntegralEvaluation(f"b(d, -) is not integral on the derived cocharacters for {b}")
        images.append(f)
    sub, cok = image_in_finite_quotient((parts.dual_D, parts.dual_ad), images)
    return EvResult(tuple(images), sub, cok)


def coker_r_G(datum: ReductiveDatum) -> FGAbGroup:
    """Cokernel of pair-even forms inside sc-even pair forms."""
    big = form_lattice(datum, FormKind.PAIR_SC_EVEN).param_lattice
    small = form_lattice(datum, FormKind.PAIR_EVEN).param_lattice
    return quotient_group(big, small)


# ---------------------------------------------------------------------------
# Functoriality


def pullback_form(
    lambda_phi: Sequence[Sequence],
    form: WInvForm,
    source_datum: ReductiveDatum,
    target_datum: ReductiveDatum,
) -> WInvForm:
    """``x, y -> b(phi x, phi y)`` for ``phi`` given as a ``m_G x m_H`` matrix."""
    Lp = [[Fraction(x) for x in row] for row in lambda_phi]
    mG, mH = target_datum.ambient_dim, source_datum.ambient_dim
    if len(Lp) != mG or any(len(r) != mH for r in Lp):
        raise ValueError(f"lambda_phi must be {mG} x {mH}")
    for b in source_datum.cochar.basis:
        img = [sum((Lp[i][j] * b[j] for j in range(mH)), Fraction(0)) for i in range(mG)]
        if not target_datum.cochar.contains(img):
            raise NotInLattice("lambda_phi does not map cocharacters to cocharacters")
    G = form_gram(form)
    GL = [[sum((G[i][k] * Lp[k][j] for k in range(mG) if G[i][k]), Fraction(0)) for j in range(mH)] for i in range(mG)]
    H = [[sum((Lp[k][i] * GL[k][j] for k in range(mG) if Lp[k][i]), Fraction(0)) for j in range(mH)] for i in range(mH)]
    s = source_datum.ss_dim
    blocks = list(source_datum.factor_slices)
    owner = {}
    for bi, sl in enumerate(blocks):
        for t in sl:
            owner[t] = bi
    for i in range(mH):
        for j in range(mH):
            if H[i][j] and owner.get(i, "ab") != owner.get(j, "ab"):
                raise NotWInvariantPullback("pulled-back form has cross terms between blocks")
    alpha = []
    for f, sl in zip(source_datum.factors, blocks):
        sub = [[H[i][j] for j in sl] for i in sl]
        G0 = f.basic_gram
        c = sub[0][0] / G0[0][0]
        if any(sub[i][j] != c * G0[i][j] for i in range(f.rank) for j in range(f.rank)):
            raise NotWInvariantPullback(f"restriction to {f.type_tag} is not a multiple of the basic form")
        alpha.append(c)
    b_ab = tuple(tuple(H[i][j] for j in range(s, mH)) for i in range(s, mH))
    return WInvForm(b_ab, tuple(alpha), tuple(f.basic_gram for f in source_datum.factors))
