"""Engine-versus-closed-form sweeps shared by the CLI and the test suite.

Each sweep yields :class:`SweepRow` records.  A row holds one quantity for
one group and component, computed once by the generic engine and once by
:mod:`piclat.oracle7`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .exactalg import FGAbGroup
from .invforms import EvVariant, FormKind, coker_r_G, ev_hom, form_lattice
from .oracle7 import Family, FamilyParams, Quantity, oracle
from .rootdata import ReductiveDatum, build_named, enumerate_pi1_ss_lifts, pi1_class

__all__ = [
    "SweepRow",
    "GROUP_QUANTITIES",
    "engine_group_quantity",
    "type_a_cases",
    "type_bc_cases",
    "type_d_cases",
    "exceptional_cases",
    "fg_cases",
    "torus_cases",
    "run_cases",
    "sweep_family",
    "thread_count",
]

GROUP_QUANTITIES = (
    Quantity.MULTIPLIER_SC_EVEN,
    Quantity.MULTIPLIER_EVEN,
    Quantity.COKER_RG,
    Quantity.COKER_EV,
    Quantity.COKER_EV_TILDE,
)


@dataclass(frozen=True)
class SweepRow:
    family: str
    group: str
    delta: str
    quantity: str
    engine: object
    oracle: object

    @property
    def ok(self) -> bool:
        return self.engine == self.oracle


@dataclass(frozen=True)
class Case:
    """One group and component together with its closed-form parameters."""

    family: str
    spec: str
    lift: tuple[Fraction, ...]
    params: FamilyParams
    delta_label: str


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("PICLAT_THREADS", "1")))
    except ValueError:
        return 1


def _multiplier(datum: ReductiveDatum, kind: FormKind) -> Fraction:
    (b,) = form_lattice(datum, kind).basis
    return b.alpha[0]


def engine_group_quantity(datum: ReductiveDatum, lift, quantity: Quantity):
    """Generic-engine value of a simple-group quantity."""
    if quantity is Quantity.MULTIPLIER_SC_EVEN:
        return _multiplier(datum, FormKind.PAIR_SC_EVEN)
    if quantity is Quantity.MULTIPLIER_EVEN:
        return _multiplier(datum, FormKind.PAIR_EVEN)
    if quantity is Quantity.COKER_RG:
        return coker_r_G(datum)
    delta = pi1_class(datum, lift)
    variant = EvVariant.EV if quantity is Quantity.COKER_EV else EvVariant.EV_TILDE
    return ev_hom(datum, delta, variant).cokernel


def _fmt_lift(lift) -> str:
    return "(" + ",".join(str(x) for x in lift) + ")"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def type_a_cases(nmax: int = 12, nmin: int = 2) -> Iterator[Case]:
    for n in range(nmin, nmax + 1):
        for s in _divisors(n):
            for r in _divisors(s):
                spec = f"SL:{n}/mu:{r}" if r == s else f"C[mu:{s // r}](SL:{n}/mu:{r})"
                datum = build_named(spec)
                gen = datum.pi1_generators[0]
                for delta in range(s):
                    lift = tuple(delta * x for x in gen)
                    params = FamilyParams(Family.A, n=n, r=r, s=s, delta=delta)
                    yield Case("A", spec, lift, params, f"Delta={delta}")


def _ss_cases(family: str, spec: str, make_params: Callable[[object], FamilyParams]) -> Iterator[Case]:
    datum = build_named(spec)
    for lift in enumerate_pi1_ss_lifts(datum):
        el = pi1_class(datum, lift)
        yield Case(family, spec, lift, make_params(el), _fmt_lift(el.delta_ss_class))


def type_bc_cases(lmax: int = 8, lmin: int = 2) -> Iterator[Case]:
    for l in range(lmin, lmax + 1):
        groups = [
            (f"Spin:{2 * l + 1}", "Spin"),
            (f"SO:{2 * l + 1}", "SO"),
            (f"C[mu:2](Spin:{2 * l + 1})", "Spin"),
            (f"Sp:{2 * l}", "Sp"),
            (f"PSp:{2 * l}", "PSp"),
            (f"C[mu:2](Sp:{2 * l})", "Sp"),
        ]
        for spec, derived in groups:
            yield from _ss_cases(
                "BC",
                spec,
                lambda el, l=l, derived=derived: FamilyParams(
                    Family.BC, l=l, derived=derived, ss_nonzero=any(el.delta_ss_class)
                ),
            )


def type_d_cases(lmax: int = 10, lmin: int = 3) -> Iterator[Case]:
    for l in range(lmin, lmax + 1):
        m = 2 * l
        groups = [
            (f"Spin:{m}", "Spin", "Spin"),
            (f"SO:{m}", "SO", "SO"),
            (f"PSO:{m}", "PSO", "PSO"),
            (f"C[mu:2](Spin:{m})", "Spin", "SO"),
            (f"C[mu:2](SO:{m})", "SO", "PSO"),
        ]
        if l % 2:
            groups.append((f"C[mu:4](Spin:{m})", "Spin", "PSO"))
        else:
            groups += [
                (f"Omega+:{m}", "Omega", "Omega"),
                (f"Omega-:{m}", "Omega", "Omega"),
                (f"C[mu:2@{l}](Spin:{m})", "Spin", "Omega"),
                (f"C[mu:2@{l - 1}](Spin:{m})", "Spin", "Omega"),
                (f"C[mu:2](Omega+:{m})", "Omega", "PSO"),
                (f"C[mu:2@{l}](C[mu:2](Spin:{m}))", "Spin", "PSO"),
            ]
        for spec, derived, ss in groups:
            yield from _ss_cases(
                "D",
                spec,
                lambda el, l=l, derived=derived, ss=ss: FamilyParams(
                    Family.D, l=l, derived=derived, ss=ss, ss_order=el.ss_order
                ),
            )


def exceptional_cases() -> Iterator[Case]:
    groups = [
        ("E6sc", "E6sc", "E6sc"),
        ("E6ad", "E6ad", "E6ad"),
        ("C[mu:3](E6sc)", "E6sc", "E6ad"),
        ("E7sc", "E7sc", "E7sc"),
        ("E7ad", "E7ad", "E7ad"),
        ("C[mu:2](E7sc)", "E7sc", "E7ad"),
        ("E8", "E8", "E8"),
    ]
    for spec, derived, ss in groups:
        yield from _ss_cases(
            "E",
            spec,
            lambda el, derived=derived, ss=ss: FamilyParams(
                Family.E, derived=derived, ss=ss, ss_nonzero=any(el.delta_ss_class)
            ),
        )


def fg_cases() -> Iterator[Case]:
    for spec in ("F4", "G2"):
        yield from _ss_cases("FG", spec, lambda el, spec=spec: FamilyParams(Family.FG, derived=spec))


def _group_rows(case: Case, quantities=GROUP_QUANTITIES) -> list[SweepRow]:
    datum = build_named(case.spec)
    rows = []
    for q in quantities:
        eng = engine_group_quantity(datum, case.lift, q)
        orc = oracle(case.params, q)
        rows.append(SweepRow(case.family, case.spec, case.delta_label, q.value, eng, orc))
    return rows


def torus_cases(dims: Iterable[int], genera: Iterable[int], lifts_for_dim: Callable[[int], Iterable[tuple[int, ...]]]):
    for t in dims:
        for g in genera:
            for d in lifts_for_dim(t):
                yield FamilyParams(Family.TORUS, dim=t, g=g, d=tuple(d))


def _torus_rows(p: FamilyParams) -> list[SweepRow]:
    from .picard import torus_cokernels

    omega, gamma = torus_cokernels(p.dim, p.g, p.d)
    label = f"torus:{p.dim}"
    dl = f"g={p.g} d={_fmt_lift(p.d)}"
    return [
        SweepRow("tori", label, dl, Quantity.TORUS_COKER_OMEGA.value, omega, oracle(p, Quantity.TORUS_COKER_OMEGA)),
        SweepRow(
            "tori", label, dl, Quantity.TORUS_COKER_GAMMA_BAR.value, gamma, oracle(p, Quantity.TORUS_COKER_GAMMA_BAR)
        ),
    ]


def run_cases(cases: Iterable, threads: int | None = None) -> list[SweepRow]:
    """Evaluate cases (group cases or torus parameters), preserving order."""
    threads = thread_count() if threads is None else threads
    fn = lambda c: _torus_rows(c) if isinstance(c, FamilyParams) else _group_rows(c)
    cases = list(cases)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(fn, cases))
    else:
        chunks = [fn(c) for c in cases]
    return [row for chunk in chunks for row in chunk]


def sweep_family(family: str, **ranges) -> list[SweepRow]:
    """Rows of one family table; ``family`` is A, BC, D, E, FG or tori."""
    fam = family.upper()
    if fam == "A":
        return run_cases(type_a_cases(ranges.get("nmax", 12), ranges.get("nmin", 2)))
    if fam == "BC":
        return run_cases(type_bc_cases(ranges.get("lmax", 8), ranges.get("lmin", 2)))
    if fam == "D":
        return run_cases(type_d_cases(ranges.get("lmax", 10), ranges.get("lmin", 3)))
    if fam == "E":
        return run_cases(exceptional_cases())
    if fam == "FG":
        return run_cases(fg_cases())
    if fam in ("TORI", "TORUS"):
        import itertools

        dmax = ranges.get("dmax", 4)
        dims = ranges.get("dims") or [ranges.get("dim", 1)]
        genera = ranges.get("genera") or [ranges.get("g", 3)]
        box = lambda t: itertools.product(range(-dmax, dmax + 1), repeat=t)
        return run_cases(torus_cases(dims, genera, box))
    raise ValueError(f"unknown family {family!r}")
