"""Verification suites behind ``piclat verify`` and the acceptance tests.

Every suite returns a :class:`SuiteResult` with pass/fail counts, the first
few failure descriptions and its wall time.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .invforms import EvVariant, ev_hom
from .oracle7 import Family, FamilyParams, Quantity, bruteforce_invariant_forms, oracle
from .picard import (
    MarkedGenus,
    NSClass,
    coker_gamma_bar,
    coker_omega,
    im_omega_gamma,
    ns_lattice,
    ns_membership,
    ns_pullback,
    ns_rig_lattice,
    ns_same_class,
    rpic_report,
    torus_cokernels,
)
from .rootdata import build_named, enumerate_pi1_ss_lifts, pi1_class, simple_factor_table
from .sweeps import sweep_family

__all__ = ["SuiteResult", "MIXED_SPECS", "SUITES", "SUITE_GROUPS", "run_suite", "mixed_components"]

# tori times simple factors, central twists and plain reductive groups
MIXED_SPECS = (
    "GL:2",
    "GL:3",
    "GL:4",
    "torus:1 x SL:2",
    "torus:2 x PGL:3",
    "torus:1 x SO:7",
    "torus:1 x Spin:8",
    "C[mu:2](Spin:7)",
    "C[mu:2](Sp:4)",
    "C[mu:3](E6sc)",
    "C[mu:2](E7sc)",
    "torus:1 x G2",
    "torus:2 x Sp:4",
    "C[mu:2](SL:4)",
    "C[mu:2](SL:4/mu:2)",
    "torus:1 x PSO:8",
    "C[mu:2](SO:8)",
    "torus:3",
    "torus:1 x F4",
    "C[mu:2](Omega+:8)",
)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def check(self, cond: bool, what) -> None:
        """Count one check; ``what`` is a message or a callable producing it."""
        if cond:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(what() if callable(what) else what)


def _rows_suite(name: str, family: str, **ranges) -> SuiteResult:
    res = SuiteResult(name)
    for row in sweep_family(family, **ranges):
        res.check(row.ok, f"{row.group} {row.delta} {row.quantity}: engine {row.engine} oracle {row.oracle}")
    return res


def suite_type_a() -> SuiteResult:
    return _rows_suite("type-a", "A", nmax=12)


def suite_type_bc() -> SuiteResult:
    return _rows_suite("type-bc", "BC", lmax=8)


def suite_type_d() -> SuiteResult:
    return _rows_suite("type-d", "D", lmax=10)


def suite_exceptional() -> SuiteResult:
    res = _rows_suite("exceptional", "E")
    fg = _rows_suite("exceptional", "FG")
    res.passed += fg.passed
    res.failed += fg.failed
    res.failures += fg.failures
    return res


def suite_tori(dmax: int = 20, genera=range(1, 7), dims=(1, 2, 3)) -> SuiteResult:
    res = SuiteResult("tori")
    for t in dims:
        for g in genera:
            for d in itertools.product(range(-dmax, dmax + 1), repeat=t):
                p = FamilyParams(Family.TORUS, dim=t, g=g, d=d)
                omega, gamma = torus_cokernels(t, g, d)
                ok = omega == oracle(p, Quantity.TORUS_COKER_OMEGA) and gamma == oracle(p, Quantity.TORUS_COKER_GAMMA_BAR)
                res.check(ok, lambda: f"torus:{t} g={g} d={d}: got ({omega}, {gamma})")
    return res


def mixed_components(spec: str, limit: int = 4):
    """A few components of ``spec``: semisimple classes shifted along the abelian part."""
    datum = build_named(spec)
    gens = datum.pi1_generators
    out = []
    for lift in enumerate_pi1_ss_lifts(datum)[:limit]:
        for mult in (0, 1, 3):
            if mult and not (gens and datum.abelian_rank):
                continue
            v = [x + mult * y for x, y in zip(lift, gens[0])] if mult else list(lift)
            out.append(pi1_class(datum, v))
    return datum, out


def suite_image_factors(genera=(2, 3, 5)) -> SuiteResult:
    res = SuiteResult("image-factors")
    for spec in MIXED_SPECS:
        datum, comps = mixed_components(spec)
        s = datum.abelian_rank
        for delta in comps:
            for g in genera:
                im = im_omega_gamma(datum, MarkedGenus(g, 0), delta)
                expected = (1,) * (im.ambient.rank - s) + (2 * g - 2,) * s
                res.check(im.invariant_factors == expected, f"{spec} {delta.lift} g={g}: {im.invariant_factors}")
    return res


def suite_order_identities(genera=(2, 3, 5)) -> SuiteResult:
    res = SuiteResult("order-identities")
    for spec in MIXED_SPECS:
        datum, comps = mixed_components(spec)
        s = datum.abelian_rank
        for delta in comps:
            ev = ev_hom(datum, delta, EvVariant.EV).cokernel
            for g in genera:
                mg = MarkedGenus(g, 0)
                om = coker_omega(datum, mg, delta).group
                gb = coker_gamma_bar(datum, mg, delta)
                res.check(
                    om.order * gb.order == (2 * g - 2) ** s * ev.order,
                    f"{spec} {delta.lift} g={g}: |{om}|*|{gb}| vs (2g-2)^{s}*|{ev}|",
                )
            for n in (1, 2):
                om = coker_omega(datum, MarkedGenus(2, n), delta).group
                res.check(om == ev, f"{spec} {delta.lift} n={n}: {om} vs {ev}")
    return res


def suite_ranks(genera=(1, 2, 3), marks=(0, 1, 2)) -> SuiteResult:
    res = SuiteResult("ranks")
    specs = MIXED_SPECS + ("SL:3", "PGL:2", "Spin:8", "E8")
    for spec in specs:
        datum, comps = mixed_components(spec, limit=2)
        s, k = datum.abelian_rank, len(datum.factors)
        for delta in comps:
            diff = ns_lattice(datum, delta).rank - ns_rig_lattice(datum, delta)[1].rank
            res.check(diff == s, f"{spec} {delta.lift}: NS - NS(rig) rank {diff} != {s}")
            for g in genera:
                for n in marks:
                    mg = MarkedGenus(g, n)
                    r = rpic_report(datum, mg, delta).free_rank
                    want = s * mg.rank_h_hat + comb(s + 1, 2) + k
                    res.check(r == want, f"{spec} g={g} n={n}: rank RPic {r} != {want}")
    return res


WEYL_TYPES = ("A1", "A2", "B2", "C2", "G2", "A3", "B3", "C3")


def suite_weyl_bruteforce() -> SuiteResult:
    res = SuiteResult("weyl-bruteforce")
    for tag in WEYL_TYPES:
        basis = bruteforce_invariant_forms(tag)
        gram = [list(r) for r in simple_factor_table(tag).basic_gram]
        res.check(len(basis) == 1 and basis[0] == gram, f"{tag}: {basis} vs {gram}")
    return res


def _random_class(nsl, rng: random.Random) -> NSClass:
    vec = [Fraction(0)] * nsl.lattice.ambient_dim
    for b in nsl.lattice.basis:
        c = rng.randint(-5, 5)
        vec = [x + c * y for x, y in zip(vec, b)]
    return nsl.to_class(vec)


def _compose(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _check_chain(res: SuiteResult, rng: random.Random, chain, trials: int) -> None:
    """``chain`` is ``(H, M, G, psi: H -> M, phi: M -> G)``; checks ``(phi psi)^* = psi^* phi^*``."""
    H, M, G, psi, phi = chain
    for _ in range(trials):
        d = [rng.randint(-3, 3) for _ in range(H.ambient_dim)]
        d_mid = [sum(psi[i][j] * d[j] for j in range(len(d))) for i in range(len(psi))]
        d_top = [sum(phi[i][j] * d_mid[j] for j in range(len(d_mid))) for i in range(len(phi))]
        cls = _random_class(ns_lattice(G, pi1_class(G, d_top)), rng)
        direct = ns_pullback(_compose(phi, psi), H, G, d, cls)
        stepwise = ns_pullback(psi, H, M, d, ns_pullback(phi, M, G, d_mid, cls))
        res.check(
            ns_same_class(H, direct, stepwise) and ns_membership(H, d, direct),
            f"{H} -> {M} -> {G}, d={d}: {direct} vs {stepwise}",
        )


EV_LIFT_SPECS = ("SL:4", "C[mu:2](SL:4/mu:2)", "GL:3", "Spin:8", "C[mu:2](Spin:10)", "torus:1 x Sp:6", "E6sc", "PSO:8")


def suite_functoriality(seed: int = 7, classes: int = 50, lift_trials: int = 100) -> SuiteResult:
    res = SuiteResult("functoriality")
    rng = random.Random(seed)
    t1, sl2, gl2 = build_named("torus:1"), build_named("SL:2"), build_named("GL:2")
    t2, sp4 = build_named("torus:2"), build_named("Sp:4")
    half = classes // 2
    _check_chain(res, rng, (t1, sl2, gl2, [[1]], [[1], [0]]), half)
    for _ in range(classes - half):
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        _check_chain(res, rng, (t1, t2, sp4, [[a], [b]], [[1, 0], [0, 1]]), 1)
    for _ in range(lift_trials):
        spec = rng.choice(EV_LIFT_SPECS)
        datum = build_named(spec)
        lift = list(rng.choice(enumerate_pi1_ss_lifts(datum)))
        if datum.pi1_generators and datum.abelian_rank:
            c = rng.randint(-4, 4)
            lift = [x + c * y for x, y in zip(lift, datum.pi1_generators[0])]
        bumped = [x + (rng.randint(-3, 3) if i < datum.ss_dim else 0) for i, x in enumerate(lift)]
        for variant in (EvVariant.EV, EvVariant.EV_TILDE):
            a = ev_hom(datum, pi1_class(datum, lift), variant)
            b = ev_hom(datum, pi1_class(datum, bumped), variant)
            res.check(
                a.cokernel == b.cokernel and a.subgroup == b.subgroup,
                f"{spec} {variant.name}: {lift} vs {bumped}",
            )
    return res


def suite_gl_sanity(nmax: int = 8, dmax: int = 8) -> SuiteResult:
    from math import gcd

    res = SuiteResult("gl-sanity")
    for n in range(2, nmax + 1):
        datum = build_named(f"GL:{n}")
        gen = datum.pi1_generators[0]
        for d in range(-dmax, dmax + 1):
            delta = pi1_class(datum, [d * x for x in gen])
            cok = ev_hom(datum, delta, EvVariant.EV_TILDE).cokernel
            want = gcd(n, d)
            expected = () if want == 1 else (want,)
            res.check(cok.invariant_factors == expected, f"GL:{n} d={d}: {cok} vs Z/{want}")
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "type-a": suite_type_a,
    "type-bc": suite_type_bc,
    "type-d": suite_type_d,
    "exceptional": suite_exceptional,
    "tori": suite_tori,
    "image-factors": suite_image_factors,
    "order-identities": suite_order_identities,
    "ranks": suite_ranks,
    "weyl-bruteforce": suite_weyl_bruteforce,
    "functoriality": suite_functoriality,
    "gl-sanity": suite_gl_sanity,
}

SUITE_GROUPS = {
    "type-sweeps": ("type-a", "type-bc", "type-d", "exceptional"),
    "all": tuple(SUITES),
}


def run_suite(name: str) -> SuiteResult:
    start = time.perf_counter()
    res = SUITES[name]()
    res.name = name
    res.seconds = time.perf_counter() - start
    return res
