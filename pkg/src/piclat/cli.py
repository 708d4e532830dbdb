"""Command-line interface.

Usage::

    piclat compute --group GL:4 --g 2 --n 0 --delta 1 --quantity coker-ev-tilde
    piclat compute --group "torus:1" --g 3 --quantity coker-gamma-bar --format md
    piclat table --family A --nmax 6
    piclat table --family tori --dim 1 --g 3 --dmax 4
    piclat verify --suite order-identities

Exit codes: 0 success, 2 parse or validation error, 3 a quantity that does
not apply to the given ``(g, n)``, 4 engine/closed-form mismatch in a table,
5 failing verification suite.

Custom data (``--datum-file``) use the text format of
:func:`piclat.rootdata.datum_from_text`::

    abelian_rank = 1
    factors = [A:3]
    cochar = [[1,0,0,0], [0,1,0,0], [0,0,1,0], [1/4,1/2,3/4,1]]
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from .exactalg import ExactAlgError, FGAbGroup
from .groupspec import ParseError, parse_group_spec
from .invforms import EvVariant, FormKind, coker_r_G, ev_hom, form_lattice
from .oracle7 import InvalidParams
from .picard import (
    END_JC_NOTE,
    Genus0NotHere,
    GenusOutOfRange,
    IncompatibleDelta,
    MarkedGenus,
    NeedsMarkedPoint,
    PicardReport,
    _delta,
    cl_report,
    coker_gamma_bar,
    coker_omega,
    coker_res_bar,
    curve_ns,
    genus0_report,
    im_omega_gamma,
    ns_lattice,
    ns_rig_lattice,
    rpic_report,
    rpic_rig_report,
)
from .rootdata import InvalidIsogeny, UnsupportedType, build_named, datum_from_text
from .suites import SUITE_GROUPS, SUITES, run_suite
from .sweeps import sweep_family

__all__ = ["main", "cli", "QUANTITIES", "compute", "group_json", "UsageFailure", "NotApplicable"]

EXIT_USAGE = 2
EXIT_NOT_APPLICABLE = 3
EXIT_MISMATCH = 4
EXIT_VERIFY = 5


class UsageFailure(Exception):
    pass


class NotApplicable(Exception):
    pass


# quantity -> (theorem tags, needs g >= 1, description)
QUANTITIES = {
    "multiplier-sc-even": (("simple-group-forms",), False, "generator of sc-even pair forms"),
    "multiplier-even": (("simple-group-forms",), False, "generator of pair-even forms"),
    "form-lattices": (("invariant-forms-rank",), False, "ranks of all invariant-form lattices"),
    "coker-rg": (("pair-form-inclusion",), False, "coker(r_G)"),
    "coker-ev": (("evaluation-cokernel",), False, "coker(ev)"),
    "coker-ev-tilde": (("evaluation-cokernel",), False, "coker(ev~)"),
    "rpic": (("rpic-forms-sequence", "rpic-abelian-sequence"), True, "relative Picard group"),
    "rpic-rig": (("rigidified-sequence",), True, "relative Picard group of the rigidification"),
    "ns-rank": (("ns-sequence",), False, "ranks of NS and NS(rig)"),
    "im-omega-gamma": (("weight-and-tautological-image",), True, "invariant factors of Im(omega+gamma) in NS"),
    "coker-omega": (("weight-cokernel-sequence",), True, "coker(omega)"),
    "coker-gamma-bar": (("weight-cokernel-sequence",), True, "coker(gamma-bar), n = 0"),
    "coker-res-bar": (("restriction-cokernel-sequence",), True, "coker of restriction to a very general curve"),
    "curve-ns": (("curve-ns",), True, "rank of NS(Bun_G(C))"),
    "genus0": (("genus-zero-weight",), False, "relative Picard group and coker(omega) for g = 0"),
    "cl": (("class-group-comparison",), False, "applicability of Cl(M) = Pic(rigidification)"),
}


# ---------------------------------------------------------------------------
# Serialization


def _num(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def group_json(G: FGAbGroup) -> dict:
    """Torsion invariant factors (ascending divisibility chain) plus free rank."""
    return {"invariant_factors": list(G.torsion), "free_rank": G.free_rank, "text": str(G)}


def _report_json(rep: PicardReport) -> dict:
    out = group_json(rep.group)
    out["pieces"] = [
        {"label": p.label, "value": group_json(p.value) if isinstance(p.value, FGAbGroup) else p.value}
        for p in rep.pieces
    ]
    if rep.notes:
        out["notes"] = list(rep.notes)
    return out


# ---------------------------------------------------------------------------
# Input handling


def _load_datum(group: str | None, datum_file: str | None):
    if bool(group) == bool(datum_file):
        raise UsageFailure("give exactly one of --group and --datum-file")
    if datum_file:
        try:
            with open(datum_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageFailure(f"cannot read datum file: {exc}") from None
        return datum_from_text(text), f"file:{datum_file}"
    spec = parse_group_spec(group)
    return build_named(group), str(spec)


def _parse_delta(datum, delta: int | None, delta_vec: str | None):
    if delta is not None and delta_vec is not None:
        raise UsageFailure("give at most one of --delta and --delta-vec")
    if delta_vec is not None:
        try:
            vec = [Fraction(t.strip()) for t in delta_vec.split(",") if t.strip()]
        except (ValueError, ZeroDivisionError):
            raise UsageFailure(f"--delta-vec is not a list of rationals: {delta_vec!r}") from None
        return _delta(datum, vec)
    return _delta(datum, delta or 0)


def _single_multiplier(datum, kind: FormKind):
    if len(datum.factors) != 1:
        raise NotApplicable(f"multipliers need exactly one simple factor, {datum} has {len(datum.factors)}")
    lat = form_lattice(datum, kind)
    return {"multiplier": _num(lat.basis[0].alpha[0])}


def compute(datum, quantity: str, g: int, n: int, delta, characteristic: int = 0) -> tuple[dict, list[str]]:
    """Result payload and assumptions for one quantity."""
    tags, needs_curve, _ = QUANTITIES[quantity]
    if needs_curve and g < 1:
        raise NotApplicable(f"{quantity} needs g >= 1, got g = {g}")
    if quantity == "genus0" and g != 0:
        raise NotApplicable(f"genus0 needs g = 0, got g = {g}")
    if quantity == "coker-gamma-bar" and n != 0:
        raise NotApplicable(f"coker-gamma-bar is defined for n = 0, got n = {n}")
    assumptions: list[str] = []
    mg = MarkedGenus(g, n) if g >= 1 else None
    if quantity == "multiplier-sc-even":
        return _single_multiplier(datum, FormKind.PAIR_SC_EVEN), assumptions
    if quantity == "multiplier-even":
        return _single_multiplier(datum, FormKind.PAIR_EVEN), assumptions
    if quantity == "form-lattices":
        return {k.value: form_lattice(datum, k).rank for k in FormKind}, assumptions
    if quantity == "coker-rg":
        return group_json(coker_r_G(datum)), assumptions
    if quantity in ("coker-ev", "coker-ev-tilde"):
        variant = EvVariant.EV if quantity == "coker-ev" else EvVariant.EV_TILDE
        return group_json(ev_hom(datum, delta, variant).cokernel), assumptions
    if quantity == "rpic":
        return _report_json(rpic_report(datum, mg, delta)), assumptions
    if quantity == "rpic-rig":
        return _report_json(rpic_rig_report(datum, mg, delta)), assumptions
    if quantity == "ns-rank":
        return {"ns": ns_lattice(datum, delta).rank, "ns_rig": ns_rig_lattice(datum, delta)[1].rank}, assumptions
    if quantity == "im-omega-gamma":
        img = im_omega_gamma(datum, mg, delta)
        return {"invariant_factors": list(img.invariant_factors), "quotient": group_json(img.quotient)}, assumptions
    if quantity == "coker-omega":
        return _report_json(coker_omega(datum, mg, delta)), assumptions
    if quantity == "coker-gamma-bar":
        return group_json(coker_gamma_bar(datum, mg, delta)), assumptions
    if quantity == "coker-res-bar":
        return _report_json(coker_res_bar(datum, mg, delta)), [END_JC_NOTE]
    if quantity == "curve-ns":
        return {"rank": curve_ns(datum, delta, g).rank}, [END_JC_NOTE]
    if quantity == "genus0":
        return _report_json(genus0_report(datum, n, delta)), assumptions
    if quantity == "cl":
        rep = cl_report(datum, MarkedGenus(g, n), delta, characteristic)
        out = {
            "applicable": rep.applicable,
            "case": rep.case,
            "reasons": list(rep.reasons),
            "caveats": list(rep.caveats),
            "moduli_space_known": list(rep.moduli_space_known),
            "out_of_scope": list(rep.out_of_scope),
        }
        if rep.relative_part is not None:
            out["relative_part"] = _report_json(rep.relative_part)
        return out, assumptions
    raise UsageFailure(f"unknown quantity {quantity!r}")


# ---------------------------------------------------------------------------
# Rendering


def _md_value(v) -> str:
    if isinstance(v, dict):
        if "text" in v:
            return v["text"]
        return ", ".join(f"{k}={_md_value(x)}" for k, x in v.items())
    if isinstance(v, list):
        return "; ".join(_md_value(x) for x in v) if v else "-"
    return str(v)


def _render_envelope(env: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(env, indent=2)
    lines = [f"## {env['quantity']}", ""]
    for k, v in env["input"].items():
        lines.append(f"- {k}: {_md_value(v)}")
    lines.append("")
    lines.append("| field | value |")
    lines.append("|---|---|")
    for k, v in env["result"].items():
        lines.append(f"| {k} | {_md_value(v)} |")
    if env["assumptions"]:
        lines += ["", "Assumptions: " + "; ".join(env["assumptions"])]
    lines += ["", "Theorems: " + ", ".join(env["theorems"])]
    return "\n".join(lines)


def _cell(x) -> str:
    if isinstance(x, FGAbGroup):
        return str(x)
    if isinstance(x, Fraction):
        return str(_num(x))
    return str(x)


def _render_rows(rows, fmt: str) -> str:
    if fmt == "json":
        data = []
        for r in rows:
            enc = lambda x: group_json(x) if isinstance(x, FGAbGroup) else _num(x)
            data.append(
                {
                    "family": r.family,
                    "group": r.group,
                    "delta": r.delta,
                    "quantity": r.quantity,
                    "engine": enc(r.engine),
                    "oracle": enc(r.oracle),
                    "ok": r.ok,
                }
            )
        return json.dumps(data, indent=2)
    lines = ["| group | delta | quantity | engine | closed form | status |", "|---|---|---|---|---|---|"]
    for r in rows:
        status = "ok" if r.ok else "MISMATCH"
        lines.append(f"| {r.group} | {r.delta} | {r.quantity} | {_cell(r.engine)} | {_cell(r.oracle)} | {status} |")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Commands

_FORMAT = click.option("--format", "fmt", type=click.Choice(["json", "md"]), default="json", show_default=True)


@click.group()
def cli():
    """Lattice invariants of Picard groups of moduli stacks of G-bundles."""


@cli.command("compute")
@click.option("--group", help="group spec, e.g. 'GL:4' or 'C[mu:2](Spin:8)'")
@click.option("--datum-file", type=click.Path(dir_okay=False), help="custom root datum file")
@click.option("--g", "genus", type=int, default=2, show_default=True)
@click.option("--n", "marks", type=int, default=0, show_default=True)
@click.option("--delta", type=int, default=None, help="integer shorthand along the preferred pi_1 generator")
@click.option("--delta-vec", default=None, help="explicit lift, e.g. '1/2,0,1'")
@click.option("--quantity", required=True, type=click.Choice(sorted(QUANTITIES)))
@click.option("--characteristic", type=int, default=0, show_default=True, help="only used by 'cl'")
@_FORMAT
def cmd_compute(group, datum_file, genus, marks, delta, delta_vec, quantity, characteristic, fmt):
    """Compute one quantity for one group and component."""
    try:
        if genus < 0 or marks < 0:
            raise UsageFailure("--g and --n must be non-negative")
        datum, label = _load_datum(group, datum_file)
        d = _parse_delta(datum, delta, delta_vec)
        result, assumptions = compute(datum, quantity, genus, marks, d, characteristic)
    except (UsageFailure, ParseError, InvalidIsogeny, UnsupportedType, IncompatibleDelta, ExactAlgError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    except (NotApplicable, GenusOutOfRange, Genus0NotHere, NeedsMarkedPoint) as exc:
        click.echo(f"not applicable: {exc}", err=True)
        sys.exit(EXIT_NOT_APPLICABLE)
    env = {
        "input": {"group": label, "g": genus, "n": marks, "delta_lift": [_num(x) for x in d.lift]},
        "quantity": quantity,
        "result": result,
        "assumptions": assumptions,
        "theorems": list(QUANTITIES[quantity][0]),
    }
    click.echo(_render_envelope(env, fmt))


@cli.command("table")
@click.option("--family", required=True, type=click.Choice(["A", "BC", "D", "E", "FG", "tori"], case_sensitive=False))
@click.option("--nmax", type=int, default=6, show_default=True, help="type A: largest n")
@click.option("--lmax", type=int, default=None, help="types B/C/D: largest rank")
@click.option("--dim", type=int, default=1, show_default=True, help="tori: dimension")
@click.option("--g", "genus", type=int, default=3, show_default=True, help="tori: genus")
@click.option("--dmax", type=int, default=4, show_default=True, help="tori: lift entries in [-dmax, dmax]")
@_FORMAT
def cmd_table(family, nmax, lmax, dim, genus, dmax, fmt):
    """Regenerate a family table; every row is cross-checked against its closed form."""
    ranges = {"nmax": nmax, "dim": dim, "g": genus, "dmax": dmax}
    if lmax is not None:
        ranges["lmax"] = lmax
    try:
        rows = sweep_family(family, **ranges)
    except (InvalidParams, InvalidIsogeny, GenusOutOfRange, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    click.echo(_render_rows(rows, fmt))
    bad = sum(1 for r in rows if not r.ok)
    if bad:
        click.echo(f"{bad} of {len(rows)} rows disagree with the closed form", err=True)
        sys.exit(EXIT_MISMATCH)


@cli.command("verify")
@click.option(
    "--suite",
    "suites",
    multiple=True,
    type=click.Choice(sorted(set(SUITES) | set(SUITE_GROUPS))),
    default=("all",),
    show_default=True,
)
def cmd_verify(suites):
    """Run verification suites and print pass/fail counts."""
    names: list[str] = []
    for s in suites:
        for n in SUITE_GROUPS.get(s, (s,)):
            if n not in names:
                names.append(n)
    failed = 0
    for name in names:
        res = run_suite(name)
        status = "PASS" if res.ok else "FAIL"
        click.echo(f"{status} {name}: {res.passed} passed, {res.failed} failed ({res.seconds:.1f}s)")
        for f in res.failures[:5]:
            click.echo(f"    {f}")
        failed += not res.ok
    if failed:
        sys.exit(EXIT_VERIFY)


def main(argv=None):
    cli.main(args=argv, prog_name="piclat")


if __name__ == "__main__":
    main()
