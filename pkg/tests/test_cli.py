import json

import pytest
from click.testing import CliRunner

import piclat.cli as cli_mod
import piclat.suites as suites
import piclat.sweeps as sweeps
from piclat.cli import cli


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(cli, list(args))

    return _run


def result_of(res):
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_compute_examples(run):
    env = result_of(run("compute", "--group", "GL:4", "--g", "2", "--n", "0", "--delta", "1", "--quantity", "coker-ev-tilde"))
    assert env["result"]["invariant_factors"] == [] and env["result"]["free_rank"] == 0
    env = result_of(run("compute", "--group", "Spin:8", "--g", "1", "--n", "1", "--delta", "0", "--quantity", "coker-omega"))
    assert env["result"]["invariant_factors"] == [2, 2]
    env = result_of(run("compute", "--group", "torus:1", "--g", "3", "--n", "0", "--delta", "0", "--quantity", "coker-gamma-bar"))
    assert env["result"]["invariant_factors"] == [2]


def test_envelope_layout(run):
    env = result_of(run("compute", "--group", "GL:2", "--g", "3", "--quantity", "coker-res-bar"))
    assert list(env) == ["input", "quantity", "result", "assumptions", "theorems"]
    assert env["input"] == {"group": "GL:2", "g": 3, "n": 0, "delta_lift": [0, 0]}
    assert env["result"]["invariant_factors"] == [4]
    assert any("End(J_C)" in a for a in env["assumptions"])
    assert env["theorems"]


def test_json_is_deterministic_and_ascending(run):
    args = ("compute", "--group", "GL:4 x torus:1 x PSO:8", "--g", "5", "--delta", "2", "--quantity", "coker-omega")
    first, second = run(*args), run(*args)
    assert first.output == second.output
    env = result_of(first)
    f = env["result"]["invariant_factors"]
    assert f == sorted(f) and all(b % a == 0 for a, b in zip(f, f[1:]))


def test_every_quantity_runs(run):
    for q in cli_mod.QUANTITIES:
        g = "0" if q == "genus0" else "2"
        n = "1" if q in ("genus0", "cl") else "0"
        group = "SL:2" if q.startswith("multiplier") else "GL:2"
        env = result_of(run("compute", "--group", group, "--g", g, "--n", n, "--quantity", q))
        assert env["quantity"] == q


def test_markdown(run):
    res = run("compute", "--group", "SO:11", "--quantity", "coker-rg", "--format", "md")
    assert res.exit_code == 0
    assert "| text | Z/2 |" in res.output


def test_delta_vec_and_datum_file(run, tmp_path):
    f = tmp_path / "gl4.txt"
    f.write_text("abelian_rank = 1\nfactors = [A:3]\ncochar = [[1,0,0,0],[0,1,0,0],[0,0,1,0],[1/4,1/2,3/4,1]]\n")
    env = result_of(run("compute", "--datum-file", str(f), "--delta-vec", "1/2,1,3/2,2", "--quantity", "coker-ev-tilde"))
    assert env["result"]["invariant_factors"] == [2]
    assert env["input"]["delta_lift"] == ["1/2", 1, "3/2", 2]


@pytest.mark.parametrize(
    "args",
    [
        ("compute", "--group", "Foo:2", "--quantity", "coker-rg"),
        ("compute", "--group", "SL:6/mu:4", "--quantity", "coker-rg"),
        ("compute", "--quantity", "coker-rg"),
        ("compute", "--group", "SL:2", "--delta-vec", "1/3", "--quantity", "coker-ev"),
        ("compute", "--group", "SL:2", "--delta-vec", "a,b", "--quantity", "coker-ev"),
        ("compute", "--group", "SL:2", "--delta", "1", "--delta-vec", "1", "--quantity", "coker-ev"),
        ("compute", "--group", "SL:2", "--g", "-1", "--quantity", "coker-ev"),
        ("compute", "--group", "SL:2", "--datum-file", "x.txt", "--quantity", "coker-ev"),
        ("compute", "--datum-file", "/nonexistent/datum.txt", "--quantity", "coker-ev"),
    ],
)
def test_usage_errors_exit_2(run, args):
    res = run(*args)
    assert res.exit_code == 2, res.output


@pytest.mark.parametrize(
    "args, needle",
    [
        (("--group", "SL:2", "--g", "0", "--quantity", "coker-omega"), "g >= 1"),
        (("--group", "SL:2", "--g", "0", "--n", "0", "--quantity", "genus0"), "marked point"),
        (("--group", "SL:2", "--g", "2", "--quantity", "genus0"), "g = 0"),
        (("--group", "GL:2", "--g", "2", "--n", "1", "--quantity", "coker-gamma-bar"), "n = 0"),
        (("--group", "SL:2 x SL:3", "--quantity", "multiplier-even"), "one simple factor"),
    ],
)
def test_not_applicable_exit_3(run, args, needle):
    res = run("compute", *args)
    assert res.exit_code == 3
    assert needle in res.output


def test_table_examples(run):
    rows = result_of(run("table", "--family", "A", "--nmax", "6"))
    assert rows and all(r["ok"] for r in rows)
    res = run("table", "--family", "FG", "--format", "md")
    assert res.exit_code == 0
    assert res.output.count("\n| F4") == 5 and res.output.count("\n| G2") == 5
    rows = result_of(run("table", "--family", "tori", "--dim", "1", "--g", "3", "--dmax", "4"))
    from math import gcd

    for r in rows:
        if r["quantity"] == "torus-coker-omega":
            d = int(r["delta"].split("(")[1].rstrip(")"))
            g = gcd(4, d - 2)
            assert r["engine"]["invariant_factors"] == ([] if g == 1 else [g])


def test_table_mismatch_exit_4(run, monkeypatch):
    real = sweeps.oracle

    def skewed(params, q, literal=False):
        v = real(params, q, literal)
        return v * 3 if q.value.startswith("multiplier") else v

    monkeypatch.setattr(sweeps, "oracle", skewed)
    res = run("table", "--family", "FG")
    assert res.exit_code == 4


def test_verify(run):
    res = run("verify", "--suite", "weyl-bruteforce", "--suite", "gl-sanity")
    assert res.exit_code == 0
    assert res.output.startswith("PASS weyl-bruteforce")


def test_verify_failure_exit_5(run, monkeypatch):
    def broken():
        r = suites.SuiteResult("gl-sanity")
        r.check(False, "forced")
        return r

    monkeypatch.setitem(suites.SUITES, "gl-sanity", broken)
    res = run("verify", "--suite", "gl-sanity")
    assert res.exit_code == 5
    assert "FAIL gl-sanity" in res.output


def test_main_entry_point(capsys):
    with pytest.raises(SystemExit) as exc:
        cli_mod.main(["compute", "--group", "E7ad", "--quantity", "coker-rg"])
    assert exc.value.code == 0
    assert json.loads(capsys.readouterr().out)["result"]["invariant_factors"] == [2]
