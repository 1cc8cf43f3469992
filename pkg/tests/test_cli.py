import json
import subprocess
import sys

import mpmath
import pytest

from logtangent import cli
from oracles import CHI8, catalan_oracle, dirichlet_l2


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def digits_of(out):
    """Undo format_digits: strip blocks, the (+-1) marker and the label."""
    body = out.split("=", 1)[1].split("#")[0]
    return body.replace("(+-1)", "").replace(" ", "").replace("\n", "")


def test_compute_g_accel_and_lucas(capsys):
    code, out, _ = run(capsys, "compute", "G", "--method", "accel-n", "--n", "1", "--prec", "100")
    assert code == 0
    a = digits_of(out)
    code, out, _ = run(capsys, "compute", "G", "--method", "lucas", "--prec", "100")
    assert code == 0 and digits_of(out) == a
    ref = mpmath.nstr(catalan_oracle(110), 100, strip_zeros=False)
    # last digit carries +-1
    assert a[:-1] == ref[:-1]


def test_compute_l2chi8(capsys):
    code, out, _ = run(capsys, "compute", "L2chi8", "--prec", "50")
    assert code == 0
    with mpmath.workdps(60):
        got = mpmath.mpf(digits_of(out))
        assert abs(got - dirichlet_l2(CHI8, 8, 60)) < mpmath.mpf("1e-48")


def test_env_default_precision(capsys, monkeypatch):
    monkeypatch.setenv(cli.PREC_ENV, "20")
    code, out, _ = run(capsys, "compute", "G")
    assert code == 0
    assert len(digits_of(out).split(".")[1]) == 20


def test_format_digits():
    with mpmath.workdps(80):
        text = cli.format_digits(catalan_oracle(80), 61)
    ref = mpmath.nstr(catalan_oracle(80), 61, strip_zeros=False)[2:]
    lines = text.splitlines()
    assert lines[0] == "0." + " ".join(ref[i:i + 10] for i in range(0, 50, 10))
    assert lines[1] == f"  {ref[50:60]} {ref[60]} (+-1)"


def test_report_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for i, p in enumerate(paths):
        argv = ["--report", str(p), "verify", "denest", "--prec", "40"] if i else \
            ["verify", "denest", "--prec", "40", "--report", str(p)]
        assert cli.main(argv) == 0
    capsys.readouterr()
    recs = []
    for p in paths:
        lines = p.read_text().splitlines()
        head = json.loads(lines[0])
        assert list(head) == ["command", "inputs", "outputs", "diagnostics", "version"]
        head["diagnostics"].pop("wall_ms")
        recs.append((head, lines[1:]))
    assert recs[0] == recs[1]


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "verify", "denest", "--prec", "30")[0] == 0
    assert run(capsys, "compute", "G", "--prec", "abc")[0] == 2
    assert run(capsys, "compute", "L2chi6", "--method", "lucas")[0] == 2
    assert run(capsys, "compute", "G", "--method", "lucas", "--n", "3")[0] == 2
    code, out, _ = run(capsys, "compute", "G", "--method", "slow", "--prec", "50")
    assert code == 3 and out == ""
    monkeypatch.setitem(cli.SUITE_FUNCS, "denest", lambda prec, rng: [("broken", mpmath.mpf(1))])
    code, out, _ = run(capsys, "verify", "denest", "--prec", "30")
    assert code == 1 and "FAIL broken" in out


def test_bad_env_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv(cli.PREC_ENV, "many")
    assert run(capsys, "compute", "G")[0] == 2


def test_verify_suites_small(capsys):
    for suite in ["reflection", "lemma1", "decompositions", "denest"]:
        code, out, _ = run(capsys, "verify", suite, "--prec", "30")
        assert code == 0, out


def test_discover_small(capsys):
    code, out, _ = run(capsys, "discover", "--max-den", "2", "--prec", "40")
    assert code == 0
    assert out.splitlines()[0].startswith("T(1/2) = 0")
    code, out, _ = run(capsys, "discover", "--max-den", "6", "--prec", "60")
    rels = [line for line in out.splitlines() if "= 0" in line]
    assert len(rels) == 2 and "T(1/6) - T(1/3) = 0" in rels[1]


def test_bench_rows(capsys):
    code, out, _ = run(capsys, "bench", "--n", "1", "2", "--prec", "30")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert [r[0] for r in rows] == ["1", "2"]
    assert int(rows[0][1]) < int(rows[1][1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logtangent", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout


@pytest.mark.parametrize("argv", [["frobnicate"], ["compute"], ["verify", "nonsense"]])
def test_malformed_flags(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""
