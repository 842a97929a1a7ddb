"""End-to-end tests of the command line interface via subprocesses."""
from __future__ import annotations

import subprocess
import sys

BASE = [sys.executable, "-m", "legasym.cli"]


def run_cli(*args, timeout=300):
    return subprocess.run(BASE + list(args), capture_output=True, text=True,
                          timeout=timeout)


def parse_kv(stdout, key):
    for line in stdout.splitlines():
        if line.startswith(key):
            return line.split("=", 1)[1].strip()
    raise AssertionError(f"{key!r} not found in output:\n{stdout}")


def test_eval_with_check():
    r = run_cli("eval", "--nu", "50", "--a", "0.5", "--x", "0.3", "--check")
    assert r.returncode == 0, r.stderr
    assert r.stdout.startswith("# meta: nu=50.0")
    assert "mu=" in r.stdout
    assert float(parse_kv(r.stdout, "rel_error")) <= 1e-13


def test_eval_q_and_prime():
    r = run_cli("eval", "--nu", "50", "--a", "0.5", "--x", "0.2",
                "--function", "Q", "--check")
    assert r.returncode == 0, r.stderr
    assert float(parse_kv(r.stdout, "rel_error")) <= 1e-13
    r = run_cli("eval", "--nu", "50", "--a", "0.5", "--x", "0.7",
                "--function", "Pprime", "--check")
    assert r.returncode == 0, r.stderr
    assert float(parse_kv(r.stdout, "rel_error")) <= 1e-13


def test_eval_at_turning_point():
    r = run_cli("eval", "--nu", "50", "--a", "0.5", "--x", "0.5")
    assert r.returncode == 0, r.stderr
    assert "P(0.5) = " in r.stdout


def test_eval_mu_anchor():
    r = run_cli("eval", "--nu", "50", "--mu", "43.734282891114151662",
                "--x", "0.3")
    assert r.returncode == 0, r.stderr


def test_usage_errors():
    # invalid geometry
    assert run_cli("eval", "--nu", "50", "--a", "1.2", "--x", "0.3").returncode == 2
    # both anchors
    assert run_cli("eval", "--nu", "50", "--a", "0.5", "--mu", "40",
                   "--x", "0.3").returncode == 2
    # neither anchor
    assert run_cli("eval", "--nu", "50", "--x", "0.3").returncode == 2
    # term count out of range
    assert run_cli("eval", "--nu", "50", "--a", "0.5", "--x", "0.3",
                   "--terms", "7").returncode == 2
    # missing subcommand
    assert run_cli().returncode == 2


def test_error_plot_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    r = run_cli("error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0",
                "--grid-stop", "0.1", "--grid-step", "0.05", "--out", str(out))
    assert r.returncode == 0, r.stderr
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0].startswith("# meta: nu=50.0")
    assert lines[1] == "x,omega,asymptotic,reference,envelope"
    assert len(lines) == 5
    xs = []
    for row in lines[2:]:
        fields = row.split(",")
        assert len(fields) == 5
        xs.append(float(fields[0]))
        assert float(fields[1]) <= -13
    assert xs == sorted(xs)


def test_error_plot_deterministic(tmp_path):
    args = ["error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0.6",
            "--grid-stop", "0.7", "--grid-step", "0.05"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_error_plot_empty_grid(tmp_path):
    out = tmp_path / "empty.csv"
    r = run_cli("error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0.5",
                "--grid-stop", "0.4", "--grid-step", "0.1", "--out", str(out))
    assert r.returncode == 0, r.stderr
    lines = out.read_text().splitlines()
    assert len(lines) == 2


def test_error_plot_bad_grid(tmp_path):
    out = tmp_path / "bad.csv"
    r = run_cli("error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0",
                "--grid-stop", "0.1", "--grid-step", "-0.05", "--out", str(out))
    assert r.returncode == 2
    r = run_cli("error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0.99",
                "--grid-stop", "0.9999", "--grid-step", "0.0099", "--out", str(out))
    assert r.returncode == 2


def test_error_plot_unwritable_path():
    r = run_cli("error-plot", "--nu", "50", "--a", "0.5", "--grid-start", "0.6",
                "--grid-stop", "0.6", "--grid-step", "0.1",
                "--out", "/nonexistent_dir_for_test/out.csv")
    assert r.returncode == 3


def test_selftest_filter():
    r = run_cli("selftest", "--filter", "coeffs")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "all 4 self-tests passed" in r.stdout


def test_selftest_no_match():
    r = run_cli("selftest", "--filter", "nosuchthing")
    assert r.returncode == 2
    assert "no self-tests match" in r.stderr


def test_selftest_precision_starvation():
    # At 10 digits the guarded cylinder evaluation must refuse loudly
    # rather than return noise.
    r = run_cli("selftest", "--filter", "pcf.cancellation", "--digits", "10")
    assert r.returncode == 1
    assert "FAIL" in r.stdout
    assert "PrecisionLossError" in r.stdout


def test_coeffs_dump():
    r = run_cli("coeffs", "--kind", "pcf_e", "--max-order", "2")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.splitlines()
    assert lines[0].startswith("# kind: pcf_e")
    assert lines[1:5] == ["1 1 0 3/8", "1 2 1 5/8", "1 3 2 5/24", "2 2 0 3/4"]
    assert run_cli("coeffs", "--kind", "pcf_e", "--max-order", "1").returncode == 2
