import csv
import math
import subprocess
import sys

import pytest

from deformable.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_deriv_value(capsys):
    code, out, _ = run(capsys, "deriv", "t^2", "0.5", "--at", "2")
    assert code == 0 and out == "4\n"


def test_deriv_limit(capsys):
    code, out, _ = run(capsys, "deriv", "t^2", "0.5", "--at", "2", "--limit")
    lines = out.splitlines()
    assert lines[0] == "4"
    assert abs(float(lines[1].split()[1]) - 4.0) <= 1e-6
    assert len(lines) == 2 + 20


def test_deriv_symbolic(capsys):
    assert run(capsys, "deriv", "exp(t)", "0.3")[1] == "exp(t)\n"


def test_deriv_extended(capsys):
    assert run(capsys, "deriv", "t^3", "1.5", "--at", "1")[1] == "4.5\n"


def test_integ(capsys):
    code, out, _ = run(capsys, "integ", "1", "0.5", "--from", "0", "--to", "1")
    assert code == 0
    assert abs(float(out.splitlines()[0]) - 1.2642411) <= 1e-7
    assert "closed form: 2 - 2*exp(-t)" in out
    _, out, _ = run(capsys, "integ", "exp(t)", "0.5", "--from", "0", "--to", "1")
    assert abs(float(out.splitlines()[0]) - 2.3504024) <= 1e-7
    _, out, _ = run(capsys, "integ", "sin(t)", "1.0", "--from", "0", "--to", "3.141592653589793")
    assert abs(float(out.splitlines()[0]) - 2.0) <= 1e-9


def test_integ_outside_family(capsys):
    code, out, _ = run(capsys, "integ", "log(t)", "0.5", "--from", "1", "--to", "2")
    assert code == 0 and "unavailable" in out


def test_solve_first_order(capsys):
    code, out, _ = run(capsys, "solve", "first-order", "--alpha", "0.5", "--P", "1", "--Q", "t*exp(-t)")
    assert code == 0
    assert out.splitlines()[0] == "y(t) = C*exp(-3*t) + (t - 0.5)*exp(-t)"


def test_solve_composed(capsys):
    code, out, _ = run(capsys, "solve", "composed", "--alpha1", "0.5", "--alpha2", "0.5")
    assert code == 0 and "roots: -1, -1 (repeated)" in out
    code, out, _ = run(capsys, "solve", "composed", "--alpha1", "1", "--alpha2", "1")
    assert "y(t) = C1 + C2*t" in out


def test_solve_numeric_fallback_is_numerical_failure(capsys):
    code, out, err = run(capsys, "solve", "first-order", "--alpha", "0.5", "--P", "t", "--Q", "1")
    assert code == 2 and "notice" in err and "residual_max" in out


def test_solve_missing_parameters(capsys):
    assert run(capsys, "solve", "composed", "--alpha1", "0.5")[0] == 1


def test_theorem_commands(capsys):
    code, out, _ = run(capsys, "rolle", "sin(t)", "--alpha", "0.5", "--from", "0", "--to", str(math.pi))
    assert code == 0 and abs(float(out.split()[1]) - math.pi / 2) <= 1e-9
    code, out, _ = run(capsys, "mvt", "t^2", "--alpha", "0.7", "--from", "0", "--to", "1")
    assert code == 0 and out.startswith("c 0.5")
    code, out, _ = run(capsys, "taylor", "exp(t)", "--alpha", "0.5", "--from", "0", "--to", "1")
    assert abs(float(out.split()[1]) - math.log(math.e - 1)) <= 1e-9


def test_exit_codes(capsys):
    assert run(capsys, "deriv", "t^", "0.5")[0] == 1
    assert run(capsys, "rolle", "t", "--alpha", "0.5", "--from", "0", "--to", "1")[0] == 1
    assert run(capsys, "integ", "1", "0", "--from", "0", "--to", "1")[0] == 1
    assert run(capsys, "deriv", "log(t)", "0.5", "--at", "-1")[0] == 2
    assert run(capsys, "taylor", "exp(t)", "--alpha", "0.5", "--from", "0", "--to", "1", "--n", "2")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["deriv", "t", "notanumber"])
    assert info.value.code == 1


def test_parse_error_on_stderr(capsys):
    code, out, err = run(capsys, "deriv", "sin t", "0.5")
    assert code == 1 and out == "" and "offset 4" in err


def test_sweep_file(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "t^2", "--alpha", "0,0.5", "1", "--from", "0", "--to", "2", "--points", "5", "--out", str(path))
    assert code == 0
    with open(path) as fh:
        data = list(csv.reader(fh))
    assert data[0] == ["t", "alpha", "value"] and len(data) == 16


def test_sweep_domain_error_leaves_no_file(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    code, _, err = run(capsys, "sweep", "log(t)", "--alpha", "0.5", "--from", "0", "--to", "1", "--points", "3", "--out", str(path))
    assert code == 2 and not path.exists() and "t=0.0" in err


def test_check_deterministic(capsys):
    code, first, _ = run(capsys, "check", "--seed", "42")
    assert code == 0
    assert first.splitlines()[-1].startswith("all ") and first.splitlines()[-1].endswith(" invariant families pass")
    _, second, _ = run(capsys, "check", "--seed", "42")
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "deformable", "deriv", "t^3", "1.5", "--at", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "4.5\n"


def test_check_exit_code_with_injected_bug(monkeypatch, capsys):
    import deformable.cli as cli
    from deformable.checks import run_checks
    from deformable.expr import Const, differentiate, simplify

    broken = lambda f, a: simplify(Const(1 - a) * f + Const(a) * differentiate(f) + Const(1e-9))
    monkeypatch.setattr(cli, "run_checks", lambda seed: run_checks(seed, deform=broken))
    code, out, _ = run(capsys, "check")
    assert code != 0 and "FAIL" in out
