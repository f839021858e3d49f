import json
import subprocess
import sys

import pytest

from qcf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.splitlines()[0].startswith("gcf1")


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "gcf1", "--q", "0.2", "--a", "0.3", "--b", "0.4", "--lambda", "0.5",
                       "--tol", "1e-20")
    assert code == 0 and out.startswith("PASS gcf1")


def test_verify_domain(capsys):
    code, out, _ = run(capsys, "verify", "gcf2", "--point", "q=0.6,a=2,b=0.2,lambda=0.1")
    assert code == 2 and "domain-violation" in out


def test_verify_fail(capsys):
    # A tolerance below the working precision cannot be met.
    code, _, _ = run(capsys, "verify", "heine", "--seed", "1", "--tol", "1e-80")
    assert code == 1


def test_unknown_id(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 3 and "nope" in err


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 3


def test_seed_and_point_conflict(capsys):
    code, _, _ = run(capsys, "verify", "mod6", "--q", "0.3", "--seed", "2")
    assert code == 3


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "mod6", "--seed", "2", "--json", "--precision", "30")
    doc = json.loads(out)
    assert code == 0 and doc["precision"] == 30 and doc["data"]["seed"] == 2


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "jackson", "--seeds", "3", "--csv")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "id,seed,pass,rel_diff,flags" and len(rows) == 4


def test_sweep_real_q_all(capsys):
    code, out, _ = run(capsys, "sweep", "all", "--seeds", "1", "--real-q")
    assert code == 0 and "mod6" in out and "heine " not in out


def test_eval_cf(capsys):
    code, out, _ = run(capsys, "eval-cf", "entry12", "--n", "5", "--seed", "2")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "n,A_n,B_n,f_n" and len(rows) == 7


def test_eval_cf_needs_fraction(capsys):
    code, _, _ = run(capsys, "eval-cf", "jackson")
    assert code == 3


def test_bm(capsys):
    code, out, _ = run(capsys, "bm", "thm41-f2f3", "--steps", "3", "--check-n", "20",
                       "--point", "q=0.2,a=0.3,b=0.4,lambda=0.5")
    assert code == 0 and out.startswith("PASS thm41-f2f3")


def test_bm_degenerate(capsys):
    code, _, err = run(capsys, "bm", "thm41-f1f2", "--point", "q=0.5,a=0.3,b=0.2,lambda=0.015")
    assert code == 2 and "step 1" in err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "qcf.cfg"
    cfg.write_text("tol = 1e-80  # unreachable\n")
    code, _, _ = run(capsys, "--config", str(cfg), "verify", "heine", "--seed", "1")
    assert code == 1
    cfg.write_text("bogus = 1\n")
    code, _, _ = run(capsys, "--config", str(cfg), "verify", "heine", "--seed", "1")
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcf", "verify", "ser3", "--seed", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("QCF_PRECISION", "35")
    code, out, _ = run(capsys, "verify", "mod6", "--seed", "1", "--json")
    assert code == 0 and json.loads(out)["precision"] == 35
