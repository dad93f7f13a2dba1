import csv
import json
import math
import subprocess
import sys

import pytest

from fourier_uncertainty.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_eval_example(capsys):
    code, doc = run(capsys, "eval", "--kernel", "characteristic", "--alpha", "2", "--beta", "1")
    assert code == 0
    assert doc["schema"] == "v1"
    assert doc["command"] == "functional eval"
    assert doc["config"]["alpha"] == 2.0 and doc["config"]["kernel"] == "characteristic"
    assert "timestamp" in doc
    assert doc["result"]["J"] == pytest.approx(8.4433e-3, rel=1e-4)


def test_nested_and_alias_agree(capsys):
    _, a = run(capsys, "functional", "eval", "--kernel", "power:2", "--alpha", "3")
    _, b = run(capsys, "eval", "--kernel", "power:2", "--alpha", "3")
    assert a["result"] == b["result"]


def test_kernel_json_input(capsys, tmp_path):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"family": "cosine_series", "params": [1, 0.2], "support_radius": 0.5, "nonnegative": True}))
    code, doc = run(capsys, "eval", "--kernel", str(p), "--alpha", "2")
    assert code == 0 and doc["result"]["kernel"]["params"] == [1.0, 0.2]


def test_certify_examples(capsys):
    code, doc = run(capsys, "certify", "--alpha", "2", "--K", "100")
    assert code == 0 and doc["result"]["verdict"] == "PASS-ALL-K"
    code, doc = run(capsys, "hypergeom", "certify", "--alpha", "1", "--K", "10", "--expect-pass")
    assert code == 4 and doc["result"]["verdict"].startswith("FAIL")
    code, _ = run(capsys, "certify", "--alpha", "1", "--K", "10")
    assert code == 0


def test_certify_csv(capsys, tmp_path):
    p = tmp_path / "c.csv"
    run(capsys, "certify", "--alpha", "3", "--K", "5", "--csv", str(p), "--json")
    rows = list(csv.DictReader(p.open()))
    assert [int(r["k"]) for r in rows] == [1, 2, 3, 4, 5]
    assert float(rows[0]["value"]) > 0


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["eval", "--alpha", "2", "--unknown-flag"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["eval"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        main(["eval", "--alpha", "2", "--threads", "0"])
    assert e.value.code == 1


def test_precondition_exit_2(capsys):
    assert main(["sup", "--beta", "0.4"]) == 2
    assert main(["eval", "--alpha", "-1"]) == 2
    assert main(["eval", "--kernel", "boxcar", "--alpha", "2"]) == 2
    assert main(["certify", "--alpha", "2", "--K", "0"]) == 2


def test_uncertified_exit_3(capsys):
    code, doc = run(capsys, "spectral", "sup", "--kernel", "characteristic", "--beta", "1.5")
    assert code == 3 and doc["result"]["status"] == "unbounded-risk"


def test_sup_json(capsys):
    code, doc = run(capsys, "sup", "--kernel", "gaussian")
    assert code == 0
    assert doc["result"]["value"] == pytest.approx((2 * math.pi * math.e) ** -0.5)


def test_crossover_csv_17_digits(capsys, tmp_path):
    p = tmp_path / "sweep.csv"
    code, doc = run(capsys, "crossover", "--csv", str(p), "--points", "5")
    assert code == 0
    assert 1.30 <= doc["result"]["alpha_star"] <= 1.45
    assert doc["result"]["alpha_star_4dp"] == round(doc["result"]["alpha_star"], 4)
    lines = p.read_text().splitlines()
    assert lines[0] == "alpha,J_A,J_B"
    assert len(lines) == 6
    j = lines[1].split(",")[1]
    assert len(j.replace(".", "").lstrip("0")) == 17


def test_crossover_none(capsys):
    code, doc = run(capsys, "crossover", "--kernel-b", "characteristic")
    assert code == 0 and doc["result"]["alpha_star"] is None
    code, _ = run(capsys, "crossover", "--kernel-b", "characteristic", "--expect-pass")
    assert code == 4


def test_smooth_signal_file(capsys, tmp_path):
    p = tmp_path / "sig.csv"
    p.write_text("x\n" + "\n".join(str(math.sin(0.1 * i)) for i in range(500)))
    code, doc = run(capsys, "functional", "smooth", "--kernel", "gaussian", "--signal", str(p), "--expect-pass")
    assert code == 0 and doc["result"]["max_ratio"] <= 1.02


def test_smooth_random_and_tone(capsys):
    code, doc = run(capsys, "smooth", "--random", "3", "--seed", "4", "--expect-pass")
    assert code == 0 and len(doc["result"]["signals"]) == 3
    code, doc = run(capsys, "smooth", "--tone", "0.5")
    assert doc["result"]["max_ratio"] >= 0.95


def test_smooth_empty_signal(capsys, tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("header\n")
    assert main(["smooth", "--signal", str(p)]) == 2


def test_stability_verify(capsys, tmp_path):
    p = tmp_path / "m.csv"
    code, doc = run(capsys, "stability", "verify", "--alpha", "2", "--seeds", "20", "--csv", str(p), "--expect-pass", "--threads", "2")
    assert code == 0 and doc["result"]["count"] == 20 and not doc["result"]["violating_seeds"]
    assert next(csv.reader(p.open())) == ["seed", "lhs", "rhs", "margin"]
    code, doc = run(capsys, "verify", "--alpha", "2", "--coeffs", "[1.0]")
    assert abs(doc["result"]["margin"]) <= 1e-8


def test_stability_sums(capsys):
    code, doc = run(capsys, "sums", "--alpha", "2", "--K", "10000", "--alt-K", "200", "--expect-pass")
    assert code == 0
    assert doc["result"]["zeta4_ok"] and doc["result"]["alt_ok"]
    assert doc["config"]["alt_K"] == 200


def test_optimize_run(capsys, tmp_path):
    p = tmp_path / "trace.csv"
    code, doc = run(capsys, "optimize", "run", "--alpha", "2", "--dim", "1", "--iters", "20", "--csv", str(p))
    assert code == 0
    assert doc["result"]["J"] <= 1 / (12 * math.pi**2) * (1 + 1e-12)
    assert next(csv.reader(p.open())) == ["iter", "J"]


def test_optimize_probe(capsys):
    code, doc = run(capsys, "probe", "--alpha", "2", "--N", "3", "--seed", "1", "--eps", "1e-4", "1e-3", "--full", "--expect-pass")
    assert code == 0
    assert doc["result"]["min_slope"] >= -1e-6
    assert len(doc["result"]["directions"]) == 3


def test_reproducible_payload(capsys):
    _, a = run(capsys, "verify", "--alpha", "3", "--seeds", "5", "--seed", "11")
    _, b = run(capsys, "verify", "--alpha", "3", "--seeds", "5", "--seed", "11")
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


def test_out_file(capsys, tmp_path):
    p = tmp_path / "r.json"
    assert main(["sup", "--out", str(p)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(p.read_text())["schema"] == "v1"


@pytest.mark.parametrize("backend", ["python"])
def test_backend_flag(capsys, backend):
    from fourier_uncertainty import _backend

    before = _backend.name()
    try:
        code, doc = run(capsys, "eval", "--kernel", "power:3", "--alpha", "2", "--backend", backend)
        assert code == 0 and doc["backend"] == backend
    finally:
        _backend.use(before)


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "fourier_uncertainty", "certify", "--alpha", "1", "--K", "10", "--expect-pass"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 4
    assert json.loads(r.stdout)["result"]["verdict"] == "FAIL(2)"
