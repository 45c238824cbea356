import json

import numpy as np
import pytest

from edft.cli import main, parse_config, read_spectrum_csv
from edft.signal_model import read_samples_csv, write_samples_csv
from edft.testgen import TestSignalSpec, gen_complex_test_signal


@pytest.fixture
def fig1_samples(tmp_path):
    seq, _ = gen_complex_test_signal(TestSignalSpec(seed=3))
    path = tmp_path / "samples.csv"
    write_samples_csv(path, seq.times, seq.values)
    return path


def _table(path):
    return np.genfromtxt(path, delimiter=",", names=True)


def test_transform_border_case_equals_dft(tmp_path, fig1_samples):
    assert main(["transform", str(fig1_samples), "-o", str(tmp_path / "e.csv"),
                 "--method", "edft", "--n", "64"]) == 0
    assert main(["transform", str(fig1_samples), "-o", str(tmp_path / "d.csv"),
                 "--method", "dft", "--n", "64"]) == 0
    e, d = _table(tmp_path / "e.csv"), _table(tmp_path / "d.csv")
    for col in ("F_re", "F_im", "S_re", "S_im"):
        np.testing.assert_allclose(e[col], d[col], atol=1e-10)
    np.testing.assert_allclose(d["fres"], 1)


def test_transform_writes_summary(tmp_path, fig1_samples):
    out = tmp_path / "spec.csv"
    assert main(["transform", str(fig1_samples), "-o", str(out), "--n", "1000",
                 "--max-iters", "10"]) == 0
    header = out.read_text().splitlines()[0]
    assert header == "f,F_re,F_im,S_re,S_im,psd_db,power_db,fres"
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["iterations"] <= 10 and summary["stop_code"] in (0, 2)
    assert {"method", "iterations", "stop_code", "budget_deviation", "n", "k_known"} <= set(summary)
    assert summary["n"] == 1000 and summary["k_known"] == 64


def test_missing_input_is_usage_error(tmp_path, capsys):
    assert main(["transform", str(tmp_path / "nope.csv"), "-o", str(tmp_path / "x.csv")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "FileNotFoundError"


def test_bad_flag_is_usage_error(capsys):
    assert main(["transform", "--bogus"]) == 2
    assert "error" in json.loads(capsys.readouterr().err)


def test_first_iteration_failure_exits_one(tmp_path, fig1_samples):
    w = np.zeros(1000)
    w[:64] = 1
    wpath = tmp_path / "w.csv"
    wpath.write_text("w\n" + "\n".join(str(v) for v in w) + "\n")
    out = tmp_path / "bad.csv"
    assert main(["transform", str(fig1_samples), "-o", str(out), "--n", "1000",
                 "--weights", str(wpath)]) == 1
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["stop_code"] == 1 and summary["iterations"] == 0


def test_reconstruct_at_input_times(tmp_path, fig1_samples):
    spec = tmp_path / "spec.csv"
    main(["transform", str(fig1_samples), "-o", str(spec), "--n", "1000", "--max-iters", "5"])
    out = tmp_path / "rec.csv"
    assert main(["reconstruct", str(spec), "-o", str(out), "--times", str(fig1_samples)]) == 0
    a, b = read_samples_csv(out), read_samples_csv(fig1_samples)
    np.testing.assert_allclose(a.values, b.values, atol=1e-8 * np.max(np.abs(b.values)))


def test_reconstruct_extrapolated_dft_is_zero(tmp_path, fig1_samples):
    spec = tmp_path / "dft.csv"
    main(["transform", str(fig1_samples), "-o", str(spec), "--n", "1000", "--method", "dft"])
    out = tmp_path / "ext.csv"
    assert main(["reconstruct", str(spec), "-o", str(out), "--extrapolate", "1000"]) == 0
    y = read_samples_csv(out).values
    assert y.size == 1000
    assert np.max(np.abs(y[64:])) < 1e-12


def test_reconstruct_empty_time_grid(tmp_path, fig1_samples):
    spec = tmp_path / "dft.csv"
    main(["transform", str(fig1_samples), "-o", str(spec), "--n", "64", "--method", "dft"])
    times = tmp_path / "t.csv"
    times.write_text("t\n")
    out = tmp_path / "empty.csv"
    assert main(["reconstruct", str(spec), "-o", str(out), "--times", str(times)]) == 0
    assert out.read_text() == "t,re,im\n"


def test_spectrum_file_round_trip(tmp_path, fig1_samples):
    spec = tmp_path / "spec.csv"
    main(["transform", str(fig1_samples), "-o", str(spec), "--n", "100", "--max-iters", "3"])
    grid, F = read_spectrum_csv(spec)
    assert grid.is_uniform and grid.N == 100
    assert grid.upper_freq == pytest.approx(0.5)
    tab = _table(spec)
    i = int(np.argmin(np.abs(tab["f"] - 0.13)))
    assert F[grid.index_of(0.13)] == pytest.approx(tab["F_re"][i] + 1j * tab["F_im"][i])


def test_compare_and_resolution(tmp_path, fig1_samples):
    outdir = tmp_path / "cmp"
    assert main(["compare", str(fig1_samples), "-o", str(outdir), "--n", "200",
                 "--max-iters", "3"]) == 0
    summary = json.loads((outdir / "summary.json").read_text())
    assert set(summary) == {"dft", "edft", "hrdft", "capon"}
    for m in summary:
        assert (outdir / f"{m}.csv").exists()
    res = tmp_path / "res.csv"
    assert main(["resolution", str(fig1_samples), "-o", str(res), "--method", "dft",
                 "--n", "200"]) == 0
    np.testing.assert_allclose(_table(res)["fres"], 1)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_iters": 3, "rel_threshold": 0.01}))
    c = parse_config(["transform", "in.csv", "-o", "out.csv", "--config", str(cfg)])
    assert c.max_iters == 3 and c.rel_threshold == 0.01 and c.rel_deviation == 0.0005
    c = parse_config(["transform", "in.csv", "-o", "out.csv", "--config", str(cfg),
                      "--max-iters", "5"])
    assert c.max_iters == 5 and c.rel_threshold == 0.01


def test_simulate_fig5_outputs(tmp_path):
    out = tmp_path / "f5"
    assert main(["simulate", "fig5", "--seed", "7", "-o", str(out)]) == 0
    for name in ("dft.csv", "edft.csv", "hrdft.csv", "truth.csv", "samples.csv", "summary.json"):
        assert (out / name).exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["methods"]["hrdft"]["iterations"] == 10


def test_simulate_fig4c_flags(tmp_path):
    out = tmp_path / "f4c"
    assert main(["simulate", "fig4c", "--seed", "7", "-o", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["n_removed"] == 32 and s["mean_period"] == pytest.approx(2.0)
    assert s["nyquist_condition_met"] is False
    assert isinstance(s["exponent_within_3db"], bool)
    a = tmp_path / "f4a"
    main(["simulate", "fig4a", "--seed", "7", "-o", str(a)])
    assert json.loads((a / "summary.json").read_text())["nyquist_condition_met"] is True


def test_simulate_is_byte_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["simulate", "fig1", "--seed", "2", "-o", str(tmp_path / d)]) == 0
    for name in ("dft.csv", "edft.csv", "truth.csv", "samples.csv", "summary.json",
                 "resolution_edft.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_simulate_fig3_uses_fifteen_iterations(tmp_path):
    out = tmp_path / "f3"
    assert main(["simulate", "fig3", "-o", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["methods"]["edft_jittered"]["n"] == 2000
    assert s["methods"]["edft_jittered"]["iterations"] <= 15
    assert s["jittered_max_above_0p55_db"] < s["jittered_peak_db"] - 20


def test_simulate_fig6_extrapolations(tmp_path):
    out = tmp_path / "f6"
    assert main(["simulate", "fig6", "-o", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["methods"]["dft"]["mean_power_forward"] < 1e-20
    assert read_samples_csv(out / "extrapolated_edft.csv").K == 1000


def test_unknown_scenario(tmp_path, capsys):
    assert main(["simulate", "fig9", "-o", str(tmp_path)]) == 2
    assert "fig9" in json.loads(capsys.readouterr().err)["message"]


def test_csv_uses_full_precision(tmp_path, fig1_samples):
    out = tmp_path / "spec.csv"
    main(["transform", str(fig1_samples), "-o", str(out), "--n", "64", "--method", "dft"])
    row = out.read_text().splitlines()[5].split(",")
    assert any(len(v.replace("-", "").replace(".", "").lstrip("0")) >= 15 for v in row[1:3])
