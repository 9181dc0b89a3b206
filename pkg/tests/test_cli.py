import csv
import io
import math

import pytest

from secrecylab import ParameterError, SecrecyBudget, SystemConfig, nae, sim
from secrecylab.cli import main, parse_list
from secrecylab.experiments import ExperimentSpec, render, rows


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    lines = text.splitlines()
    assert lines[0].startswith("# meta: ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_fig4_default_grid(capsys):
    code, out, _ = run(capsys, "fig4_nae_thr_vs_p", "--no-timestamp")
    assert code == 0
    data = table(out)
    assert len(data) == 33
    assert list(data[0]) == ["P_dB", "epsilon", "N", "eta_exact", "eta_approx"]
    assert data[0]["eta_approx"] == "nan"  # approximation needs P > 1


def test_fig4_explicit_grid(capsys):
    code, out, _ = run(capsys, "fig4_nae_thr_vs_p", "--p-db", "0:50:5dB", "--eps", "1,0.1,0.01", "--n", "4",
                       "--no-timestamp")
    assert code == 0 and len(table(out)) == 33


def test_design_nae_row(capsys):
    code, out, _ = run(capsys, "design_nae", "--rs", "2", "--eps", "0.01", "--n", "4", "--p-db", "20",
                       "--no-timestamp")
    (row,) = table(out)
    d = nae.delay_optimal_design(2.0, SecrecyBudget(0.01, 4), SystemConfig.from_db(4, 20.0))
    assert float(row["phi"]) == pytest.approx(d.phi, rel=1e-8)
    assert float(row["R_b"]) == pytest.approx(3.949513, abs=1e-6)
    assert float(row["mu"]) == pytest.approx(0.695986, abs=1e-6)
    assert float(row["p_tx"]) == pytest.approx(0.994360, abs=1e-6)


def test_design_ae_silent_row(capsys):
    code, out, _ = run(capsys, "design_ae", "--h2", "0.01,1", "--no-timestamp")
    silent, active = table(out)
    assert silent["transmitting"] == "0" and float(silent["R_s"]) == 0.0
    assert float(active["R_s"]) == pytest.approx(2.494694, abs=1e-6)


def test_validate_row_matches_library(capsys):
    code, out, _ = run(capsys, "validate", "--phi", "0.3", "--n", "4", "--trials", "100000", "--seed", "5",
                       "--no-timestamp")
    (row,) = table(out)
    assert float(row["max_deviation"]) == pytest.approx(sim.validate_eve_ccdf(0.3, 4, 100_000, 5), rel=1e-8)


def test_byte_identical_reruns(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["campaign", "--scheme", "nae,ae", "--trials", "20000", "--seed", "9",
                     "--out", str(p), "--no-timestamp"]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r" not in paths[0].read_bytes()


def test_timestamp_confined_to_meta(capsys):
    _, a, _ = run(capsys, "design_nae")
    _, b, _ = run(capsys, "design_nae", "--no-timestamp")
    assert "timestamp=" in a.splitlines()[0] and "timestamp=" not in b
    assert a.splitlines()[1:] == b.splitlines()[1:]


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[DEFAULT]\nseed = 3\n\n[design_nae]\nrs = 1,2\np_db = 30dB\n")
    code, out, _ = run(capsys, "design_nae", "--config", str(cfg), "--no-timestamp")
    data = table(out)
    assert [r["R_s"] for r in data] == ["1", "2"] and data[0]["P_dB"] == "30"
    assert "seed=3" in out.splitlines()[0]
    code, out, _ = run(capsys, "design_nae", "--config", str(cfg), "--rs", "3", "--no-timestamp")
    assert [r["R_s"] for r in table(out)] == ["3"]


def test_parameter_errors_name_field(capsys):
    for argv, field in [(["fig4_nae_thr_vs_p", "--eps", "0"], "eps"),
                        (["fig4_nae_thr_vs_p", "--n", "1"], "n"),
                        (["fig4_nae_thr_vs_p", "--p-db", "abc"], "p_db"),
                        (["fig2_pmin", "--delta", "1.5"], "delta"),
                        (["campaign", "--scheme", "xyz"], "scheme"),
                        (["design_nae", "--seed", "-1"], "seed")]:
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert f"{field}:" in err


def test_io_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "design_nae", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and err


def test_parse_list():
    assert parse_list("0:10:2.5", "p_db") == [0.0, 2.5, 5.0, 7.5, 10.0]
    assert parse_list("10dB, 20 dB", "p_db") == [10.0, 20.0]
    assert parse_list("2:8:2", "n") == [2, 4, 6, 8]
    with pytest.raises(ParameterError):
        parse_list("0:1:0.3", "p_db")
    with pytest.raises(ParameterError):
        parse_list("2.5", "n")
    with pytest.raises(ParameterError):
        parse_list("1,,2", "eps")


def test_experiment_spec_validation():
    with pytest.raises(ParameterError) as info:
        ExperimentSpec("fig4_nae_thr_vs_p", {"p_db": [math.inf]})
    assert info.value.field == "p_db"
    with pytest.raises(ParameterError):
        ExperimentSpec("fig4_nae_thr_vs_p", {"eps": []})
    with pytest.raises(ParameterError):
        ExperimentSpec("fig9")


def test_analytic_columns_recomputable_from_library():
    spec = ExperimentSpec("fig3_thr_vs_rs", {"n": [4], "rs": [1.0, 3.0]}, timestamp=False)
    header, *data = rows(spec)
    for row in data:
        r = dict(zip(header, row))
        d = nae.delay_optimal_design(r["R_s"], SecrecyBudget(r["epsilon"], 4), SystemConfig.from_db(4, r["P_dB"]))
        assert r["eta"] == d.throughput


def test_all_experiments_render_small_grids():
    small = {
        "fig1_tradeoff": {"eps": [0.01, 1.0]},
        "fig2_pmin": {"n": [4, 8]},
        "fig3_thr_vs_rs": {"rs": [2.0]},
        "fig4_nae_thr_vs_p": {"p_db": [20.0]},
        "fig5_ae_thr_vs_p": {"p_db": [20.0]},
        "fig6_gain_vs_eps": {"eps": [0.01], "n": [4]},
        "campaign": {"trials": [1000], "scheme": ["nae", "ae"]},
        "validate": {"trials": [10_000]},
    }
    for name, params in small.items():
        text = render(ExperimentSpec(name, params, timestamp=False))
        lines = text.split("\n")
        assert lines[-1] == "" and len(lines) >= 4
        width = len(lines[1].split(","))
        assert all(len(line.split(",")) == width for line in lines[2:-1])
