import argparse
import json
import math

import numpy as np
import pytest
from scipy.stats import poisson

from hcs_lab.cli import KERR_HEADER, main, parse_angle, parse_complex, read_config
from hcs_lab.output import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- parsing -------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi", math.pi),
        ("-pi", -math.pi),
        ("pi/2", math.pi / 2),
        ("0.75pi", 0.75 * math.pi),
        ("3pi/4", 0.75 * math.pi),
        ("-pi/2", -math.pi / 2),
        ("1.25", 1.25),
        ("2*pi", 2 * math.pi),
        ("1e-3", 1e-3),
    ],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["", "pie", "1/", "abc", "pi pi"])
def test_parse_angle_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_angle(text)


def test_parse_complex():
    assert parse_complex("1,0") == 1
    assert parse_complex("-0.5, 2") == complex(-0.5, 2)
    assert parse_complex("3") == 3
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex("1,2,3")


# --- documented examples ----------------------------------------------------------


def test_wigner_point(capsys):
    code, out, _ = run(capsys, "wigner", "--epsilon", "1", "--alpha", "1,0", "--point", "1,0")
    assert code == 0
    assert float(out) == pytest.approx(2 / math.pi, abs=1e-9)
    assert f"{float(out):.6f}" == "0.636620"


def test_wigner_point_parity(capsys):
    code, out, _ = run(capsys, "wigner", "--epsilon", "0.5", "--alpha", "1,0", "--theta", "pi", "--point", "1,0", "--method", "parity")
    assert code == 0
    assert float(out) == pytest.approx(-2 / math.pi, abs=1e-9)


def test_photon_dist_no_vacuum(capsys, tmp_path):
    out_file = tmp_path / "p.csv"
    code, _, _ = run(capsys, "photon-dist", "--epsilon", "0", "--alpha", "2,0", "--n-max", "12", "-o", str(out_file))
    assert code == 0
    meta, header, rows = read_csv(out_file)
    assert header == ["n", "P_eps0"]
    assert rows[0, 0] == 0 and rows[0, 1] == 0
    assert rows.shape == (13, 2)
    assert meta["tool"] == "hcs-lab" and "version" in meta


def test_photon_dist_multi_eps_stdout(capsys):
    code, out, _ = run(capsys, "photon-dist", "--epsilon", "0,1", "--alpha", "2,0", "--n-max", "5")
    assert code == 0
    lines = [line for line in out.splitlines() if not line.startswith("#")]
    assert lines[0] == "n,P_eps0,P_eps1"
    p1 = [float(line.split(",")[2]) for line in lines[1:]]
    np.testing.assert_allclose(p1, poisson.pmf(np.arange(6), 4), atol=1e-11)


def test_mandel_example(capsys):
    code, out, _ = run(capsys, "mandel", "--epsilon", "0.5", "--alpha", "1,0", "--theta", "pi", "--phi", "0")
    assert code == 0
    assert float(out) == pytest.approx(0.5, abs=1e-9)


def test_alpha_polar_flags(capsys):
    code, out, _ = run(capsys, "skew", "--epsilon", "0.5", "--alpha-mag", "1", "--alpha-arg", "0", "--theta", "pi")
    assert code == 0 and float(out) == pytest.approx(1.5, abs=1e-9)


def test_other_metrics(capsys):
    assert run(capsys, "quad-squeeze", "--epsilon", "1", "--alpha", "1,1", "--phi-quad", "pi/3")[0] == 0
    code, out, _ = run(capsys, "as-squeeze", "--epsilon", "0.5", "--alpha", "2,0")
    assert code == 0 and -1 <= float(out) < 0
    code, out, _ = run(capsys, "as-squeeze", "--epsilon", "0.5", "--alpha", "2,0", "--ymin")
    assert code == 0 and float(out) < 0


# --- exit codes ----------------------------------------------------------------------


def test_exit_parameter_errors(capsys):
    assert run(capsys, "mandel", "--epsilon", "1.5", "--alpha", "1,0")[0] == 2
    assert run(capsys, "mandel", "--theta", "nonsense")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "mandel", "--alpha", "1,0", "--alpha-mag", "1")[0] == 2
    code, _, err = run(capsys, "mandel", "--epsilon", "1", "--sweep-var", "theta", "--sweep-steps", "1")
    assert code == 2 and "sweep-steps" in err


def test_exit_numerical_error(capsys):
    # vacuum: the Mandel parameter is undefined
    code, _, err = run(capsys, "mandel", "--epsilon", "1", "--alpha", "0,0")
    assert code == 3 and "VacuumState" in err
    code, _, err = run(capsys, "mandel", "--epsilon", "0.5", "--alpha", "3,0", "--cutoff", "8")
    assert code == 3 and "CutoffInsufficient" in err


def test_lenient_flag_downgrades_to_warning(capsys):
    with pytest.warns(UserWarning):
        code, out, _ = run(capsys, "mandel", "--epsilon", "0.5", "--alpha", "3,0", "--cutoff", "8", "--lenient")
    assert code == 0 and math.isfinite(float(out))


def test_negative_values_after_flags(capsys):
    code, out, _ = run(capsys, "wigner", "--epsilon", "1", "--alpha", "-1,-0.5", "--point", "-1,-0.5")
    assert code == 0 and float(out) == pytest.approx(2 / math.pi, abs=1e-12)
    code, out, _ = run(capsys, "skew", "--epsilon", "0.5", "--alpha", "1,0", "--theta", "-pi")
    assert code == 0 and float(out) == pytest.approx(1.5, abs=1e-9)


def test_exit_herald_failure(capsys):
    code, _, err = run(capsys, "kerr-sim", "--phi0", "0", "--t", str(1 / math.sqrt(2)))
    assert code == 4 and "herald" in err


# --- sweeps and formats ---------------------------------------------------------


def test_metric_sweep_csv(capsys, tmp_path):
    f = tmp_path / "q.csv"
    code, _, _ = run(
        capsys, "mandel", "--epsilon", "0,1", "--alpha", "1,0",
        "--sweep-var", "alpha-mag", "--sweep-from", "0.5", "--sweep-to", "2", "--sweep-steps", "4", "-o", str(f),
    )
    assert code == 0
    meta, header, rows = read_csv(f)
    assert header == ["sweep_value", "Q_eps0", "Q_eps1"]
    np.testing.assert_allclose(rows[:, 0], [0.5, 1.0, 1.5, 2.0])
    np.testing.assert_allclose(rows[:, 2], 0, atol=1e-9)
    assert meta["sweep"] == "alpha-mag"


def test_phi_quad_sweep_and_svg(capsys, tmp_path):
    f = tmp_path / "s.svg"
    code, _, _ = run(
        capsys, "quad-squeeze", "--epsilon", "0.75", "--alpha", "1.5,0",
        "--sweep-var", "phi-quad", "--sweep-from", "0", "--sweep-to", "pi", "--sweep-steps", "9", "-o", str(f),
    )
    assert code == 0
    text = f.read_text()
    assert text.startswith("<svg") and "polyline" in text


def test_json_output(capsys, tmp_path):
    f = tmp_path / "p.json"
    assert run(capsys, "photon-dist", "--epsilon", "0.5", "--alpha", "1,0", "--n-max", "3", "-o", str(f))[0] == 0
    data = json.loads(f.read_text())
    assert data["n"] == [0, 1, 2, 3]


def test_wigner_grid_csv_and_svg(capsys, tmp_path):
    f = tmp_path / "w.csv"
    code, _, _ = run(
        capsys, "wigner", "--epsilon", "0.5", "--alpha", "1,0", "--theta", "pi",
        "--bounds", "-3,5,-4,4", "--nx", "21", "--np", "11", "-o", str(f),
    )
    assert code == 0
    meta, header, rows = read_csv(f)
    assert header == ["x", "p", "W"]
    assert rows.shape == (21 * 11, 3)
    assert float(meta["negative_volume"]) > 0
    g = tmp_path / "w.svg"
    assert run(capsys, "wigner", "--epsilon", "0", "--nx", "11", "--np", "11", "-o", str(g))[0] == 0
    assert "<rect" in g.read_text()


def test_wigner_bad_bounds(capsys):
    assert run(capsys, "wigner", "--bounds", "1,0,0,1")[0] == 2


def test_kerr_sim_csv(capsys, tmp_path):
    f = tmp_path / "k.csv"
    code, _, _ = run(capsys, "kerr-sim", "--alpha", "1,0", "--phi0", "0.01", "--t-steps", "5", "--no-wigner", "-o", str(f))
    assert code == 0
    meta, header, rows = read_csv(f)
    assert header == KERR_HEADER
    assert rows.shape == (5, 8)
    assert meta["evolution"] == "exact"
    assert "cutoff" in meta


def test_kerr_single_point(capsys):
    code, out, _ = run(capsys, "kerr-sim", "--phi0", "0.001", "--t", str(1 / math.sqrt(2)))
    assert code == 0
    vals = dict(line.split("=") for line in out.split())
    assert float(vals["epsilon_fit"]) <= 1e-6


# --- determinism and config ------------------------------------------------------


def test_outputs_are_byte_identical(capsys, tmp_path):
    args = ["kerr-sim", "--t-steps", "4", "--phi0", "0.02"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "-o", str(a))[0] == 0
    assert run(capsys, *args, "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# displaced photon\nepsilon = 0.5\nalpha = 1,0\ntheta = pi\nlenient = false\n")
    assert read_config(cfg) == ["--epsilon", "0.5", "--alpha", "1,0", "--theta", "pi"]
    code, out, _ = run(capsys, "mandel", "--config", str(cfg))
    assert code == 0 and float(out) == pytest.approx(0.5, abs=1e-9)
    # explicit flags after the subcommand override the file
    code, out, _ = run(capsys, "mandel", "--config", str(cfg), "--epsilon", "1")
    assert code == 0 and float(out) == pytest.approx(0.0, abs=1e-9)


def test_config_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("epsilon\n")
    assert run(capsys, "mandel", "--config", str(bad))[0] == 2
    assert run(capsys, "mandel", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_validate_command(capsys, tmp_path):
    f = tmp_path / "report.json"
    code, out, _ = run(capsys, "validate", "--draws", "10", "-o", str(f))
    assert code == 0
    data = json.loads(f.read_text())
    assert data["draws"] == 10
    assert any(r["formula"] == "adag2a2_as_printed" for r in data["rows"])
    assert "discrepancy row(s)" in out


def test_reproduce_subset(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce-figures", "--out-dir", str(tmp_path), "--only", "fig1")
    assert code == 0 and "fig1: ok" in out
    assert (tmp_path / "fig1.csv").exists() and (tmp_path / "fig1.svg").exists()


def test_thread_cap_env(monkeypatch):
    from hcs_lab.parallel import max_workers, pmap

    monkeypatch.setenv("HCS_LAB_THREADS", "1")
    assert max_workers() == 1
    assert pmap(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]
    monkeypatch.setenv("HCS_LAB_THREADS", "3")
    assert max_workers() == 3
