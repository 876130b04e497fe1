import json

import numpy as np
import pytest

from braggphase.cli import main


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def csv_bytes(out):
    return {p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))}


@pytest.mark.parametrize("command, preset", [
    ("spectrum", "paper-fig2c"), ("heterodyne", "paper-fig3"), ("moving", "paper-fig4"),
])
def test_same_seed_byte_identical(tmp_path, command, preset):
    c1, a = run(tmp_path, "a", command, "--preset", preset, "--seed", "17")
    c2, b = run(tmp_path, "b", command, "--preset", preset, "--seed", "17")
    assert c1 == c2 == 0
    assert csv_bytes(a) and csv_bytes(a) == csv_bytes(b)
    assert (a / "manifest.json").read_bytes() == (b / "manifest.json").read_bytes()


def test_different_seed_changes_spectrum(tmp_path):
    _, a = run(tmp_path, "a", "spectrum", "--seed", "1")
    _, b = run(tmp_path, "b", "spectrum", "--seed", "2")
    assert csv_bytes(a)["spectrum.csv"] != csv_bytes(b)["spectrum.csv"]


def test_manifest_reproduces_run(tmp_path):
    _, a = run(tmp_path, "a", "heterodyne", "--seed", "4")
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["seed"] == 4
    assert set(manifest["versions"]) >= {"braggphase", "numpy", "scipy", "python"}
    assert "timestamp" not in json.dumps(manifest)
    code, b = run(tmp_path, "b", "heterodyne", "--config", str(a / "resolved_config.ini"))
    assert code == 0
    assert csv_bytes(a) == csv_bytes(b)


def test_spectrum_outputs(tmp_path):
    code, out = run(tmp_path, "s", "spectrum")
    assert code == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "detuning_rad_s,abs_r,arg_r"
    assert len(lines) == 1025
    assert (out / "reflection.csv").read_text().startswith("detuning_rad_s,re_r,im_r\n")
    summary = json.loads((out / "manifest.json").read_text())["summary"]
    assert summary["peak_ratio"] == pytest.approx(1 / 3, rel=0.15)
    assert summary["peak_separation_mhz"] == pytest.approx(40, rel=0.2)


def test_zero_atoms_zero_column(tmp_path):
    cfg = tmp_path / "zero.ini"
    cfg.write_text("[lattice]\nn_tot = 0\n[spectrum]\nsamples = 1000\n")
    code, out = run(tmp_path, "z", "spectrum", "--config", str(cfg))
    assert code == 0
    data = np.loadtxt(out / "spectrum.csv", delimiter=",", skiprows=1)
    assert np.all(data[:, 1] == 0)


def test_zero_broadening_bare_profile(tmp_path):
    cfg = tmp_path / "bare.ini"
    cfg.write_text("[lattice]\nlight_shift_ratio = 0\n[spectrum]\nsamples = 10\n")
    code, out = run(tmp_path, "bare", "spectrum", "--config", str(cfg))
    assert code == 0
    data = np.loadtxt(out / "spectrum.csv", delimiter=",", skiprows=1)
    d, amp = data[:, 0], data[:, 1]
    # strongest line at zero detuning carries the operating reflectivity
    assert amp[np.argmin(np.abs(d))] == pytest.approx(amp.max(), rel=1e-3)
    assert amp.max() == pytest.approx(0.0291, abs=1e-3)


def test_heterodyne_outputs_and_closure(tmp_path):
    code, out = run(tmp_path, "h", "heterodyne")
    assert code == 0
    report = json.loads((out / "closure.json").read_text())
    assert report["amplitude_rms_relative"] < 0.01
    assert report["phase_rms_rad"] < 0.02
    assert abs(report["beat_peak_hz"] - 5.4e3) <= report["bin_hz"]
    assert (out / "trace.csv").read_text().startswith("time_s,value,detuning_rad_s\n")
    assert (out / "demod.csv").read_text().startswith("time_s,u_c,u_s,amplitude,phase_rad\n")
    assert (out / "beat_spectrum.csv").read_text().startswith("freq_hz,magnitude\n")


def test_noisy_heterodyne_runs(tmp_path):
    cfg = tmp_path / "noisy.ini"
    cfg.write_text("[noise]\nlaser_linewidth_hz = 0.2\nadditive_rms_pw = 0.1\n")
    code, out = run(tmp_path, "n", "heterodyne", "--config", str(cfg))
    assert code == 0
    report = json.loads((out / "closure.json").read_text())
    assert report["noise_enabled"]
    # visibly noisy but still tracking the generating profile
    assert 0 < report["phase_rms_rad"] < 0.5


def test_moving_outputs(tmp_path):
    code, out = run(tmp_path, "m", "moving")
    assert code == 0
    peaks = json.loads((out / "peaks.json").read_text())
    assert abs(peaks["bragg_hz"] - 15e3) <= peaks["bin_hz"]
    assert abs(peaks["doppler_hz"] - 37e3) <= peaks["bin_hz"]
    assert abs(peaks["reference_hz"] - 52e3) <= peaks["bin_hz"]
    for name in ("doppler_spectrum.csv", "reference_spectrum.csv", "bragg_spectrum.csv"):
        assert (out / name).exists()


def test_moving_sign_reversed_velocity(tmp_path):
    cfg = tmp_path / "rev.ini"
    cfg.write_text("[sweep]\npump_difference_khz = -37\nsample_rate_hz = 1000000\n")
    code, out = run(tmp_path, "r", "moving", "--preset", "paper-fig4", "--config", str(cfg))
    assert code == 0
    peaks = json.loads((out / "peaks.json").read_text())
    assert abs(peaks["bragg_hz"] - 89e3) <= peaks["bin_hz"]


def test_moving_zero_velocity(tmp_path):
    cfg = tmp_path / "still.ini"
    cfg.write_text("[sweep]\npump_difference_khz = 0\n")
    code, out = run(tmp_path, "v0", "moving", "--config", str(cfg))
    assert code == 0
    peaks = json.loads((out / "peaks.json").read_text())
    assert abs(peaks["bragg_hz"] - peaks["reference_hz"]) <= peaks["bin_hz"]


def test_validate_default_passes(capsys):
    assert main(["validate"]) == 0
    text = capsys.readouterr().out
    assert "[FAIL]" not in text
    assert "validation passed" in text


def test_validate_nyquist_violation(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[sweep]\nsample_rate_hz = 8000\n")
    assert main(["validate", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "Nyquist" in err and ":2:" in err


def test_validate_reports_reflectivity_above_unity(tmp_path, capsys):
    cfg = tmp_path / "bright.ini"
    cfg.write_text("[scatter]\nreference_power_pw = 1e9\n")
    assert main(["validate", "--config", str(cfg)]) == 1
    assert "[FAIL] |r| <= 1" in capsys.readouterr().out


def test_validate_writes_report(tmp_path):
    code, out = run(tmp_path, "v", "validate", "--preset", "paper-fig4")
    assert code == 0
    assert json.loads((out / "validate.json").read_text())["passed"]


def test_missing_config_is_io_error(tmp_path):
    assert main(["spectrum", "--config", str(tmp_path / "nope.ini"),
                 "--out", str(tmp_path / "o")]) == 2


def test_unwritable_output_is_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["spectrum", "--out", str(blocker / "sub")]) == 2


def test_seed_range_checked():
    with pytest.raises(SystemExit):
        main(["spectrum", "--seed", "-1"])
