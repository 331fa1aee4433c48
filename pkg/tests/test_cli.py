import io
import json
import math

import pandas as pd
import pytest

from pdmkepler import cli
from pdmkepler.model import ModelParams, QuantumNumbers
from pdmkepler.spectrum import energy_free_case, sommerfeld_energy

ALPHA = 0.0072973525693


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    return pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")


def test_spectrum_hydrogen_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--alpha", str(ALPHA), "--a", "0", "--n-max", "2")
    assert code == 0
    assert out.startswith("# version=")
    frame = read_csv(out)
    assert list(frame["label"]) == ["1S1/2", "2S1/2", "2P1/2", "2P3/2"]
    by_label = frame.set_index("label")
    assert by_label.loc["2S1/2", "epsilon"] == by_label.loc["2P1/2", "epsilon"]
    qn = QuantumNumbers(n_r=0, l=1, two_j=3)
    assert by_label.loc["2P3/2", "epsilon"] == pytest.approx(sommerfeld_energy(ALPHA, qn), rel=1e-14)
    assert by_label.loc["1S1/2", "binding_rydberg"] == pytest.approx(-1.0, rel=1e-4)


def test_spectrum_single_level(capsys):
    code, out, _ = run(capsys, "spectrum", "--alpha", "0.3", "--abar", "1", "--n-max", "3")
    assert code == 0
    assert (read_csv(out)["epsilon"] == 1.0).all()


def test_spectrum_free_case(capsys):
    code, out, _ = run(capsys, "spectrum", "--alpha", "0", "--a", "-1", "--n-max", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    params = ModelParams(alpha=0.0, a=-1.0)
    for row in payload["rows"]:
        qn = QuantumNumbers(n_r=row["n_r"], l=row["l"], two_j=int(round(2 * row["j"])))
        assert row["epsilon"] == pytest.approx(energy_free_case(params, qn), rel=1e-14)
        assert row["binding_rydberg"] is None


def test_no_bound_states_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--alpha", "0.3", "--a", "0.5")
    assert code == cli.EXIT_DOMAIN
    assert "no bound states: a ≥ e²/mc²" in err


def test_a_and_abar_are_exclusive(capsys):
    code, _, _ = run(capsys, "spectrum", "--alpha", "0.3", "--a", "0.1", "--abar", "0.2")
    assert code == cli.EXIT_USAGE


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "spectrum", "--alpha", "0.3", "--a", "0", "--bogus")
    assert code == cli.EXIT_USAGE


def test_invalid_quantum_numbers(capsys):
    code, _, _ = run(capsys, "wavefunction", "--alpha", "0.3", "--a", "0", "--l", "0", "--two-j", "3")
    assert code == cli.EXIT_USAGE


def test_wavefunction_needs_points(capsys):
    code, _, _ = run(capsys, "wavefunction", "--alpha", "0.3", "--a", "0", "--points", "0")
    assert code == cli.EXIT_USAGE


def test_ordering_classical_fall_is_domain_error(capsys):
    code, _, err = run(capsys, "ordering", "--a", "1", "--alpha", "1", "--n-r", "0")
    assert code == cli.EXIT_DOMAIN
    assert "fall to center" in err


def test_json_round_trip_is_exact(capsys):
    _, out, _ = run(capsys, "spectrum", "--alpha", "0.6", "--a", "-0.5", "--n-max", "3", "--format", "json")
    rows = json.loads(out)["rows"]
    assert json.dumps(rows) in out


def test_output_is_deterministic(capsys):
    argv = ("scan", "--alpha", "0.3", "--steps", "11", "--n-max", "2")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_scan_sweep(capsys):
    code, out, _ = run(capsys, "scan", "--alpha", "0.3", "--steps", "31", "--extra-a", "-100", "0")
    assert code == 0
    frame = read_csv(out)
    ground = frame["epsilon_1S1/2"]
    assert list(ground) == sorted(ground)
    assert frame["a"].iloc[-1] == pytest.approx(0.3, rel=1e-15)
    assert ground.iloc[-1] == 1.0
    assert frame.set_index("a").loc[0.0, "epsilon_1S1/2"] == pytest.approx(math.sqrt(1.0 - 0.09), rel=1e-14)


def test_scan_marks_missing_states(capsys):
    code, out, _ = run(capsys, "scan", "--alpha", "0.3", "--a-min", "0.2", "--a-max", "0.5", "--steps", "4")
    assert code == 0
    frame = read_csv(out)
    unbound = frame[frame["a"] > 0.3]
    assert len(unbound) == 2
    assert unbound["epsilon_1S1/2"].isna().all()
    assert unbound["status"].str.contains("no bound states").all()


def test_scan_deep_tail_for_free_case(capsys):
    _, out, _ = run(capsys, "scan", "--alpha", "0", "--a-min", "-3", "--a-max", "-1", "--steps", "3",
                    "--extra-a", "-100")
    row = read_csv(out).set_index("a").loc[-100.0]
    assert row["epsilon_1S1/2"] == pytest.approx(1.0 / math.sqrt(1.0 + 100.0 ** 2), rel=1e-4)


def test_expansion_ratios(capsys):
    code, out, _ = run(capsys, "verify", "--expansion")
    assert code == 0
    ratios = read_csv(out)["ratio"].dropna()
    assert ((ratios > 40.0) & (ratios < 90.0)).all()


def test_wavefunction_sample(capsys, tmp_path):
    target = tmp_path / "wf.csv"
    code, _, _ = run(capsys, "wavefunction", "--alpha", "0.2", "--a", "-0.4", "--n-r", "2",
                     "--points", "50", "--output", str(target))
    assert code == 0
    text = target.read_text()
    assert "# state=3S1/2" in text
    frame = read_csv(text)
    assert list(frame.columns) == ["r", "R", "u"]
    assert len(frame) == 50


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PDMKEPLER_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "spectrum", "--alpha", "0.1", "--a", "0", "--format", "json")
    assert code == 0
    assert out == ""
    assert json.loads((tmp_path / "spectrum.json").read_text())["metadata"]["command"] == "spectrum"


@pytest.mark.slow
def test_verify_single_point(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "0.3", "--a", "0", "--n-r-max", "1")
    assert code == 0
    frame = read_csv(out)
    assert len(frame) == 4
    assert (frame["status"] == "pass").all()
    assert (frame["deviation"] < 1e-6).all()


@pytest.mark.slow
def test_verify_reports_domain_errors(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "1.2", "--a", "0", "--n-r-max", "0")
    assert code == cli.EXIT_DOMAIN
    frame = read_csv(out)
    assert "domain-error" in set(frame["status"])


@pytest.mark.slow
def test_ordering_table(capsys):
    code, out, _ = run(capsys, "ordering", "--a", "-0.3", "--alpha", "1", "--n-r", "2", "5")
    assert code == 0
    frame = read_csv(out)
    assert list(frame.columns) == ["n_r", "ordering", "E", "spread", "E_wkb"]
    assert len(frame) == 6
    assert (frame["E"] < 0.0).all()
