import csv
import io
import json
import math
import subprocess
import sys

import pytest

from entropic_bell import prob_core as pc
from entropic_bell import quantum_core as qc
from entropic_bell.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bell_violation(capsys):
    code, out, _ = run(capsys, "scenario", "bell-violation", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    first = doc["results"][0]
    assert first["name"] == "cerf_adami_quantum"
    assert first["lhs"] == pytest.approx(2.0, abs=1e-9)
    assert doc["summary"]["classical_bound_violated"] is True


def test_bell_violation_nats(capsys):
    _, out, _ = run(capsys, "scenario", "bell-violation", "--format", "json", "--log-base", "e")
    assert json.loads(out)["results"][0]["lhs"] == pytest.approx(2 * math.log(2), abs=1e-9)


def test_noiseless_chain_text(capsys):
    code, out, _ = run(capsys, "scenario", "noiseless-chain")
    assert code == 0 and "cerf_adami_classical" in out


def test_mixing_lattice(capsys):
    code, out, _ = run(capsys, "scenario", "mixing-lattice", "--sites", "2", "2",
                       "--particles", "2", "2", "--distinct", "--format", "json")
    summary = json.loads(out)["summary"]
    assert code == 0
    assert summary["entropy_of_mixing"] == pytest.approx(math.log(6))
    assert summary["omega_after"] == 6


def test_mixing_lattice_custom_k(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"k": 2.0}')
    _, out, _ = run(capsys, "scenario", "mixing-lattice", "--sites", "2", "2",
                    "--particles", "2", "2", "--distinct", "--format", "json",
                    "--thermo-config", str(cfg))
    assert json.loads(out)["summary"]["entropy_of_mixing"] == pytest.approx(2 * math.log(6))


def test_sackur_tetrode_sweep_csv(capsys):
    code, out, _ = run(capsys, "scenario", "sackur-tetrode-sweep", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    values = [float(s) for _, s in rows[1:]]
    assert code == 0 and len(values) == 41
    assert values[0] < 0 < values[-1]


def test_phase_space(capsys):
    _, out, _ = run(capsys, "scenario", "phase-space", "--dp", "1", "--dq", "0.5",
                    "--h", "1", "--format", "json")
    summary = json.loads(out)["summary"]
    assert summary["below_uncertainty_floor"] is True
    assert summary["entropy"] == pytest.approx(-math.log(2))


def test_unknown_scenario_and_missing_args(capsys):
    assert run(capsys, "scenario", "nope")[0] == 2
    assert run(capsys, "scenario", "phase-space")[0] == 2
    assert run(capsys, "check", "/nonexistent.json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["campaign", "not-a-kind"])
    assert exc.value.code == 2


def test_campaign_json_is_deterministic(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}.json"
        code = main(["campaign", "classical-bell", "--trials", "40", "--seed", "9",
                     "--format", "json", "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["seed"] == 9 and doc["summary"]["failure_count"] == 0
    for r in doc["results"]:
        assert float(repr(r["lhs"])) == r["lhs"]


def test_campaign_param_and_all_results(capsys):
    code, out, _ = run(capsys, "campaign", "mixing-order", "--trials", "5", "--param",
                       "dims=[3]", "--results", "all", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert all(r["input_descriptor"].startswith("dim=3") for r in rows)


def test_check_inputs(capsys, tmp_path):
    chain = pc.markov_chain(pc.ProbDist.uniform(2), pc.StochasticMatrix.identity(2),
                            pc.StochasticMatrix.identity(2))
    p = tmp_path / "chain.json"
    p.write_text(pc.dumps(chain))
    code, out, _ = run(capsys, "check", str(p), "--format", "json")
    assert code == 0 and len(json.loads(out)["results"]) == 7

    rho = qc.tensor(qc.DensityOperator.maximally_mixed(2), qc.bell_pair())
    q = tmp_path / "rho.json"
    q.write_text(qc.dumps(rho))
    code, out, _ = run(capsys, "check", str(q), "--format", "json")
    assert code == 0
    assert json.loads(out)["results"][0]["lhs"] == pytest.approx(2.0, abs=1e-9)

    s = tmp_path / "spectra.json"
    s.write_text(json.dumps({"spectra": [[0.5, 0.25, 0.25], [1 / 3, 1 / 3, 1 / 3]]}))
    code, out, _ = run(capsys, "check", str(s), "--format", "json")
    assert code == 0 and json.loads(out)["results"][0]["satisfied"]


def test_report_rerenders(capsys, tmp_path):
    path = tmp_path / "bell.json"
    assert main(["scenario", "bell-violation", "--format", "json", "--out", str(path)]) == 0
    code, out, _ = run(capsys, "report", str(path), "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("name,lhs")
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run(capsys, "report", str(bad))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entropic_bell", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
