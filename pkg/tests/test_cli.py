import json

import click
import pytest
from click.testing import CliRunner

from spikeflow.cli import _friendly, main
from spikeflow.errors import NumericError


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0
    assert "spikeflow" in res.output


def test_simulate_writes_graphs_and_manifest(runner, tmp_path):
    out = tmp_path / "sim"
    res = runner.invoke(
        main,
        ["simulate", "--n", "50", "--seed", "4", "--replicates", "2", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert (out / "graph_rep0.csv").exists()
    assert (out / "graph_rep1.json").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["tool"] == "spikeflow"
    assert manifest["command"] == "simulate"
    assert manifest["params"]["n"] == 50
    assert sorted(manifest["outputs"]) == [
        "graph_rep0.csv",
        "graph_rep0.json",
        "graph_rep1.csv",
        "graph_rep1.json",
    ]


def test_rerun_reproduces_bytes(runner, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    res = runner.invoke(main, ["simulate", "--n", "60", "--seed", "9", "--out", str(a)])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["rerun", str(a / "manifest.json"), "--out", str(b)])
    assert res.exit_code == 0, res.output
    assert (a / "graph_rep0.csv").read_bytes() == (b / "graph_rep0.csv").read_bytes()
    assert (a / "graph_rep0.json").read_bytes() == (b / "graph_rep0.json").read_bytes()


def test_threads_do_not_change_bytes(runner, tmp_path):
    outs = {}
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        res = runner.invoke(
            main,
            ["simulate", "--n", "300", "--seed", "2", "--replicates", "2",
             "--threads", threads, "--out", str(out)],
        )
        assert res.exit_code == 0, res.output
        outs[threads] = out
    for name in ("graph_rep0.csv", "graph_rep1.csv"):
        assert (outs["1"] / name).read_bytes() == (outs["4"] / name).read_bytes()


def test_spectrum_from_graphs(runner, tmp_path):
    sim = tmp_path / "sim"
    runner.invoke(main, ["simulate", "--n", "80", "--seed", "1", "--replicates", "2", "--out", str(sim)])
    out = tmp_path / "spec"
    res = runner.invoke(
        main,
        ["spectrum", "--kind", "kappa", "--eps-exponent", "3/4",
         "--from-graphs", str(sim), "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    text = (out / "spectra.csv").read_text()
    assert text.splitlines()[0] == "kind,n,alpha,eps,semantics,replicate,rank,atom"
    assert text.count("kappa,80") == 160  # 2 replicates x 80 atoms


def test_spectrum_usage_errors(runner, tmp_path):
    res = runner.invoke(main, ["spectrum", "--kind", "kappa", "--n", "50", "--out", str(tmp_path / "x")])
    assert res.exit_code == 2
    assert "eps-exponent" in res.output
    res = runner.invoke(
        main,
        ["spectrum", "--kind", "mu", "--eps-exponent", "3/4", "--n", "50", "--out", str(tmp_path / "y")],
    )
    assert res.exit_code == 2
    res = runner.invoke(main, ["spectrum", "--kind", "mu", "--out", str(tmp_path / "z")])
    assert res.exit_code == 2


def test_simulate_degrees_flag(runner, tmp_path):
    out = tmp_path / "deg"
    res = runner.invoke(
        main,
        ["simulate", "--n", "400", "--seed", "6", "--degrees", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    lines = (out / "degrees_rep0.csv").read_text().splitlines()
    assert lines[0] == "rank,out_degree,in_degree,total_degree"
    assert len(lines) == 401
    fit = json.loads((out / "powerlaw_rep0.json").read_text())
    assert fit["fitted"] is True
    assert fit["exponent"] > 1.0
    manifest = json.loads((out / "manifest.json").read_text())
    assert "degrees_rep0.csv" in manifest["outputs"]


def test_poisson_remove_is_a_usage_error(runner, tmp_path):
    res = runner.invoke(
        main,
        ["simulate", "--n", "20", "--engine", "poisson", "--semantics", "remove",
         "--out", str(tmp_path / "x")],
    )
    assert res.exit_code == 2
    assert "poisson" in res.output


def test_oracle_tables(runner, tmp_path):
    out = tmp_path / "orc"
    res = runner.invoke(
        main,
        ["oracle", "--what", "k-spectrum", "--count", "4", "--trunc-n", "60", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    lines = (out / "oracle.csv").read_text().splitlines()
    assert lines[0] == "k,j1_zero,lambda_K,lambda_M_truncN,provenance"
    assert len(lines) == 5

    out2 = tmp_path / "edge"
    res = runner.invoke(
        main,
        ["oracle", "--what", "edge-prob", "--n", "12", "--semantics", "stay", "--out", str(out2)],
    )
    assert res.exit_code == 0, res.output
    assert (out2 / "visit_probability.csv").exists()
    edges = (out2 / "edge_probability.csv").read_text().splitlines()
    assert len(edges) == 1 + 12 * 13 // 2


def test_compare_with_custom_gates(runner, tmp_path):
    gates = tmp_path / "gates.ini"
    gates.write_text("[kappa]\ntop_ranks = 1\nrel_err_finite_max = 1.0\n")
    out = tmp_path / "cmp"
    res = runner.invoke(
        main,
        ["compare", "--kind", "kappa", "--n", "150", "--replicates", "3",
         "--seed", "3", "--gates", str(gates), "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert "[PASS]" in res.output
    assert (out / "comparison.csv").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "compare"

    strict = tmp_path / "strict.ini"
    strict.write_text("[kappa]\ntop_ranks = 1\nrel_err_finite_max = 0.000001\n")
    res = runner.invoke(
        main,
        ["compare", "--kind", "kappa", "--n", "150", "--replicates", "3",
         "--seed", "3", "--gates", str(strict), "--out", str(tmp_path / "cmp2")],
    )
    assert res.exit_code == 1
    assert "[FAIL]" in res.output


def test_missing_gates_file(runner, tmp_path):
    res = runner.invoke(
        main,
        ["compare", "--kind", "mu", "--n", "100", "--gates", str(tmp_path / "nope.ini"),
         "--out", str(tmp_path / "x")],
    )
    assert res.exit_code == 2


def test_sweep_small_grid(runner, tmp_path):
    gates = tmp_path / "gates.ini"
    gates.write_text(
        "[sweep]\nrel_err_finite_each_max = 1.0\nrel_err_limit_final_max = 1.0\n"
        "min_improving_steps = 0\n"
    )
    out = tmp_path / "sweep"
    res = runner.invoke(
        main,
        ["sweep", "--n-grid", "64,128", "--replicates", "2", "--seed", "5",
         "--gates", str(gates), "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    assert (out / "sweep.csv").exists()
    assert res.output.count("[PASS]") == 3


def test_bad_n_grid(runner, tmp_path):
    res = runner.invoke(main, ["sweep", "--n-grid", "a,b", "--out", str(tmp_path / "x")])
    assert res.exit_code == 2


def test_env_var_overrides_output_dir(runner, tmp_path, monkeypatch):
    target = tmp_path / "redirected"
    monkeypatch.setenv("SPIKEFLOW_OUT", str(target))
    res = runner.invoke(main, ["simulate", "--n", "30", "--out", str(tmp_path / "ignored")])
    assert res.exit_code == 0, res.output
    assert (target / "graph_rep0.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_numeric_error_maps_to_exit_3(runner):
    @click.command()
    @_friendly
    def boom():
        raise NumericError("solver fell over")

    res = runner.invoke(boom, [])
    assert res.exit_code == 3
