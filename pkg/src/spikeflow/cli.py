"""Command line front end.

Every subcommand writes its outputs plus a ``manifest.json`` into the output
directory.  A manifest is a complete, replayable record of one invocation:
``spikeflow rerun manifest.json --out DIR`` re-executes the stored command with
the stored parameters and must reproduce the CSVs byte for byte.

Exit codes: 0 success / gates passed, 1 gates failed, 2 usage error,
3 numeric failure inside a solver.
"""

from __future__ import annotations

import configparser
import functools
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import click

from . import __version__
from .analysis import (
    EpsSchedule,
    compare_spectra,
    convergence_sweep,
    kappa_finite_oracle,
    kappa_limit_oracle,
    mu_finite_oracle,
    mu_limit_oracle,
    write_comparison_csv,
)
from .dynamics import Engine, SimulationConfig, simulate
from .errors import DomainError, NumericError
from .graph import ChargeFlowGraph, LeakSemantics
from .oracle import (
    exact_edge_probability,
    k_spectrum_nystrom,
    m_spectrum_truncated,
    write_oracle_csv,
)
from .spectra import spectral_measure_kappa, spectral_measure_mu, write_measures_csv

_SEMANTICS = click.Choice([s.value for s in LeakSemantics])
_ENGINES = click.Choice([e.value for e in Engine])


def _out_dir(out: str) -> Path:
    # SPIKEFLOW_OUT overrides the destination only; parameters stay untouched.
    path = Path(os.environ.get("SPIKEFLOW_OUT", out))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_gates(path):
    parser = configparser.ConfigParser()
    if path is not None:
        read = parser.read(path)
        if not read:
            raise DomainError(f"gates file not found: {path}")
    else:
        parser.read_string(
            resources.files("spikeflow").joinpath("gates.ini").read_text()
        )
    return parser


def _write_manifest(outdir: Path, command: str, params: dict, outputs, started: float) -> None:
    doc = {
        "tool": "spikeflow",
        "version": __version__,
        "command": command,
        "params": params,
        "outputs": sorted(outputs),
        "wall_clock_s": round(time.time() - started, 3),
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _echo_gate(name: str, ok: bool, detail: str) -> None:
    click.echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def _friendly(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainError as exc:
            raise click.UsageError(str(exc)) from exc
        except NumericError as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(3)

    return wrapper


# ---------------------------------------------------------------- runners ---
# Shared by the subcommands and by `rerun`, so a replay follows the exact same
# code path as the original invocation.


def _config_from(params: dict) -> SimulationConfig:
    return SimulationConfig(
        n=params["n"],
        alpha=params["alpha"],
        semantics=params["semantics"],
        seed=params["seed"],
        engine=params.get("engine", "unitwise"),
        replicates=params.get("replicates", 1),
        threads=params.get("threads", 1),
    )


def _write_degree_table(graph, outdir: Path, rep: int):
    import csv

    from .analysis import fit_power_law

    d = graph.degrees()
    name = f"degrees_rep{rep}.csv"
    with open(outdir / name, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["rank", "out_degree", "in_degree", "total_degree"])
        for idx in range(graph.n):
            writer.writerow([idx + 1, int(d.out_degree[idx]), int(d.in_degree[idx]),
                             int(d.total_degree[idx])])
    try:
        fit = fit_power_law(d)
        doc = {
            "fitted": True,
            "exponent": fit.exponent,
            "ccdf_slope": 1.0 - fit.exponent,
            "stderr": fit.stderr,
            "fit_range": list(fit.fit_range),
            "hill_exponent": fit.hill_exponent,
            "method": fit.method,
        }
    except (DomainError, NumericError) as exc:
        doc = {"fitted": False, "reason": str(exc)}
    fit_name = f"powerlaw_rep{rep}.json"
    with open(outdir / fit_name, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return [name, fit_name]


def _run_simulate(params: dict, outdir: Path):
    config = _config_from(params)
    outputs = []
    for rep in range(config.replicates):
        graph = simulate(config, rep)
        name = f"graph_rep{rep}.csv"
        graph.save(outdir / name)
        outputs += [name, f"graph_rep{rep}.json"]
        if params.get("degrees"):
            outputs += _write_degree_table(graph, outdir, rep)
    return outputs


def _schedule_from(params: dict) -> EpsSchedule:
    return EpsSchedule(a=Fraction(params["eps_exponent"]))


def _measures_from_graphs(params: dict, graphs):
    kind = params["kind"]
    if kind == "kappa":
        schedule = _schedule_from(params)
        return [
            spectral_measure_kappa(g, schedule.eps(g.n), replicate=rep)
            for rep, g in graphs
        ]
    return [spectral_measure_mu(g, replicate=rep) for rep, g in graphs]


def _load_graph_dir(directory: str):
    files = sorted(Path(directory).glob("graph_rep*.csv"))
    if not files:
        raise DomainError(f"no graph_rep*.csv files under {directory}")
    graphs = []
    for fallback, path in enumerate(files):
        stem = path.stem.removeprefix("graph_rep")
        rep = int(stem) if stem.isdigit() else fallback
        graphs.append((rep, ChargeFlowGraph.load(path)))
    return graphs


def _run_spectrum(params: dict, outdir: Path):
    if params.get("from_graphs"):
        graphs = _load_graph_dir(params["from_graphs"])
    else:
        config = _config_from(params)
        graphs = [(rep, simulate(config, rep)) for rep in range(config.replicates)]
    measures = _measures_from_graphs(params, graphs)
    write_measures_csv(outdir / "spectra.csv", measures)
    return ["spectra.csv"]


def _run_oracle(params: dict, outdir: Path):
    import csv

    what = params["what"]
    if what == "k-spectrum":
        write_oracle_csv(outdir / "oracle.csv", count=params["count"], trunc_n=params["trunc_n"])
        return ["oracle.csv"]
    if what == "m-spectrum":
        spectrum = m_spectrum_truncated(params["trunc_n"], count=params["count"])
        with open(outdir / "oracle.csv", "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["k", "eigenvalue", "provenance"])
            for k, value in enumerate(spectrum.eigenvalues, start=1):
                writer.writerow([k, format(value, ".17g"), spectrum.provenance])
        return ["oracle.csv"]
    if what == "nystrom":
        spectrum = k_spectrum_nystrom(T=params["t"], grid=params["grid"], count=params["count"])
        with open(outdir / "oracle.csv", "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["k", "eigenvalue", "provenance"])
            for k, value in enumerate(spectrum.eigenvalues, start=1):
                writer.writerow([k, format(value, ".17g"), spectrum.provenance])
        return ["oracle.csv"]
    if what == "edge-prob":
        probs, visits = exact_edge_probability(params["n"], params["semantics"])
        with open(outdir / "visit_probability.csv", "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["rank", "visit_probability"])
            for rank, value in enumerate(visits, start=1):
                writer.writerow([rank, format(value, ".17g")])
        with open(outdir / "edge_probability.csv", "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["i", "j", "probability"])
            n = params["n"]
            for i in range(1, n + 1):
                for j in range(1, i + 1):
                    writer.writerow([i, j, format(probs[i - 1, j - 1], ".17g")])
        return ["visit_probability.csv", "edge_probability.csv"]
    raise DomainError(f"unknown oracle table: {what}")


def _run_compare(params: dict, outdir: Path, gates):
    kind = params["kind"]
    config = _config_from(params)
    graphs = [(rep, simulate(config, rep)) for rep in range(config.replicates)]
    measures = _measures_from_graphs(params, graphs)

    top = params["top"]
    if kind == "kappa":
        schedule = _schedule_from(params)
        eps = schedule.eps(config.n)
        finite = kappa_finite_oracle(config.n, config.m, config.semantics, eps, top)
        limit = kappa_limit_oracle(config.alpha, top)
    else:
        finite = mu_finite_oracle(config.n, config.m, config.semantics, top)
        limit = mu_limit_oracle(config.alpha, top)
    report = compare_spectra(measures, finite, limit, top)
    write_comparison_csv(outdir / "comparison.csv", report)

    section = gates[kind]
    ranks = min(top, section.getint("top_ranks"))
    threshold = section.getfloat("rel_err_finite_max")
    worst = max(row.rel_err_finite for row in report.rows[:ranks])
    ok = worst <= threshold
    _echo_gate(
        f"{kind} top-{ranks} vs finite oracle",
        ok,
        f"max rel err {worst:.4f} (gate {threshold})",
    )
    return ["comparison.csv"], ok


def _run_sweep(params: dict, outdir: Path, gates):
    schedule = _schedule_from(params)
    result = convergence_sweep(
        params["n_grid"],
        params["alpha"],
        schedule,
        params["replicates"],
        seed=params["seed"],
        semantics=params["semantics"],
        kind=params["kind"],
        top=params["top"],
        threads=params.get("threads", 1),
    )
    write_comparison_csv(outdir / "sweep.csv", result.reports)

    section = gates["sweep"]
    finite_gate = section.getfloat("rel_err_finite_each_max")
    limit_gate = section.getfloat("rel_err_limit_final_max")
    steps_gate = section.getint("min_improving_steps")

    finite_errs = [report.rows[0].rel_err_finite for report in result.reports]
    ok_finite = max(finite_errs) <= finite_gate
    _echo_gate(
        "top atom vs finite oracle at every n",
        ok_finite,
        f"max rel err {max(finite_errs):.4f} (gate {finite_gate})",
    )
    ok_limit = result.final_limit_error <= limit_gate
    _echo_gate(
        "final limit error",
        ok_limit,
        f"rel err {result.final_limit_error:.4f} at n={params['n_grid'][-1]} (gate {limit_gate})",
    )
    steps = min(result.improving_steps, len(params["n_grid"]) - 1)
    ok_trend = steps >= min(steps_gate, len(params["n_grid"]) - 1)
    _echo_gate(
        "limit error decreases along the grid",
        ok_trend,
        f"{result.improving_steps} improving steps of {len(params['n_grid']) - 1}",
    )
    return ["sweep.csv"], ok_finite and ok_limit and ok_trend


# --------------------------------------------------------------- commands ---


@click.group()
@click.version_option(version=__version__, prog_name="spikeflow")
def main() -> None:
    """Winner-take-all charge-flow simulation and spectral analysis."""


@main.command()
@click.option("--n", type=int, required=True, help="Number of ranked vertices.")
@click.option("--alpha", type=float, default=1.0, show_default=True, help="Units per vertex; m = floor(alpha * n).")
@click.option("--semantics", type=_SEMANTICS, default="remove", show_default=True)
@click.option("--engine", type=_ENGINES, default="unitwise", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replicates", type=int, default=1, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--degrees", is_flag=True, help="Also write per-rank degree tables and a power-law fit.")
@click.option("--out", type=click.Path(), required=True, help="Output directory.")
@_friendly
def simulate_cmd(n, alpha, semantics, engine, seed, replicates, threads, degrees, out):
    """Sample charge-flow graphs and write one CSV per replicate."""
    started = time.time()
    params = {
        "n": n,
        "alpha": alpha,
        "semantics": semantics,
        "engine": engine,
        "seed": seed,
        "replicates": replicates,
        "threads": threads,
        "degrees": degrees,
    }
    outdir = _out_dir(out)
    outputs = _run_simulate(params, outdir)
    _write_manifest(outdir, "simulate", params, outputs, started)
    click.echo(f"wrote {len(outputs) // 2} graph(s) to {outdir}")


main.add_command(simulate_cmd, name="simulate")


@main.command()
@click.option("--kind", type=click.Choice(["mu", "kappa"]), required=True)
@click.option("--n", type=int, default=None, help="Simulate fresh graphs of this size.")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--semantics", type=_SEMANTICS, default="remove", show_default=True)
@click.option("--engine", type=_ENGINES, default="unitwise", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replicates", type=int, default=1, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--eps-exponent", type=str, default=None, help="Truncation exponent a (eps = n^-a), e.g. 3/4.")
@click.option("--from-graphs", type=click.Path(exists=True, file_okay=False), default=None, help="Reuse graphs saved by `simulate`.")
@click.option("--out", type=click.Path(), required=True)
@_friendly
def spectrum_cmd(kind, n, alpha, semantics, engine, seed, replicates, threads, eps_exponent, from_graphs, out):
    """Compute spectral measures (mu, or truncated kappa) and write atoms."""
    if kind == "kappa" and eps_exponent is None:
        raise click.UsageError("--kind kappa requires --eps-exponent")
    if kind == "mu" and eps_exponent is not None:
        raise click.UsageError("--eps-exponent only applies to --kind kappa")
    if from_graphs is None and n is None:
        raise click.UsageError("provide --n for a fresh simulation or --from-graphs DIR")
    started = time.time()
    params = {
        "kind": kind,
        "n": n,
        "alpha": alpha,
        "semantics": semantics,
        "engine": engine,
        "seed": seed,
        "replicates": replicates,
        "threads": threads,
        "eps_exponent": eps_exponent,
        "from_graphs": from_graphs,
    }
    outdir = _out_dir(out)
    outputs = _run_spectrum(params, outdir)
    _write_manifest(outdir, "spectrum", params, outputs, started)
    click.echo(f"wrote spectra.csv to {outdir}")


main.add_command(spectrum_cmd, name="spectrum")


@main.command()
@click.option(
    "--what",
    type=click.Choice(["k-spectrum", "m-spectrum", "nystrom", "edge-prob"]),
    default="k-spectrum",
    show_default=True,
)
@click.option("--count", type=int, default=50, show_default=True, help="Eigenvalues to tabulate.")
@click.option("--trunc-n", type=int, default=1000, show_default=True, help="Truncation size for the discrete operator.")
@click.option("--grid", type=int, default=4000, show_default=True, help="Quadrature nodes (nystrom).")
@click.option("--t", type=float, default=200.0, show_default=True, help="Domain cutoff (nystrom).")
@click.option("--n", type=int, default=100, show_default=True, help="System size (edge-prob).")
@click.option("--semantics", type=_SEMANTICS, default="remove", show_default=True)
@click.option("--out", type=click.Path(), required=True)
@_friendly
def oracle_cmd(what, count, trunc_n, grid, t, n, semantics, out):
    """Write closed-form / quadrature reference spectra and exact probabilities."""
    started = time.time()
    params = {
        "what": what,
        "count": count,
        "trunc_n": trunc_n,
        "grid": grid,
        "t": t,
        "n": n,
        "semantics": semantics,
    }
    outdir = _out_dir(out)
    outputs = _run_oracle(params, outdir)
    _write_manifest(outdir, "oracle", params, outputs, started)
    click.echo(f"wrote {', '.join(outputs)} to {outdir}")


main.add_command(oracle_cmd, name="oracle")


@main.command()
@click.option("--kind", type=click.Choice(["mu", "kappa"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--semantics", type=_SEMANTICS, default="remove", show_default=True)
@click.option("--engine", type=_ENGINES, default="unitwise", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replicates", type=int, default=10, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--eps-exponent", type=str, default="3/4", show_default=True)
@click.option("--top", type=int, default=3, show_default=True, help="Ranks to compare.")
@click.option("--gates", type=click.Path(), default=None, help="INI file overriding the packaged gate thresholds.")
@click.option("--out", type=click.Path(), required=True)
@_friendly
def compare_cmd(kind, n, alpha, semantics, engine, seed, replicates, threads, eps_exponent, top, gates, out):
    """Simulate, compare against oracles, and evaluate the tolerance gates."""
    started = time.time()
    params = {
        "kind": kind,
        "n": n,
        "alpha": alpha,
        "semantics": semantics,
        "engine": engine,
        "seed": seed,
        "replicates": replicates,
        "threads": threads,
        "eps_exponent": eps_exponent,
        "top": top,
        "gates": gates,
    }
    outdir = _out_dir(out)
    gate_config = _load_gates(gates)
    outputs, passed = _run_compare(params, outdir, gate_config)
    _write_manifest(outdir, "compare", params, outputs, started)
    if not passed:
        sys.exit(1)


main.add_command(compare_cmd, name="compare")


@main.command()
@click.option("--n-grid", type=str, default="500,1000,2000,4000", show_default=True, help="Comma-separated ascending sizes.")
@click.option("--kind", type=click.Choice(["mu", "kappa"]), default="kappa", show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--semantics", type=_SEMANTICS, default="remove", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replicates", type=int, default=10, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--eps-exponent", type=str, default="3/4", show_default=True)
@click.option("--top", type=int, default=3, show_default=True)
@click.option("--gates", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), required=True)
@_friendly
def sweep_cmd(n_grid, kind, alpha, semantics, seed, replicates, threads, eps_exponent, top, gates, out):
    """Run the convergence sweep across n and gate the trend toward the limit."""
    try:
        grid = [int(part) for part in n_grid.split(",") if part.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad --n-grid {n_grid!r}: {exc}") from exc
    started = time.time()
    params = {
        "n_grid": grid,
        "kind": kind,
        "alpha": alpha,
        "semantics": semantics,
        "seed": seed,
        "replicates": replicates,
        "threads": threads,
        "eps_exponent": eps_exponent,
        "top": top,
        "gates": gates,
    }
    outdir = _out_dir(out)
    gate_config = _load_gates(gates)
    outputs, passed = _run_sweep(params, outdir, gate_config)
    _write_manifest(outdir, "sweep", params, outputs, started)
    if not passed:
        sys.exit(1)


main.add_command(sweep_cmd, name="sweep")


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(), required=True)
@_friendly
def rerun_cmd(manifest, out):
    """Replay a previous invocation from its manifest, byte for byte."""
    with open(manifest, encoding="utf-8") as handle:
        doc = json.load(handle)
    command = doc.get("command")
    params = doc.get("params", {})
    started = time.time()
    outdir = _out_dir(out)
    passed = True
    if command == "simulate":
        outputs = _run_simulate(params, outdir)
    elif command == "spectrum":
        outputs = _run_spectrum(params, outdir)
    elif command == "oracle":
        outputs = _run_oracle(params, outdir)
    elif command == "compare":
        outputs, passed = _run_compare(params, outdir, _load_gates(params.get("gates")))
    elif command == "sweep":
        outputs, passed = _run_sweep(params, outdir, _load_gates(params.get("gates")))
    else:
        raise click.UsageError(f"manifest has unknown command {command!r}")
    _write_manifest(outdir, command, params, outputs, started)
    if not passed:
        sys.exit(1)


main.add_command(rerun_cmd, name="rerun")


if __name__ == "__main__":
    main()
