"""Empirical-vs-oracle comparisons, sweeps, power-law fits, robustness.

Comparison is rank-matched: the k-th largest atom is held against the
k-th oracle eigenvalue. All limit eigenvalues are simple, so this is the
direct finite-sample reading of weak convergence away from zero.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dynamics import SimulationConfig, sample_visit_counts, simulate_units
from .errors import DomainError, NumericError
from .graph import (
    DegreeSummary,
    LeakSemantics,
    expected_adjacency,
    kernel_kind_for,
)
from .oracle.exactdp import visit_probabilities
from .oracle.operators import OracleSpectrum, k_spectrum, m_spectrum_truncated
from .spectra import (
    SpectralMeasure,
    eigenvalues_dense,
    spectral_measure_kappa,
    spectral_measure_mu,
)


@dataclass(frozen=True)
class EpsSchedule:
    """Truncation schedule eps_n = n^{-a}.

    Validity is checked in exact rational arithmetic: n eps_n -> infinity
    and n^{1+delta} eps_n^2 -> 0 need 1/2 < a < 1 and 0 < delta < 2a - 1.
    """

    a: Fraction = Fraction(3, 4)
    delta: Fraction | None = None

    def __post_init__(self):
        a = Fraction(self.a)
        object.__setattr__(self, "a", a)
        if not Fraction(1, 2) < a < 1:
            raise DomainError(f"exponent a must lie in (1/2, 1), got {a}")
        delta = Fraction(self.delta) if self.delta is not None else (2 * a - 1) / 2
        object.__setattr__(self, "delta", delta)
        if not 0 < delta < 2 * a - 1:
            raise DomainError(f"delta must lie in (0, 2a-1) = (0, {2 * a - 1}), got {delta}")

    def eps(self, n: int) -> float:
        return float(n) ** -float(self.a)


# -- rank-matched comparison ----------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    rank: int
    emp_mean: float
    emp_std: float
    oracle_finite: float
    oracle_limit: float
    rel_err_finite: float
    rel_err_limit: float


@dataclass(frozen=True)
class ComparisonReport:
    kind: str
    n: int
    alpha: float | None
    eps: float | None
    semantics: LeakSemantics
    replicates: int
    rows: list = field(default_factory=list)


def compare_spectra(measures, oracle_finite: OracleSpectrum,
                    oracle_limit: OracleSpectrum, k: int) -> ComparisonReport:
    if not measures:
        raise DomainError("need at least one replicate measure")
    head = measures[0]
    for m in measures[1:]:
        if (m.kind, m.n, m.alpha, m.eps, m.semantics) != (
                head.kind, head.n, head.alpha, head.eps, head.semantics):
            raise DomainError("replicate measures carry mismatched metadata")
    if k < 1 or k > min(len(oracle_finite), len(oracle_limit)):
        raise DomainError(f"rank count {k} outside the provided oracle range")
    atoms = np.stack([m.atoms[:k] for m in measures])  # (replicates, k)
    means = atoms.mean(axis=0)
    stds = atoms.std(axis=0, ddof=1) if len(measures) >= 2 else np.full(k, math.nan)
    rows = []
    for r in range(k):
        of = float(oracle_finite.eigenvalues[r])
        ol = float(oracle_limit.eigenvalues[r])
        rows.append(ComparisonRow(
            rank=r + 1, emp_mean=float(means[r]), emp_std=float(stds[r]),
            oracle_finite=of, oracle_limit=ol,
            rel_err_finite=abs(means[r] - of) / of,
            rel_err_limit=abs(means[r] - ol) / ol))
    return ComparisonReport(head.kind, head.n, head.alpha, head.eps,
                            head.semantics, len(measures), rows)


_COMPARE_HEADER = ["kind", "n", "alpha", "eps", "semantics", "rank", "emp_mean",
                   "emp_std", "oracle_finite", "oracle_limit", "rel_err_finite",
                   "rel_err_limit"]


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def write_comparison_csv(path, reports) -> None:
    """One row per (n, rank); accepts a single report or a sweep's list."""
    if isinstance(reports, ComparisonReport):
        reports = [reports]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_COMPARE_HEADER)
        for rep in reports:
            for row in rep.rows:
                w.writerow([rep.kind, rep.n, _fmt(rep.alpha), _fmt(rep.eps),
                            rep.semantics.value, row.rank, _fmt(row.emp_mean),
                            _fmt(row.emp_std), _fmt(row.oracle_finite),
                            _fmt(row.oracle_limit), _fmt(row.rel_err_finite),
                            _fmt(row.rel_err_limit)])


# -- oracle assembly helpers ------------------------------------------------


def mu_finite_oracle(n: int, m: int, semantics, count: int) -> OracleSpectrum:
    """Top eigenvalues of the exact expected adjacency, mu scaling (1/n)."""
    ev = eigenvalues_dense(expected_adjacency(n, m, kernel_kind_for(semantics)),
                           cap=n)
    return OracleSpectrum(ev[:count] / n, "exact_kernel_matrix",
                          {"n": n, "m": m, "scaling": "mu"})


def kappa_finite_oracle(n: int, m: int, semantics, eps: float,
                        count: int) -> OracleSpectrum:
    """Top eigenvalues of the truncated expected adjacency, kappa scaling."""
    mat = expected_adjacency(n, m, kernel_kind_for(semantics))
    r = math.ceil(eps * n)
    mat[:r, :] = 0.0
    mat[:, :r] = 0.0
    ev = eigenvalues_dense(mat, cap=n)
    return OracleSpectrum(eps * ev[:count], "exact_kernel_matrix",
                          {"n": n, "m": m, "eps": eps, "scaling": "kappa"})


def mu_limit_oracle(alpha: float, count: int, trunc_n: int = 2000) -> OracleSpectrum:
    spec = m_spectrum_truncated(trunc_n, count)
    return OracleSpectrum(alpha * spec.eigenvalues, spec.provenance,
                          dict(spec.params, alpha=alpha))


def kappa_limit_oracle(alpha: float, count: int) -> OracleSpectrum:
    spec = k_spectrum(count)
    return OracleSpectrum(alpha * spec.eigenvalues, spec.provenance,
                          dict(spec.params, alpha=alpha))


# -- degree power law -------------------------------------------------------


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float  # density exponent, CCDF slope s maps to 1 - s
    stderr: float
    fit_range: tuple
    method: str
    hill_exponent: float


def fit_power_law(degrees, tail_range=None) -> PowerLawFit:
    """CCDF log-log regression, Hill estimator as the cross-check.

    Default window: the middle two decades of the positive degree range.
    tail_range, when given, is a (low, high) quantile pair instead.
    """
    if isinstance(degrees, DegreeSummary):
        d = np.asarray(degrees.total_degree, dtype=float)
    else:
        d = np.asarray(degrees, dtype=float)
    d = d[d > 0]
    if d.size < 100:
        raise DomainError("need at least 100 positive degrees to fit")
    if tail_range is not None:
        qlo, qhi = tail_range
        if not 0 <= qlo < qhi <= 1:
            raise DomainError(f"bad quantile pair {tail_range}")
        lo, hi = np.quantile(d, qlo), np.quantile(d, qhi)
    else:
        span = math.log10(d.max())
        lo, hi = 10 ** ((span - 2) / 2), 10 ** ((span + 2) / 2)
    lo = max(lo, d.min())
    hi = min(hi, d.max())
    window = np.unique(d[(d >= lo) & (d <= hi)])
    if window.size < 3:
        raise DomainError("degenerate fit range: fewer than 3 distinct degrees")
    if ((d >= lo) & (d <= hi)).sum() < 100:
        raise DomainError("degenerate fit range: fewer than 100 vertices inside")

    d_sorted = np.sort(d)
    ccdf = 1.0 - np.searchsorted(d_sorted, window, side="left") / d.size
    x = np.log10(window)
    y = np.log10(ccdf)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = max(x.size - 2, 1)
    se = math.sqrt(float(resid @ resid) / dof / float(((x - x.mean()) ** 2).sum()))

    tail = d[d >= lo]
    logs = np.log(tail / lo)
    positive = logs[logs > 0]
    if positive.size == 0:
        raise DomainError("degenerate tail: no mass above the threshold")
    hill_gamma = 1.0 / positive.mean()
    fit = PowerLawFit(exponent=1.0 - slope, stderr=se, fit_range=(float(lo), float(hi)),
                      method="ccdf-regression", hill_exponent=hill_gamma + 1.0)
    if not fit.exponent > 1.0:
        raise NumericError(f"fitted exponent {fit.exponent:.3f} outside the power-law regime")
    return fit


def zipf_degrees(n: int, scale: float = 1.0) -> np.ndarray:
    """Synthetic control d_i = scale * n / i; its CCDF slope is exactly -1."""
    return scale * n / np.arange(1, n + 1)


# -- visit frequencies -------------------------------------------------------


@dataclass(frozen=True)
class VisitProbe:
    rank: int
    frequency: float
    oracle: float
    z: float


def visit_frequency_test(n: int, semantics, samples: int, probes=None,
                         seed: int = 0, oracle_semantics=None) -> list[VisitProbe]:
    """MC visit frequencies vs the exact vector, z-scored binomially.

    Passing a different oracle_semantics turns this into the
    discrimination probe (the mismatch must light up at small ranks).
    """
    if samples < 10_000:
        raise DomainError(f"needs >= 10^4 samples for stable z-scores, got {samples}")
    counts = sample_visit_counts(n, samples, semantics, seed=seed)
    oracle = visit_probabilities(n, oracle_semantics or semantics)
    if probes is None:
        probes = range(1, n + 1)
    out = []
    for u in probes:
        p = float(oracle[u - 1])
        freq = counts[u - 1] / samples
        var = p * (1.0 - p) / samples
        if var == 0.0:
            z = 0.0 if freq == p else math.inf
        else:
            z = (freq - p) / math.sqrt(var)
        out.append(VisitProbe(u, freq, p, z))
    return out


# -- robustness and sweeps ----------------------------------------------------


@dataclass(frozen=True)
class RobustnessResult:
    report_remove: ComparisonReport
    report_stay: ComparisonReport
    kappa_gap: float  # |mean difference| of the top kappa atom
    kappa_sigma: float  # pooled std error of that difference
    mu_top_remove: float
    mu_top_stay: float
    mu_rel_gap: float


def _replicate_measures(config: SimulationConfig, kind: str, eps: float | None):
    out = []
    for rep in range(config.replicates):
        g = simulate_units(config, rep)
        if kind == "kappa":
            out.append(spectral_measure_kappa(g, eps, replicate=rep))
        else:
            out.append(spectral_measure_mu(g, replicate=rep))
    return out


def robustness_experiment(n: int, alpha: float, schedule: EpsSchedule,
                          replicates: int, seed: int = 0,
                          threads: int = 1) -> RobustnessResult:
    """Matched-seed remove vs stay: kappa must agree, mu must not."""
    if replicates < 2:
        raise DomainError("robustness needs >= 2 replicates for dispersion")
    eps = schedule.eps(n)
    reports = {}
    kappa_tops = {}
    mu_tops = {}
    for sem in (LeakSemantics.REMOVE, LeakSemantics.STAY):
        cfg = SimulationConfig(n=n, alpha=alpha, semantics=sem, seed=seed,
                               replicates=replicates, threads=threads)
        kappa_measures = []
        mu_top = np.empty(replicates)
        for rep in range(replicates):
            g = simulate_units(cfg, rep)
            kappa_measures.append(spectral_measure_kappa(g, eps, replicate=rep))
            mu_top[rep] = spectral_measure_mu(g, replicate=rep).atoms[0]
        finite = kappa_finite_oracle(n, cfg.m, sem, eps, count=3)
        limit = kappa_limit_oracle(alpha, count=3)
        reports[sem] = compare_spectra(kappa_measures, finite, limit, k=3)
        kappa_tops[sem] = np.array([m.atoms[0] for m in kappa_measures])
        mu_tops[sem] = mu_top
    a = kappa_tops[LeakSemantics.REMOVE]
    b = kappa_tops[LeakSemantics.STAY]
    gap = abs(float(a.mean() - b.mean()))
    sigma = math.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b))
    mu_r = float(mu_tops[LeakSemantics.REMOVE].mean())
    mu_s = float(mu_tops[LeakSemantics.STAY].mean())
    return RobustnessResult(
        report_remove=reports[LeakSemantics.REMOVE],
        report_stay=reports[LeakSemantics.STAY],
        kappa_gap=gap, kappa_sigma=sigma,
        mu_top_remove=mu_r, mu_top_stay=mu_s,
        mu_rel_gap=abs(mu_r - mu_s) / max(mu_r, mu_s))


@dataclass(frozen=True)
class SweepResult:
    reports: list
    limit_errors: list  # top-rank rel_err_limit per n, in grid order
    improving_steps: int

    @property
    def final_limit_error(self) -> float:
        return self.limit_errors[-1]


def convergence_sweep(n_grid, alpha: float, schedule: EpsSchedule,
                      replicates: int, seed: int = 0,
                      semantics=LeakSemantics.REMOVE, kind: str = "kappa",
                      top: int = 3, threads: int = 1) -> SweepResult:
    """Full pipeline per n; the trend table behind the limit-theorem gates."""
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise DomainError("n_grid must be strictly ascending")
    sem = LeakSemantics.parse(semantics)
    reports = []
    for n in n_grid:
        cfg = SimulationConfig(n=n, alpha=alpha, semantics=sem, seed=seed,
                               replicates=replicates, threads=threads)
        eps = schedule.eps(n) if kind == "kappa" else None
        measures = _replicate_measures(cfg, kind, eps)
        if kind == "kappa":
            finite = kappa_finite_oracle(n, cfg.m, sem, eps, count=top)
            limit = kappa_limit_oracle(alpha, count=top)
        else:
            finite = mu_finite_oracle(n, cfg.m, sem, count=top)
            limit = mu_limit_oracle(alpha, count=top, trunc_n=max(2000, max(n_grid)))
        reports.append(compare_spectra(measures, finite, limit, k=top))
    errs = [rep.rows[0].rel_err_limit for rep in reports]
    improving = sum(1 for x, y in zip(errs, errs[1:]) if y <= x)
    return SweepResult(reports, errs, improving)
