"""Eigenvalues, spectral measures, trace moments.

The mu measure places one atom per eigenvalue of A at lambda/n; the
kappa measure takes the eps-truncated matrix and scales by eps instead.
Both keep all n atoms (the truncation's forced zeros included), so atom
sums reproduce the trace identities exactly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from ._rng import Stream
from .errors import DomainError, NumericError
from .graph import ChargeFlowGraph, LeakSemantics

DENSE_CAP = 4000


def eigenvalues_dense(matrix, cap: int = DENSE_CAP) -> np.ndarray:
    """Full spectrum of a symmetric matrix, descending."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > cap:
        raise DomainError(f"dense solve capped at {cap}, got {a.shape[0]}")
    scale = np.abs(a).max() if a.size else 0.0
    skew = np.abs(a - a.T).max() if a.size else 0.0
    if skew > 1e-12 * max(1.0, scale):
        raise DomainError(f"matrix asymmetric: max |A - A^T| = {skew:.3e}")
    try:
        ev = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"dense eigensolver failed: {exc}") from exc
    return ev[::-1]


def _as_matvec(operator):
    if isinstance(operator, ChargeFlowGraph):
        sp = operator.to_sparse()
        return (lambda x: sp @ x), operator.n
    if isinstance(operator, tuple) and len(operator) == 2:
        fn, dim = operator
        return fn, int(dim)
    if hasattr(operator, "toarray"):  # scipy sparse
        return (lambda x: operator @ x), operator.shape[0]
    a = np.asarray(operator, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("operator must be square")
    return (lambda x: a @ x), a.shape[0]


def top_eigenvalues_iterative(operator, k: int, tol: float = 1e-8,
                              max_iter: int | None = None,
                              seed: int = 0x1A0C205) -> np.ndarray:
    """Largest k eigenvalues by Lanczos with full reorthogonalization.

    The start vector is drawn from a fixed stream keyed by the dimension,
    so results are reproducible. Residual bounds |beta * s_last| gate
    convergence of every requested Ritz value.
    """
    matvec, dim = _as_matvec(operator)
    if k < 1 or k > dim:
        raise DomainError(f"need 1 <= k <= dim, got k={k} dim={dim}")
    if max_iter is None:
        max_iter = min(dim, max(8 * k, 200))
    rng = Stream.for_unit(seed, 0, dim)
    v = np.array([rng.uniform() - 0.5 for _ in range(dim)])
    nv = np.linalg.norm(v)
    if nv == 0:
        raise NumericError("start vector vanished")
    v /= nv

    basis = np.zeros((max_iter + 1, dim))
    basis[0] = v
    alphas: list[float] = []
    betas: list[float] = []
    for j in range(max_iter):
        w = matvec(basis[j])
        alpha = float(basis[j] @ w)
        alphas.append(alpha)
        w = w - alpha * basis[j]
        if j > 0:
            w = w - betas[-1] * basis[j - 1]
        for _ in range(2):  # full reorthogonalization, twice for safety
            w = w - basis[: j + 1].T @ (basis[: j + 1] @ w)
        beta = float(np.linalg.norm(w))

        tri = np.diag(alphas)
        if betas:
            off = np.array(betas)
            tri += np.diag(off, 1) + np.diag(off, -1)
        theta, s = np.linalg.eigh(tri)
        order = np.argsort(theta)[::-1]
        scale = max(map(abs, alphas + betas), default=0.0) or 1.0
        if j + 1 >= k:
            top = order[:k]
            bounds = beta * np.abs(s[-1, top])
            if np.all(bounds <= tol * max(abs(theta[top[0]]), 1e-300)):
                return theta[top]
        if beta <= 1e-13 * scale:
            if j + 1 >= k:
                return theta[order[:k]]  # exact invariant subspace
            raise NumericError(
                f"Lanczos breakdown at step {j + 1} before finding {k} values")
        betas.append(beta)
        basis[j + 1] = w / beta
    raise NumericError(
        f"Lanczos did not converge in {max_iter} iterations "
        f"(last residual bound {float(bounds.max()):.3e})")


# -- spectral measures ---------------------------------------------------


@dataclass(frozen=True)
class SpectralMeasure:
    kind: str  # "mu" | "kappa"
    atoms: np.ndarray  # descending, one per eigenvalue (n of them)
    n: int
    m: int
    semantics: LeakSemantics
    alpha: float | None = None
    eps: float | None = None  # kappa only
    replicate: int = 0

    def __post_init__(self):
        object.__setattr__(self, "atoms", np.asarray(self.atoms, dtype=float))
        if self.kind not in ("mu", "kappa"):
            raise DomainError(f"kind must be mu or kappa, got {self.kind!r}")
        if self.kind == "kappa" and self.eps is None:
            raise DomainError("kappa measures carry their eps")

    def moment(self, k: int) -> float:
        return float(np.sum(self.atoms ** k))


def spectral_measure_mu(graph: ChargeFlowGraph, replicate: int = 0,
                        cap: int = DENSE_CAP) -> SpectralMeasure:
    ev = eigenvalues_dense(graph.to_dense(), cap=cap)
    return SpectralMeasure("mu", ev / graph.n, graph.n, graph.m, graph.semantics,
                           alpha=graph.alpha, replicate=replicate)


def spectral_measure_kappa(graph: ChargeFlowGraph, eps: float, replicate: int = 0,
                           cap: int = DENSE_CAP) -> SpectralMeasure:
    """Atoms eps * spectrum of the truncated matrix.

    The truncation's ceil(eps n) zeroed rows force that many exact zero
    eigenvalues; they are appended literally rather than recovered from
    the solver, keeping the zero-count invariant checkable to the bit.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    r = math.ceil(eps * graph.n)
    dense = graph.truncate(eps).to_dense()
    live = eigenvalues_dense(dense[r:, r:], cap=cap) if r < graph.n else np.empty(0)
    atoms = np.concatenate([eps * live, np.zeros(r)])
    atoms = np.sort(atoms)[::-1]
    return SpectralMeasure("kappa", atoms, graph.n, graph.m, graph.semantics,
                           alpha=graph.alpha, eps=eps, replicate=replicate)


# -- trace moments -------------------------------------------------------


@dataclass(frozen=True)
class MomentEstimate:
    order: int
    value: float
    estimator: str  # exact-from-eigenvalues | stochastic-trace
    std_error: float | None = None


def trace_moment(source, k: int, estimator: str = "exact", probes: int = 64,
                 seed: int = 0xACE5) -> MomentEstimate:
    """M_{k,n} = sum of mu-atoms^k = tr((A/n)^k).

    From a SpectralMeasure this is an exact power sum. From a graph the
    stochastic path runs Hutchinson probes z^T (A/n)^k z with Rademacher
    z and reports the standard error of the probe mean.
    """
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    if isinstance(source, SpectralMeasure):
        return MomentEstimate(k, source.moment(k), "exact-from-eigenvalues")
    if not isinstance(source, ChargeFlowGraph):
        raise DomainError("source must be a SpectralMeasure or ChargeFlowGraph")
    if estimator == "exact":
        return MomentEstimate(k, spectral_measure_mu(source).moment(k),
                              "exact-from-eigenvalues")
    if estimator != "stochastic":
        raise DomainError(f"unknown estimator {estimator!r}")
    if probes < 2:
        raise DomainError("stochastic estimator needs >= 2 probes")
    sp = source.to_sparse() / source.n
    dim = source.n
    vals = np.empty(probes)
    for p in range(probes):
        rng = Stream.for_unit(seed, p, dim)
        z = np.array([1.0 if rng.next64() >> 63 else -1.0 for _ in range(dim)])
        w = z
        for _ in range(k):
            w = sp @ w
        vals[p] = z @ w
    value = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(probes))
    return MomentEstimate(k, value, "stochastic-trace", stderr)


# -- serialization --------------------------------------------------------

_MEASURE_HEADER = ["kind", "n", "alpha", "eps", "semantics", "replicate", "rank", "atom"]


def _fmt(x) -> str:
    return "" if x is None else f"{x:.17g}"


def write_measures_csv(path, measures) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_MEASURE_HEADER)
        for meas in measures:
            for rank, atom in enumerate(meas.atoms, start=1):
                w.writerow([meas.kind, meas.n, _fmt(meas.alpha), _fmt(meas.eps),
                            meas.semantics.value, meas.replicate, rank,
                            f"{atom:.17g}"])


def read_measures_csv(path) -> list[SpectralMeasure]:
    groups: dict = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (row["kind"], int(row["n"]), row["alpha"], row["eps"],
                   row["semantics"], int(row["replicate"]))
            groups.setdefault(key, []).append((int(row["rank"]), float(row["atom"])))
    out = []
    for (kind, n, alpha, eps, semantics, replicate), pairs in groups.items():
        pairs.sort()
        atoms = np.array([a for _, a in pairs])
        alpha_v = float(alpha) if alpha else None
        m = int(math.floor(alpha_v * n)) if alpha_v else 0
        out.append(SpectralMeasure(
            kind, atoms, n, m=m, semantics=LeakSemantics.parse(semantics),
            alpha=alpha_v, eps=float(eps) if eps else None, replicate=replicate))
    return out
