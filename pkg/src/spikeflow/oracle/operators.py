"""Spectra of the limit operators.

Two compact symmetric operators govern the large-n behaviour: M on l2
with kernel 1/(i v j)^2, and K on L2[1, inf) with kernel 1/(s v t)^2.
Eigenvalues of K have the closed form 8/x_k^2 over the positive zeros
x_k of J1; everything else here exists to cross-check that claim by
independent numerics (truncated matrices, Nystrom discretization,
eigenfunction residuals, trace identities).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ..errors import DomainError, NumericError
from .bessel import j0, j1, j1_zeros

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class OracleSpectrum:
    """Reference eigenvalues, largest first, with their provenance."""

    eigenvalues: np.ndarray
    provenance: str  # bessel_closed_form | nystrom | m_truncated | exact_kernel_matrix
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", ev)
        if ev.size and not np.all(np.diff(ev) < 0):
            raise NumericError(f"{self.provenance} spectrum not strictly decreasing")
        if ev.size and ev[-1] <= 0:
            raise NumericError(f"{self.provenance} spectrum not strictly positive")

    def __len__(self):
        return len(self.eigenvalues)


def k_spectrum(count: int) -> OracleSpectrum:
    """Closed-form spectrum of K: lambda_k = 8 / x_k^2."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    zeros = j1_zeros(count)
    lams = np.array([8.0 / z.location ** 2 for z in zeros])
    return OracleSpectrum(lams, "bessel_closed_form",
                          {"count": count, "max_zero_residual": max(z.residual for z in zeros)})


def m_spectrum_truncated(N: int, count: int | None = None) -> OracleSpectrum:
    """Spectrum of the N x N leading block of M; tail trace below 1/N."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if count is None:
        count = N
    if N < count:
        raise DomainError(f"truncation N={N} smaller than requested count={count}")
    idx = np.arange(1, N + 1, dtype=float)
    mat = 1.0 / np.maximum.outer(idx, idx) ** 2
    ev = np.linalg.eigvalsh(mat)[::-1]
    return OracleSpectrum(ev[:count], "m_truncated",
                          {"N": N, "tail_trace_bound": 1.0 / N})


def _nystrom_points(T: float, grid: int):
    h = (T - 1.0) / grid
    t = 1.0 + (np.arange(grid) + 0.5) * h
    return t, h


def k_spectrum_nystrom(T: float = 200.0, grid: int = 4000,
                       count: int | None = None) -> OracleSpectrum:
    """Nystrom discretization of K on [1, T], composite midpoint rule.

    Uniform weights make the symmetrized matrix simply h/(t_i v t_j)^2,
    so its eigenvalues are real and approximate the top of Sigma(K).
    """
    if T < 50:
        raise DomainError(f"domain cutoff T must be >= 50, got {T}")
    if grid < 100:
        raise DomainError(f"grid must be >= 100 points, got {grid}")
    t, h = _nystrom_points(T, grid)
    mat = h / np.maximum.outer(t, t) ** 2
    ev = np.linalg.eigvalsh(mat)[::-1]
    ev = ev[ev > ev[0] * 1e-12]  # drop the numerically-zero tail
    if count is not None:
        ev = ev[:count]
    return OracleSpectrum(ev, "nystrom", {"T": T, "grid": grid})


def _phi_raw(lam: float, t):
    """Eigenfunction candidate with C1 = 1 (the bounded branch)."""
    h = 2.0 * _SQRT2 / np.sqrt(lam * t)
    if np.isscalar(t):
        return j1(h) / math.sqrt(t) - (_SQRT2 / (t * math.sqrt(lam))) * j0(h)
    return np.array([_phi_raw(lam, ti) for ti in t])


def psi(lam: float, t):
    """Psi(t) = sqrt(t) J1(2 sqrt(2)/sqrt(lam t)): solves lam Psi'' = -(2/t^3) Psi.

    phi is its derivative; Psi(1) = 0 exactly when lam is an eigenvalue.
    """
    if np.isscalar(t):
        return math.sqrt(t) * j1(2.0 * _SQRT2 / math.sqrt(lam * t))
    return np.array([psi(lam, ti) for ti in t])


@lru_cache(maxsize=64)
def _phi_norm(lam: float, T: float) -> float:
    body, _ = quad(lambda s: _phi_raw(lam, s) ** 2, 1.0, T, limit=200)
    # beyond T, phi ~ sqrt(2)/(lam^{3/2} t^2), so phi^2 integrates to C^2/(3 T^3)
    c_inf = _SQRT2 / lam ** 1.5
    tail = c_inf ** 2 / (3.0 * T ** 3)
    return math.sqrt(body + tail)


@dataclass(frozen=True)
class EigenfunctionK:
    eigenvalue: float
    c1: float
    domain: tuple[float, float]

    def __call__(self, t):
        return self.c1 * _phi_raw(self.eigenvalue, t)


def k_eigenfunction(lam: float, t=None, T: float = 200.0):
    """Unit-norm eigenfunction of K for eigenvalue lam.

    Returns the value at t when given, otherwise the callable. Rejects
    lam that is not actually in the spectrum (J1(2 sqrt 2 / sqrt lam)
    must vanish).
    """
    if lam <= 0:
        raise DomainError(f"eigenvalue must be positive, got {lam}")
    gate = abs(j1(2.0 * _SQRT2 / math.sqrt(lam)))
    if gate > 1e-8:
        raise DomainError(f"{lam} is not an eigenvalue of K (|J1| = {gate:.3e})")
    fn = EigenfunctionK(lam, 1.0 / _phi_norm(lam, T), (1.0, T))
    if t is None:
        return fn
    return fn(t)


def eigen_residual(lam: float, ts=None, T: float = 200.0) -> float:
    """Sup-norm residual of the eigenequation, relative to max |lam phi|.

    r(t) = lam phi(t) - t^{-2} int_1^t phi - int_t^T s^{-2} phi - tail,
    with the tail of the second integral taken from the two-term large-t
    expansion phi(s) = C/s^2 - D/s^3 + O(s^-4).
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if ts is None:
        ts = np.linspace(1.0, 50.0, 25)
    c_inf = _SQRT2 / lam ** 1.5
    d_inf = 2.0 * _SQRT2 / (3.0 * lam ** 2.5)
    tail = c_inf / (3.0 * T ** 3) - d_inf / (4.0 * T ** 4)
    worst = 0.0
    scale = 0.0
    for t in ts:
        inner, _ = quad(lambda s: _phi_raw(lam, s), 1.0, t, limit=200)
        outer, _ = quad(lambda s: _phi_raw(lam, s) / s ** 2, t, T, limit=200)
        value = lam * _phi_raw(lam, t)
        r = value - inner / t ** 2 - outer - tail
        worst = max(worst, abs(r))
        scale = max(scale, abs(value))
    if scale == 0.0:
        raise NumericError("eigenfunction vanished on the whole grid")
    return worst / scale


def limit_moment(kernel: str, k: int, truncation: int = 1000) -> float:
    """tr(kernel^k) at unit charge density.

    K uses the Bessel closed form; M uses exact partial sums for k <= 2
    (the pair count at level U is 2U - 1) and the truncated eigensolve
    otherwise.
    """
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    if kernel == "K":
        lams = k_spectrum(truncation).eigenvalues
        return float(np.sum(lams ** k))
    if kernel == "M":
        u = np.arange(1, truncation + 1, dtype=float)
        if k == 1:
            return float(np.sum(1.0 / u ** 2))
        if k == 2:
            return float(np.sum((2.0 * u - 1.0) / u ** 4))
        ev = m_spectrum_truncated(min(truncation, 4000)).eigenvalues
        return float(np.sum(ev ** k))
    raise DomainError(f"unknown kernel {kernel!r}, expected 'K' or 'M'")


def moment_tail_bound(kernel: str, k: int, truncation: int) -> float:
    """Crude bound on the mass dropped by the truncation."""
    if kernel == "K":
        # lambda_j <= 8 / (pi (j - 3/4))^2 past the truncation
        j = truncation
        return float((8.0 / math.pi ** 2) ** k / ((2 * k - 1) * (j - 0.75) ** (2 * k - 1)))
    if kernel == "M":
        if k == 1:
            return 1.0 / truncation
        # |tr M^k - tr M_N^k| <= k ||M||^{k-1} tr(M - P M P), ||M|| <= tr M
        return float(k * (math.pi ** 2 / 6.0) ** (k - 1) / truncation)
    raise DomainError(f"unknown kernel {kernel!r}")


def write_oracle_csv(path, count: int = 50, trunc_n: int = 1000) -> None:
    """Side-by-side oracle table: J1 zeros, K spectrum, truncated-M spectrum."""
    zeros = j1_zeros(count)
    m_ev = m_spectrum_truncated(trunc_n, count).eigenvalues
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "j1_zero", "lambda_K", "lambda_M_truncN", "provenance"])
        for i, z in enumerate(zeros):
            w.writerow([z.index, f"{z.location:.17g}",
                        f"{8.0 / z.location ** 2:.17g}",
                        f"{m_ev[i]:.17g}",
                        f"bessel_closed_form+m_truncated(N={trunc_n})"])
