"""Exact finite-n visit and edge-traversal probabilities.

A unit walks down the ranks drawing its next target uniformly on
{1..v} (with the self-pick handled per the leak semantics). For a fixed
observation rank U the conditional visit probabilities h(v, U) obey a
one-dimensional recursion, which combined with the uniform start gives
the exact visit vector and edge law. Both the raw recursion and the
closed forms it collapses to are exposed; tests pin their agreement.

Rank-to-index convention for returned arrays: position i holds rank i+1.
"""
from __future__ import annotations

import numpy as np

from ..errors import DomainError

_DENSE_CAP = 5000


def _canon_semantics(semantics) -> str:
    s = getattr(semantics, "value", semantics)
    if s == "freeze":
        s = "remove"  # identical trajectory and edge law
    if s not in ("remove", "stay"):
        raise DomainError(f"unknown semantics {semantics!r}")
    return s


def _visit_closed(n: int, sem: str) -> np.ndarray:
    u = np.arange(1, n + 1, dtype=float)
    if sem == "remove":
        return (n + 1.0) / (n * (u + 1.0))
    return 1.0 / u


def _visit_dp(n: int, sem: str) -> np.ndarray:
    # h(v, U) = P(walk at v eventually visits U); prefix sums keep each
    # U-column linear, the whole table O(n^2)
    out = np.empty(n, dtype=float)
    for U in range(1, n + 1):
        acc = 0.0  # sum of h(u, U) for u in (U, v)
        total = 1.0  # start at U itself counts
        for v in range(U + 1, n + 1):
            denom = v if sem == "remove" else v - 1
            h = (1.0 + acc) / denom
            acc += h
            total += h
        out[U - 1] = total / n
    return out


def visit_probabilities(n: int, semantics, method: str = "closed") -> np.ndarray:
    """P(a uniformly started unit ever visits rank U), U = 1..n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    sem = _canon_semantics(semantics)
    if method == "closed":
        return _visit_closed(n, sem)
    if method == "dp":
        return _visit_dp(n, sem)
    raise DomainError(f"unknown method {method!r}")


def exact_edge_probability(n: int, semantics, method: str = "closed"):
    """Exact edge-traversal law: (n x n probability matrix, visit vector).

    Entry (i, j) is the probability that a single unit's walk produces the
    event between ranks i+1 and j+1; diagonal entries are leak events
    (zero under stay). Given a visit to U = i v j the target is uniform,
    so P_edge = P(visit U) / U for remove and / (U - 1) off the diagonal
    for stay.
    """
    if n > _DENSE_CAP:
        raise DomainError(f"dense edge matrix capped at n={_DENSE_CAP}, got {n}")
    sem = _canon_semantics(semantics)
    visit = visit_probabilities(n, sem, method=method)
    ranks = np.arange(1, n + 1, dtype=float)
    upper = np.maximum.outer(ranks, ranks)
    if sem == "remove":
        prob = visit[np.maximum.outer(np.arange(n), np.arange(n))] / upper
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            prob = visit[np.maximum.outer(np.arange(n), np.arange(n))] / (upper - 1.0)
        np.fill_diagonal(prob, 0.0)
    return prob, visit


def expected_path_length(n: int, semantics) -> float:
    """Expected number of distinct ranks a unit visits: sum of the visit vector."""
    return float(visit_probabilities(n, semantics).sum())
