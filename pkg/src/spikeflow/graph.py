"""Charge-flow graphs: sparse symmetric multiplicity matrices.

Entries are stored once per unordered pair, keyed (i, j) with i >= j in
1-based ranks. Diagonal entries record leak events (remove/freeze only).
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DomainError
from .oracle.exactdp import exact_edge_probability


class LeakSemantics(str, Enum):
    REMOVE = "remove"
    STAY = "stay"
    FREEZE = "freeze"

    @property
    def records_diagonal(self) -> bool:
        return self is not LeakSemantics.STAY

    @classmethod
    def parse(cls, value) -> "LeakSemantics":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"unknown leak semantics {value!r}") from None


class KernelKind(str, Enum):
    PAPER = "paper"
    EXACT_REMOVE = "exact_remove"
    EXACT_STAY = "exact_stay"


@dataclass(frozen=True)
class DegreeSummary:
    out_degree: np.ndarray  # position i holds rank i+1
    in_degree: np.ndarray
    total_degree: np.ndarray


@dataclass(frozen=True)
class ChargeFlowGraph:
    n: int
    m: int
    semantics: LeakSemantics
    entries: dict = field(default_factory=dict)  # (i, j) i >= j -> multiplicity
    alpha: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")

    # -- construction ------------------------------------------------

    @classmethod
    def from_events(cls, n, m, semantics, src, dst, **meta) -> "ChargeFlowGraph":
        """Accumulate recorded events; src >= dst elementwise (downward moves
        and diagonal leaks)."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        entries: dict = {}
        if src.size:
            codes = src * np.int64(n + 1) + dst
            uniq, counts = np.unique(codes, return_counts=True)
            ii = uniq // (n + 1)
            jj = uniq % (n + 1)
            for i, j, c in zip(ii.tolist(), jj.tolist(), counts.tolist()):
                entries[(i, j)] = c
        return cls(n=n, m=m, semantics=LeakSemantics.parse(semantics),
                   entries=entries, **meta)

    # -- views -------------------------------------------------------

    def multiplicity(self, i: int, j: int) -> int:
        return self.entries.get((max(i, j), min(i, j)), 0)

    def trace(self) -> int:
        return sum(c for (i, j), c in self.entries.items() if i == j)

    def offdiagonal_mass(self) -> int:
        return sum(c for (i, j), c in self.entries.items() if i != j)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for (i, j), c in self.entries.items():
            a[i - 1, j - 1] = c
            a[j - 1, i - 1] = c
        return a

    def to_sparse(self):
        from scipy.sparse import coo_matrix

        ii, jj, vv = [], [], []
        for (i, j), c in self.entries.items():
            ii.append(i - 1)
            jj.append(j - 1)
            vv.append(c)
            if i != j:
                ii.append(j - 1)
                jj.append(i - 1)
                vv.append(c)
        return coo_matrix((vv, (ii, jj)), shape=(self.n, self.n)).tocsr()

    # -- operations ------------------------------------------------

    def truncate(self, eps: float) -> "ChargeFlowGraph":
        """Zero all rows and columns of rank <= ceil(eps * n); keeps n."""
        if not 0 < eps < 1:
            raise DomainError(f"eps must lie in (0, 1), got {eps}")
        r = math.ceil(eps * self.n)
        kept = {k: c for k, c in self.entries.items() if k[1] > r}
        return ChargeFlowGraph(n=self.n, m=self.m, semantics=self.semantics,
                               entries=kept, alpha=self.alpha, seed=self.seed)

    def degrees(self) -> DegreeSummary:
        out = np.zeros(self.n, dtype=np.int64)
        inn = np.zeros(self.n, dtype=np.int64)
        for (i, j), c in self.entries.items():
            out[i - 1] += c  # transfer away from the higher rank
            inn[j - 1] += c  # arriving at the lower (leaks hit both at i == j)
        return DegreeSummary(out, inn, out + inn)

    # -- serialization ---------------------------------------------

    def save(self, path) -> None:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["i", "j", "multiplicity"])
            for (i, j) in sorted(self.entries):
                w.writerow([i, j, self.entries[(i, j)]])
        sidecar = {
            "n": self.n,
            "m": self.m,
            "alpha": self.alpha,
            "semantics": self.semantics.value,
            "seed": self.seed,
        }
        with open(path.with_suffix(".json"), "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ChargeFlowGraph":
        path = Path(path)
        with open(path.with_suffix(".json")) as fh:
            meta = json.load(fh)
        entries = {}
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                i, j = int(row["i"]), int(row["j"])
                if i < j:
                    raise DomainError(f"row {i},{j} violates i >= j")
                entries[(i, j)] = int(row["multiplicity"])
        return cls(n=meta["n"], m=meta["m"],
                   semantics=LeakSemantics.parse(meta["semantics"]),
                   entries=entries, alpha=meta.get("alpha"), seed=meta.get("seed"))


def expected_adjacency(n: int, m: int, kind: KernelKind | str) -> np.ndarray:
    """Mean adjacency matrix under the chosen kernel; dense, n <= 5000."""
    if n < 1 or m < 1:
        raise DomainError(f"need n >= 1 and m >= 1, got n={n} m={m}")
    kind = KernelKind(kind)
    if kind is KernelKind.PAPER:
        idx = np.arange(1, n + 1, dtype=float)
        return m / np.maximum.outer(idx, idx) ** 2
    sem = "remove" if kind is KernelKind.EXACT_REMOVE else "stay"
    prob, _ = exact_edge_probability(n, sem)
    return m * prob


def kernel_kind_for(semantics) -> KernelKind:
    sem = LeakSemantics.parse(semantics)
    return KernelKind.EXACT_STAY if sem is LeakSemantics.STAY else KernelKind.EXACT_REMOVE
