"""Winner-take-all charge dynamics.

A unit at rank v picks its next target uniformly on {1..v}; a self-pick
is resolved by the leak semantics. Only effective events are simulated,
which is equivalent in law to the literal global event loop (also
provided, as a validation engine) because picks with target above
source or an uncharged source change nothing.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import unit_paths
from ._rng import Stream
from .errors import DomainError, NumericError
from .graph import ChargeFlowGraph, LeakSemantics


class Engine(str, Enum):
    UNITWISE = "unitwise"
    GLOBAL = "global"
    POISSON = "poisson"


@dataclass(frozen=True)
class Trajectory:
    """One unit's distinct-visit path, strictly decreasing, plus where it died."""

    visits: tuple
    terminal: int | None

    def __post_init__(self):
        vs = self.visits
        if vs:
            if any(b >= a for a, b in zip(vs, vs[1:])):
                raise DomainError(f"visits must strictly decrease, got {vs}")
            if self.terminal != vs[-1]:
                raise DomainError("terminal must equal the last visit")
        elif self.terminal is not None:
            raise DomainError("empty trajectory cannot have a terminal")

    def __len__(self):
        return len(self.visits)


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    alpha: float
    semantics: LeakSemantics = LeakSemantics.REMOVE
    seed: int = 0
    engine: Engine = Engine.UNITWISE
    replicates: int = 1
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "semantics", LeakSemantics.parse(self.semantics))
        object.__setattr__(self, "engine", Engine(self.engine))
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.m < 1:
            raise DomainError(f"m = floor(alpha n) must be >= 1, got {self.m}")
        if self.replicates < 1 or self.threads < 1:
            raise DomainError("replicates and threads must be positive")
        if self.engine is Engine.POISSON and self.semantics is not LeakSemantics.STAY:
            raise DomainError("the poisson engine realizes stay semantics only")

    @property
    def m(self) -> int:
        return int(math.floor(self.alpha * self.n))


# -- single-unit sampling ---------------------------------------------


def sample_trajectory(n: int, start, semantics, stream: Stream) -> Trajectory:
    """Reference scalar walk; the kernels must reproduce it bit for bit.

    start = None draws the source uniformly on {1..n} (one extra draw,
    consumed before any move).
    """
    sem = LeakSemantics.parse(semantics)
    if start is None:
        v = stream.randbelow(n) + 1
    else:
        if not isinstance(start, (int, np.integer)) or not 1 <= start <= n:
            raise DomainError(f"start must be a rank in 1..{n}, got {start}")
        v = int(start)
    visits = [v]
    while v > 1:
        t = stream.randbelow(v) + 1
        if t == v:
            if sem is LeakSemantics.STAY:
                continue  # no-op, unit keeps drawing
            break  # leak
        visits.append(t)
        v = t
    return Trajectory(tuple(visits), visits[-1])


def sample_trajectory_poisson(n: int, stream: Stream) -> Trajectory:
    """Record representation: V_i = ceil(n exp(-eta_i)) over unit-rate
    Poisson points eta_i, skipping points that fall inside the current
    vertex's interval (the chain is memoryless, so per-point skipping is
    exactly the stay distinct-visit law)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    pos = 0.0
    cur = 0
    visits = []
    while True:
        pos += stream.exponential()
        v = max(1, math.ceil(n * math.exp(-pos)))
        if v == cur:
            continue
        visits.append(v)
        cur = v
        if v == 1:
            return Trajectory(tuple(visits), 1)


# -- event assembly ---------------------------------------------------


def _events_from_paths(visits, offsets, diagonal: bool):
    length = len(visits)
    if length == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    is_term = np.zeros(length, dtype=bool)
    last = offsets[1:] - 1
    is_term[last] = True
    p = np.nonzero(~is_term[:-1])[0]  # positions with an in-path successor
    src = visits[p]
    dst = visits[p + 1]
    if diagonal:
        src = np.concatenate([src, visits[last]])
        dst = np.concatenate([dst, visits[last]])
    return src, dst


def _accumulate(entries: dict, src, dst, n: int) -> None:
    if not len(src):
        return
    codes = src * np.int64(n + 1) + dst
    uniq, counts = np.unique(codes, return_counts=True)
    for code, c in zip(uniq.tolist(), counts.tolist()):
        key = (code // (n + 1), code % (n + 1))
        entries[key] = entries.get(key, 0) + c


def _block_ranges(m: int, blocks: int):
    size = -(-m // blocks)
    return [(lo, min(lo + size, m)) for lo in range(0, m, size)]


# -- engines -----------------------------------------------------------


def simulate_units(config: SimulationConfig, replicate: int = 0) -> ChargeFlowGraph:
    """m independent unit walks, merged additively.

    Streams are keyed (seed, replicate, unit), so the result is a pure
    function of those three and in particular thread-count independent.
    """
    stay = config.semantics is LeakSemantics.STAY

    def run(rg):
        return unit_paths(config.seed, replicate, rg[0], rg[1], config.n, stay)

    ranges = _block_ranges(config.m, config.threads)
    if config.threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            parts = list(pool.map(run, ranges))
    else:
        parts = [run(rg) for rg in ranges]

    entries: dict = {}
    for visits, offsets in parts:
        src, dst = _events_from_paths(visits, offsets,
                                      config.semantics.records_diagonal)
        _accumulate(entries, src, dst, config.n)
    return ChargeFlowGraph(n=config.n, m=config.m, semantics=config.semantics,
                           entries=entries, alpha=config.alpha, seed=config.seed)


def simulate_global(config: SimulationConfig, replicate: int = 0,
                    step_cap: int = 10_000_000) -> ChargeFlowGraph:
    """Literal event loop; equal in distribution to simulate_units.

    Draws (i, j) uniformly on {1..n}^2 each step. On a transfer the
    lowest-numbered unit stored at the source moves. Frozen units stop
    generating events entirely (otherwise they would shadow live units
    at the same vertex and the graph law would drift from remove).
    Intended for small n; the step cap only guards against misconfiguration.
    """
    sem = config.semantics
    s = Stream.for_unit(config.seed, replicate, 0)
    n, m = config.n, config.m
    pos = [s.randbelow(n) + 1 for _ in range(m)]  # uniform initial placement
    active = m
    entries: dict = {}
    steps = 0
    while active > 0:
        steps += 1
        if steps > step_cap:
            raise NumericError(f"global engine exceeded {step_cap} steps")
        i = s.randbelow(n) + 1
        j = s.randbelow(n) + 1
        u = next((k for k, p in enumerate(pos) if p == i), None)
        if u is None:
            continue  # source holds no charge
        if j < i:
            entries[(i, j)] = entries.get((i, j), 0) + 1
            pos[u] = j
        elif j == i:
            if sem is LeakSemantics.STAY:
                if i == 1:
                    pos[u] = 0
                    active -= 1
            else:
                entries[(i, i)] = entries.get((i, i), 0) + 1
                pos[u] = 0
                active -= 1
    return ChargeFlowGraph(n=n, m=m, semantics=sem, entries=entries,
                           alpha=config.alpha, seed=config.seed)


def simulate_poisson(config: SimulationConfig, replicate: int = 0) -> ChargeFlowGraph:
    """m record-representation walks; stay semantics, so no diagonal."""
    n, m = config.n, config.m
    entries: dict = {}
    src, dst = [], []
    for u in range(m):
        traj = sample_trajectory_poisson(n, Stream.for_unit(config.seed, replicate, u))
        src.extend(traj.visits[:-1])
        dst.extend(traj.visits[1:])
    _accumulate(entries, np.asarray(src, dtype=np.int64),
                np.asarray(dst, dtype=np.int64), n)
    return ChargeFlowGraph(n=n, m=m, semantics=config.semantics, entries=entries,
                           alpha=config.alpha, seed=config.seed)


def simulate(config: SimulationConfig, replicate: int = 0) -> ChargeFlowGraph:
    if config.engine is Engine.UNITWISE:
        return simulate_units(config, replicate)
    if config.engine is Engine.GLOBAL:
        return simulate_global(config, replicate)
    return simulate_poisson(config, replicate)


# -- coupling across n --------------------------------------------------


def restrict_trajectory(traj: Trajectory, n_small: int) -> Trajectory:
    """Suffix from the first visit inside {1..n_small}; may be empty."""
    if n_small < 1:
        raise DomainError(f"n_small must be >= 1, got {n_small}")
    for idx, v in enumerate(traj.visits):
        if v <= n_small:
            return Trajectory(traj.visits[idx:], traj.terminal)
    return Trajectory((), None)


def coupled_family(n_list, alpha, semantics, seed: int = 0,
                   replicate: int = 0) -> list[ChargeFlowGraph]:
    """Consistent coupling: simulate once at the largest n, restrict down.

    Unit u of the smaller system follows the suffix of its big-system
    path inside {1..n_small}; a unit that leaks before entering is
    dropped (keeps elementwise monotonicity; under remove the small
    graph's trace may fall short of its nominal m).
    """
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("n_list must be nonempty and strictly ascending")
    sem = LeakSemantics.parse(semantics)
    n_big = n_list[-1]
    m_big = int(math.floor(alpha * n_big))
    if m_big < 1:
        raise DomainError("alpha too small: largest system has no units")
    visits, offsets = unit_paths(seed, replicate, 0, m_big, n_big,
                                 sem is LeakSemantics.STAY)
    count = len(offsets) - 1
    lengths = np.diff(offsets)
    unit_of = np.repeat(np.arange(count, dtype=np.int64), lengths)
    is_term = np.zeros(len(visits), dtype=bool)
    last = offsets[1:] - 1
    is_term[last] = True

    graphs = []
    for n_small in n_list:
        m_small = int(math.floor(alpha * n_small))
        inside = visits <= n_small
        counted = unit_of < m_small
        valid = (~is_term[:-1]) & inside[:-1] & counted[:-1]
        p = np.nonzero(valid)[0]
        src = visits[p]
        dst = visits[p + 1]
        if sem.records_diagonal:
            dl = last[(visits[last] <= n_small) & (unit_of[last] < m_small)]
            src = np.concatenate([src, visits[dl]])
            dst = np.concatenate([dst, visits[dl]])
        entries: dict = {}
        _accumulate(entries, src, dst, n_small)
        graphs.append(ChargeFlowGraph(n=n_small, m=m_small, semantics=sem,
                                      entries=entries, alpha=alpha, seed=seed))
    return graphs


# -- bulk statistics ----------------------------------------------------


def sample_visit_counts(n: int, samples: int, semantics, seed: int = 0,
                        replicate: int = 0, block: int = 250_000) -> np.ndarray:
    """How many of `samples` independent units ever visit each rank.

    Paths hold distinct ranks, so a plain bincount over path entries is
    the per-rank visitor count; position i holds rank i+1.
    """
    sem = LeakSemantics.parse(semantics)
    counts = np.zeros(n + 1, dtype=np.int64)
    for lo in range(0, samples, block):
        hi = min(lo + block, samples)
        visits, _ = unit_paths(seed, replicate, lo, hi, n,
                               sem is LeakSemantics.STAY)
        counts += np.bincount(visits, minlength=n + 1)
    return counts[1:]
