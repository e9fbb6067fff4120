"""Trajectory kernels, numpy edition.

Fallback for the compiled extension: simulates all units of a block in
lockstep, one effective draw per live unit per iteration. Produces the
same bits as the compiled kernel because each unit consumes draws from
its own counter-based stream in the same order; only the schedule
differs.
"""
from __future__ import annotations

import numpy as np

from ._rng import GOLDEN, MASK64, MIX_A, MIX_B

BACKEND_NAME = "python"

_U = np.uint64
_GOLDEN = _U(GOLDEN)
_MIX_A = _U(MIX_A)
_MIX_B = _U(MIX_B)


def _mix64_vec(z):
    z = (z ^ (z >> _U(30))) * _MIX_A
    z = (z ^ (z >> _U(27))) * _MIX_B
    return z ^ (z >> _U(31))


def _stream_keys(master, replicate, lo, hi):
    # first two steps of the key chain are unit-independent
    k = _mix64_vec(np.asarray([(master + GOLDEN) & MASK64], dtype=np.uint64))
    k = _mix64_vec(k + _U(replicate & MASK64))
    units = np.arange(lo, hi, dtype=np.uint64)
    return _mix64_vec(k + units)


def _randbelow_vec(keys, counters, bounds, lanes):
    """Masked-rejection uniform draws for the given lanes.

    A bound of 1 yields 0 without consuming a draw, matching
    Stream.randbelow; rejected lanes redraw from their own stream only.
    """
    b = bounds.astype(np.uint64)
    out = np.zeros(len(b), dtype=np.uint64)
    mask = b - _U(1)
    for s in (1, 2, 4, 8, 16, 32):
        mask |= mask >> _U(s)
    pending = b > _U(1)
    while pending.any():
        idx = np.nonzero(pending)[0]
        sel = lanes[idx]
        counters[sel] += _U(1)
        r = _mix64_vec(keys[sel] + counters[sel] * _GOLDEN) & mask[idx]
        ok = r < b[idx]
        out[idx[ok]] = r[ok]
        pending[idx[ok]] = False
    return out


def unit_paths(master, replicate, lo, hi, n, stay):
    """Sample trajectories for units lo..hi-1.

    Returns (visits, offsets): visits holds the concatenated distinct-visit
    paths in unit order; path u occupies visits[offsets[u]:offsets[u+1]].
    """
    count = hi - lo
    if count <= 0:
        return np.empty(0, dtype=np.int64), np.zeros(1, dtype=np.int64)
    with np.errstate(over="ignore"):
        keys = _stream_keys(master, replicate, lo, hi)
        counters = np.zeros(count, dtype=np.uint64)
        lanes = np.arange(count, dtype=np.int64)

        v = _randbelow_vec(keys, counters, np.full(count, n, dtype=np.int64),
                           lanes).astype(np.int64) + 1
        rec_units = [lanes.copy()]
        rec_verts = [v.copy()]

        live = lanes
        while True:
            live = live[v[live] > 1]  # forced self-pick at rank 1, no draw
            if not live.size:
                break
            t = _randbelow_vec(keys, counters, v[live], live).astype(np.int64) + 1
            self_pick = t == v[live]
            moved = live[~self_pick]
            v[moved] = t[~self_pick]
            rec_units.append(moved)
            rec_verts.append(v[moved].copy())
            if not stay:
                live = moved  # self-pick leaks the unit
            # stay: self-picks are no-ops, the lane redraws next round

    units = np.concatenate(rec_units)
    verts = np.concatenate(rec_verts)
    order = np.argsort(units, kind="stable")  # iteration order is step order
    visits = verts[order]
    lengths = np.bincount(units, minlength=count)
    offsets = np.zeros(count + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    return visits, offsets
