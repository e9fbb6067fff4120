"""The compiled kernel, the vectorized fallback, and the scalar reference walk
must produce bit-identical paths."""

import os
import subprocess
import sys

import numpy as np
import pytest

from spikeflow import _backend, _kernels_py
from spikeflow._rng import Stream
from spikeflow.dynamics import sample_trajectory

try:
    from spikeflow import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

CASES = [
    (50, 0, 200, False),
    (50, 0, 200, True),
    (1000, 37, 99, False),
    (1000, 37, 99, True),
    (2, 0, 500, False),
    (2, 0, 500, True),
    (1, 0, 50, False),
]


@pytest.mark.skipif(_kernels is None, reason="compiled kernel unavailable")
@pytest.mark.parametrize("n,lo,hi,stay", CASES)
def test_compiled_matches_pure_python(n, lo, hi, stay):
    v1, o1 = _kernels.unit_paths(987654321, 4, lo, hi, n, stay)
    v2, o2 = _kernels_py.unit_paths(987654321, 4, lo, hi, n, stay)
    assert np.array_equal(v1, v2)
    assert np.array_equal(o1, o2)


@pytest.mark.parametrize("n,lo,hi,stay", [(50, 0, 60, False), (50, 0, 60, True), (7, 3, 40, False)])
def test_kernel_matches_scalar_reference(n, lo, hi, stay):
    semantics = "stay" if stay else "remove"
    visits, offsets = _backend.unit_paths(777, 2, lo, hi, n, stay)
    for u in range(lo, hi):
        stream = Stream.for_unit(777, 2, u)
        expected = sample_trajectory(n, None, semantics, stream)
        got = tuple(int(x) for x in visits[offsets[u - lo] : offsets[u - lo + 1]])
        assert got == expected.visits


def test_offsets_shape_and_monotone():
    visits, offsets = _backend.unit_paths(3, 0, 10, 25, 100, False)
    assert offsets.shape == (16,)
    assert offsets[0] == 0
    assert offsets[-1] == len(visits)
    assert (np.diff(offsets) >= 1).all()


def test_env_var_forces_pure_python():
    code = (
        "import spikeflow._backend as b; "
        "assert b.BACKEND == 'python', b.BACKEND; "
        "print(b.BACKEND)"
    )
    env = dict(os.environ, SPIKEFLOW_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"


def test_backend_name_exported():
    assert _backend.BACKEND in {"cython", "python"}
