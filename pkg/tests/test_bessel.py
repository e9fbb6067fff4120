import math

import numpy as np
import pytest
import scipy.special as sp

from spikeflow.errors import DomainError, NumericError
from spikeflow.oracle import bessel_j, j0, j1, j1_prime, j1_zero, j1_zeros

# Textbook values (Abramowitz & Stegun), independent of any library.
KNOWN = [
    (0, 0.0, 1.0),
    (1, 0.0, 0.0),
    (0, 1.0, 0.7651976865579666),
    (1, 1.0, 0.4400505857449335),
    (0, 2.0, 0.2238907791412357),
    (1, 2.0, 0.5767248077568734),
]

KNOWN_ZEROS = [
    (1, 3.831705970207512),
    (2, 7.015586669815619),
    (3, 10.173468135062722),
    (5, 16.470630050877634),
]


@pytest.mark.parametrize("order,x,value", KNOWN)
def test_against_tabulated_values(order, x, value):
    assert bessel_j(order, x) == pytest.approx(value, abs=1e-15)


def test_against_scipy_dense_grid():
    xs = np.linspace(0.0, 100.0, 4001)
    for order, ref in ((0, sp.j0), (1, sp.j1)):
        ours = np.array([bessel_j(order, x) for x in xs])
        assert np.max(np.abs(ours - ref(xs))) < 1e-13


def test_branch_seam_is_smooth():
    # series / asymptotic switchover must not leave a jump
    xs = np.linspace(14.99, 15.01, 41)
    vals = np.array([j1(x) for x in xs])
    assert np.max(np.abs(np.diff(vals))) < 1e-3
    assert np.max(np.abs(vals - sp.j1(xs))) < 1e-13


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_j(2, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0, -0.5)
    with pytest.raises(DomainError):
        j1_zero(0)


def test_derivative_identity():
    # J1'(x) = J0(x) - J1(x)/x, cross-checked against a central difference
    for x in (0.7, 3.1, 12.5, 40.0):
        h = 1e-6
        fd = (j1(x + h) - j1(x - h)) / (2 * h)
        assert j1_prime(x) == pytest.approx(fd, abs=5e-9)


@pytest.mark.parametrize("k,location", KNOWN_ZEROS)
def test_zero_locations(k, location):
    z = j1_zero(k)
    assert z.index == k
    assert z.location == pytest.approx(location, abs=1e-11)
    assert z.residual <= 1e-12


def test_zeros_batch_consistency():
    zeros = j1_zeros(30)
    assert [z.index for z in zeros] == list(range(1, 31))
    locs = [z.location for z in zeros]
    assert all(b - a > 2.9 for a, b in zip(locs, locs[1:]))
    # spacing approaches pi from above
    spacings = np.diff(locs)
    assert spacings[-1] == pytest.approx(math.pi, abs=1e-3)
    assert abs(spacings[-1] - math.pi) < abs(spacings[0] - math.pi)


def test_zero_against_scipy():
    ref = sp.jn_zeros(1, 40)
    ours = [z.location for z in j1_zeros(40)]
    assert np.max(np.abs(np.array(ours) - ref)) < 1e-10
