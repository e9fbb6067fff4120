import numpy as np
import pytest

from spikeflow.errors import DomainError
from spikeflow.oracle import (
    exact_edge_probability,
    expected_path_length,
    visit_probabilities,
)


def test_hand_computed_n2_remove():
    # start uniform on {1,2}; at 2 the walk moves to 1 or self-terminates, 50/50
    probs = visit_probabilities(2, "remove")
    assert probs[0] == pytest.approx(3 / 4)
    assert probs[1] == pytest.approx(1 / 2)


def test_hand_computed_n2_stay():
    # stay: self-picks at 2 are no-ops, so vertex 1 is always reached
    probs = visit_probabilities(2, "stay")
    assert probs[0] == pytest.approx(1.0)
    assert probs[1] == pytest.approx(1 / 2)


@pytest.mark.parametrize("semantics", ["remove", "stay"])
@pytest.mark.parametrize("n", [5, 50, 400])
def test_closed_form_matches_raw_dp(n, semantics):
    closed = visit_probabilities(n, semantics, method="closed")
    raw = visit_probabilities(n, semantics, method="dp")
    assert np.allclose(closed, raw, rtol=1e-13, atol=0)


def test_closed_forms():
    n = 100
    u = np.arange(1, n + 1)
    assert np.allclose(visit_probabilities(n, "remove"), (n + 1) / (n * (u + 1)))
    assert np.allclose(visit_probabilities(n, "stay"), 1 / u)


def test_freeze_equals_remove():
    assert np.array_equal(visit_probabilities(30, "freeze"), visit_probabilities(30, "remove"))
    pf, vf = exact_edge_probability(30, "freeze")
    pr, vr = exact_edge_probability(30, "remove")
    assert np.array_equal(pf, pr)
    assert np.array_equal(vf, vr)


def test_edge_matrix_remove():
    n = 60
    probs, visits = exact_edge_probability(n, "remove")
    assert probs.shape == (n, n)
    assert np.array_equal(probs, probs.T)
    # each trajectory leaks exactly once, so diagonal mass sums to 1
    assert np.trace(probs) == pytest.approx(1.0, abs=1e-12)
    # each trajectory makes E[len] - 1 transfers, each an off-diagonal event
    offdiag = probs.sum() - np.trace(probs)
    assert offdiag / 2 == pytest.approx(expected_path_length(n, "remove") - 1, abs=1e-10)
    i, j = 9, 4  # U = 10
    assert probs[i, j] == pytest.approx((n + 1) / (n * 10 * 11))
    assert np.array_equal(visits, visit_probabilities(n, "remove"))


def test_edge_matrix_stay():
    n = 60
    probs, _ = exact_edge_probability(n, "stay")
    assert np.all(np.diag(probs) == 0)
    assert probs[9, 4] == pytest.approx(1 / (10 * 9))
    offdiag = probs.sum() / 2
    assert offdiag == pytest.approx(expected_path_length(n, "stay") - 1, abs=1e-10)


def test_expected_path_length_is_harmonic_like():
    # E[len] is the sum of visit probabilities; stay gives 1 + H_n - 1 exactly
    n = 1000
    u = np.arange(1, n + 1)
    assert expected_path_length(n, "stay") == pytest.approx(np.sum(1 / u))
    assert expected_path_length(n, "remove") == pytest.approx(
        np.sum((n + 1) / (n * (u + 1.0)))
    )


def test_validation():
    with pytest.raises(DomainError):
        visit_probabilities(0, "remove")
    with pytest.raises(DomainError):
        visit_probabilities(10, "leak")
    with pytest.raises(DomainError):
        visit_probabilities(10, "remove", method="guess")
    with pytest.raises(DomainError):
        exact_edge_probability(6000, "remove")  # dense cap
