"""Root counting for the constant states and the bistability threshold."""

import logging
import math

import numpy as np
import pytest
from scipy.optimize import brentq

import nlfield as nf

TANH = nf.Nonlinearity.tanh()


def closed_form_h_star(beta: float) -> float:
    r = math.sqrt(1.0 - 1.0 / beta)
    return r - math.atanh(r) / beta


# ---------------------------------------------------------------------------
# count_roots
# ---------------------------------------------------------------------------

def test_three_roots_below_threshold(s_star):
    report = nf.count_roots(2.0, 0.0, TANH)
    assert report.count == 3
    assert report.roots == pytest.approx((-s_star, 0.0, s_star), abs=1e-10)
    assert report.tangencies == ()


def test_single_root_for_weak_gain():
    report = nf.count_roots(0.5, 0.0, TANH)
    assert report.count == 1
    assert abs(report.roots[0]) < 1e-10


def test_single_root_above_threshold():
    report = nf.count_roots(2.0, 0.5, TANH)
    assert report.count == 1
    assert report.roots[0] > 0.9


def test_root_report_invariants():
    for beta, h in ((2.0, 0.0), (2.0, 0.1), (4.0, 0.3), (1.5, 0.05), (0.7, 0.2)):
        report = nf.count_roots(beta, h, TANH)
        assert report.beta == beta and report.h == h
        for s, res in zip(report.roots, report.residuals):
            assert res <= 1e-10
            assert abs(math.tanh(beta * s + beta * h) - s) <= 1e-10
        gaps = np.diff(report.roots)
        assert np.all(gaps > 1e-8)


def test_count_transitions_at_threshold():
    h_star = closed_form_h_star(2.0)
    assert nf.count_roots(2.0, h_star - 1e-3, TANH).count == 3
    assert nf.count_roots(2.0, h_star + 1e-3, TANH).count == 1


def test_tangency_detected_at_exact_threshold():
    # at the fold the lower pair merges at s = -sqrt(1 - 1/beta)
    report = nf.count_roots(2.0, closed_form_h_star(2.0), TANH)
    assert report.count == 1
    assert len(report.tangencies) == 1
    assert report.tangencies[0] == pytest.approx(-math.sqrt(0.5), abs=1e-3)


def test_count_roots_validation():
    with pytest.raises(ValueError):
        nf.count_roots(-1.0, 0.0, TANH)


@pytest.mark.parametrize("beta", [1.5, 2.0, 4.0])
def test_root_count_phase_diagram(beta):
    h_star = closed_form_h_star(beta)
    for h in np.linspace(0.0, h_star - 1e-4, 8):
        assert nf.count_roots(beta, float(h), TANH).count == 3
    for h in np.linspace(h_star + 1e-4, 1.0, 8):
        assert nf.count_roots(beta, float(h), TANH).count == 1


# ---------------------------------------------------------------------------
# compute_h_star
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("beta", [2.0, 4.0])
def test_h_star_matches_closed_form(beta):
    computed = nf.compute_h_star(beta, TANH)
    assert abs(computed - closed_form_h_star(beta)) <= 1e-6
    assert abs(computed - nf.tanh_h_star(beta)) <= 1e-6


def test_h_star_beta_four_anchor():
    assert nf.compute_h_star(4.0, TANH) == pytest.approx(0.5367856, abs=1e-6)


def test_closed_form_saddle_node_consistency():
    # the fold solves sech^2(beta s + beta h) = 1/beta with s a root;
    # recover h* independently from that system via a root finder
    beta = 2.0
    arg = math.atanh(math.sqrt(1.0 - 1.0 / beta))  # beta*(s+h) at the fold

    def fold_residual(h):
        s = -math.sqrt(1.0 - 1.0 / beta)  # tanh(-arg)
        return beta * (s + h) + arg

    h_from_fold = brentq(fold_residual, 0.0, 1.0, xtol=1e-14)
    assert nf.compute_h_star(beta, TANH) == pytest.approx(h_from_fold, abs=1e-6)


def test_h_star_monotone_in_beta():
    ladder = [1.05, 1.2, 1.5, 2.0, 3.0, 4.0]
    values = [nf.compute_h_star(b, TANH) for b in ladder]
    assert all(v > 0.0 for v in values)
    assert all(a < b for a, b in zip(values, values[1:]))


def test_h_star_degenerate_below_one(caplog):
    with caplog.at_level(logging.WARNING, logger="nlfield.bifurcation"):
        assert nf.compute_h_star(0.8, TANH) == 0.0
    assert any("h* undefined" in r.getMessage() for r in caplog.records)


def test_h_star_requires_bistable_family():
    with pytest.raises(nf.NotBistableError):
        nf.compute_h_star(2.0, nf.Nonlinearity.zero())
