import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from semiclassical import GridConfig, analytic_spectrum, count_levels, eigenvalues_fd, make_catalog_potential
from semiclassical.oracle import CONTAMINATED, fd_matrix, sturm_count

BETA = 0.1


def test_harmonic_box(harmonic):
    res = eigenvalues_fd(harmonic, BETA, GridConfig(half_width=5), 3)
    np.testing.assert_allclose(res.energies, [0.1, 0.3, 0.5], atol=1e-6)
    assert res.flags == ()
    assert res.bounds == (-5.0, 5.0)


def test_poschl_teller_ground_state(poschl_teller):
    res = eigenvalues_fd(poschl_teller, BETA, GridConfig(half_width=12), 1)
    assert res.energies[0] == pytest.approx(-0.9048750, abs=1e-6)


def test_morse_explicit_bounds(morse):
    res = eigenvalues_fd(morse, BETA, GridConfig(bounds=(-2.0, 14.0)), 3)
    exact = analytic_spectrum("morse", {"D": 1, "alpha": 1}, BETA)[:3]
    np.testing.assert_allclose(res.energies, exact, atol=1e-6)


def test_second_order_convergence(harmonic):
    res = eigenvalues_fd(harmonic, BETA, GridConfig(half_width=5, n_points=1000), 3)
    exact = np.array([0.1, 0.3, 0.5])
    ratio = np.abs(res.coarse - exact) / np.abs(res.fine - exact)
    assert np.all((ratio > 3.5) & (ratio < 4.5))
    # Richardson removes the leading h^2 term
    assert np.all(np.abs(res.energies - exact) < 0.01 * np.abs(res.fine - exact))


def test_richardson_can_be_disabled(harmonic):
    res = eigenvalues_fd(harmonic, BETA, GridConfig(half_width=5, richardson=False), 2)
    assert res.fine is None
    np.testing.assert_array_equal(res.energies, res.coarse)


def test_default_box_resolves_all_bound_levels(poschl_teller):
    n = count_levels(poschl_teller, BETA, "full")
    res = eigenvalues_fd(poschl_teller, BETA, GridConfig(n_points=8000), n)
    np.testing.assert_allclose(res.energies, analytic_spectrum("poschl_teller", {"V0": 1, "alpha": 1}, BETA),
                               atol=1e-5)


def test_sturm_count_at_threshold_matches_level_count(poschl_teller):
    _, diag, off = fd_matrix(poschl_teller, BETA, -25.0, 25.0, 8000)
    assert sturm_count(diag, off, poschl_teller.depth) == count_levels(poschl_teller, BETA, "full") == 10


def test_too_many_levels_requested(poschl_teller):
    with pytest.raises(ValueError, match="bound states"):
        eigenvalues_fd(poschl_teller, BETA, GridConfig(half_width=20), 11)


def test_small_box_is_flagged(poschl_teller):
    res = eigenvalues_fd(poschl_teller, BETA, GridConfig(half_width=3), 6)
    assert CONTAMINATED in res.flags


def test_shift_moves_eigenvalues():
    base = make_catalog_potential("gaussian_well", {"V0": 5, "w": 1})
    grid = GridConfig(half_width=6)
    a = eigenvalues_fd(base, BETA, grid, 4).energies
    b = eigenvalues_fd(base.shifted_by(1.0), BETA, grid, 4).energies
    np.testing.assert_allclose(b - a, 1.0, atol=1e-12)


def test_sturm_count_examples():
    assert sturm_count([2.0, 2.0], -1.0, 0.5) == 0
    assert sturm_count([2.0, 2.0], -1.0, 2.0) == 1
    assert sturm_count([2.0, 2.0], -1.0, 3.5) == 2
    assert sturm_count([5.0], [], 6.0) == 1


@seed(20260101)
@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**31 - 1))
def test_sturm_count_monotone_and_matches_eigenvalues(size, rng_seed):
    rng = np.random.default_rng(rng_seed)
    d = rng.normal(size=size)
    e = rng.normal(size=size - 1)
    lams = np.sort(rng.normal(scale=3.0, size=8))
    counts = [sturm_count(d, e, lam) for lam in lams]
    assert counts == sorted(counts)
    w = eigvalsh_tridiagonal(d, e)
    for lam, c in zip(lams, counts):
        if np.min(np.abs(w - lam)) > 1e-9:
            assert c == int(np.sum(w < lam))


def test_bad_grid_config():
    with pytest.raises(ValueError):
        GridConfig(n_points=10)
    with pytest.raises(ValueError):
        GridConfig(bounds=(1.0, -1.0))
    with pytest.raises(ValueError):
        GridConfig(half_width=0.0)


def test_m_must_be_positive(harmonic):
    with pytest.raises(ValueError):
        eigenvalues_fd(harmonic, BETA, m=0)


def test_sturm_count_on_harmonic_discretization(harmonic):
    _, diag, off = fd_matrix(harmonic, BETA, -5.0, 5.0, 4000)
    assert sturm_count(diag, off, 0.2) == 1
    assert sturm_count(diag, off, float(diag.min()) - 2 * abs(off) - 1e-9) == 0
    # one above each of the first five levels
    assert [sturm_count(diag, off, lam) for lam in (0.11, 0.31, 0.51, 0.71, 0.91)] == [1, 2, 3, 4, 5]
