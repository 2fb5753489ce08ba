import cmath
import math

import numpy as np
import pytest

from popuc.verblunsky import VerblunskyModel
from popuc.zeros import (ConvergenceError, count_zeros_in, durand_kerner, find_zeros, oracle_zeros,
                         popuc_coefficients)

from conftest import cyclic_match

TWO_PI = 2 * math.pi


def quadratic_roots(c0, c1):
    """Roots of z^2 + c1 z + c0 by the quadratic formula."""
    disc = cmath.sqrt(c1 * c1 - 4 * c0)
    return (-c1 + disc) / 2, (-c1 - disc) / 2


def test_free_case_quartic():
    zs = find_zeros(VerblunskyModel.zero(), 3, 1)
    np.testing.assert_allclose(zs.thetas, [0, math.pi / 2, math.pi, 3 * math.pi / 2], atol=1e-13)
    assert zs.n_plus_1 == 4


def test_degree_one():
    zs = find_zeros(VerblunskyModel.zero(), 0, 1j)
    np.testing.assert_allclose(zs.thetas, [3 * math.pi / 2], atol=1e-13)
    zs = find_zeros(VerblunskyModel.iid_uniform_disk(0.5, 1), 0, cmath.exp(0.25j))
    np.testing.assert_allclose(zs.thetas, [TWO_PI - 0.25], atol=1e-13)


def test_quadratic_case_matches_formula():
    a, beta = 0.5, 1.0
    # z^2 - conj(a) z + conj(beta) a z - conj(beta)
    c1 = -np.conj(a) + np.conj(beta) * a
    c0 = -np.conj(beta)
    expected = sorted(cmath.phase(r) % TWO_PI for r in quadratic_roots(c0, c1))
    zs = find_zeros(VerblunskyModel.constant(a), 1, beta)
    np.testing.assert_allclose(zs.thetas, expected, atol=1e-12)
    np.testing.assert_allclose(zs.thetas, [0, math.pi], atol=1e-12)
    np.testing.assert_allclose(oracle_zeros(VerblunskyModel.constant(a), 1, beta).thetas, expected, atol=1e-12)


def test_quadratic_general_complex():
    a, beta = 0.3 - 0.55j, cmath.exp(2.2j)
    c1 = -np.conj(a) + np.conj(beta) * a
    c0 = -np.conj(beta)
    expected = sorted(cmath.phase(r) % TWO_PI for r in quadratic_roots(c0, c1))
    model = VerblunskyModel.constant(a)
    assert cyclic_match(find_zeros(model, 1, beta).thetas, np.array(expected)) < 1e-12
    assert cyclic_match(oracle_zeros(model, 1, beta).thetas, np.array(expected)) < 1e-12


def test_popuc_coefficients_small():
    coeffs = popuc_coefficients(np.array([0.5]), 1.0)
    np.testing.assert_allclose(coeffs, [-1, 0, 1])
    coeffs = popuc_coefficients(np.zeros(3), 1j)
    np.testing.assert_allclose(coeffs, [1j, 0, 0, 0, 1])


def test_oracle_cube_roots():
    zs = oracle_zeros(VerblunskyModel.zero(), 2, 1)
    np.testing.assert_allclose(zs.thetas, [0, TWO_PI / 3, 2 * TWO_PI / 3], atol=1e-12)


def test_durand_kerner_against_companion_matrix():
    rng = np.random.default_rng(5)
    for deg in (3, 8, 15):
        roots = rng.normal(size=deg) + 1j * rng.normal(size=deg)
        coeffs = np.poly(roots)[::-1]
        found = durand_kerner(coeffs, 1 + np.abs(roots).max())
        for r in roots:
            assert np.min(np.abs(found - r)) < 1e-8


def test_durand_kerner_reports_nonconvergence():
    with pytest.raises(ConvergenceError):
        durand_kerner(np.array([1.0, 0, 0, 0, 0, 0, 0, 1]), 2.0, max_sweeps=2)


def test_oracle_degree_limit():
    with pytest.raises(ValueError):
        oracle_zeros(VerblunskyModel.zero(), 51, 1)


@pytest.mark.parametrize("seed", range(12))
def test_find_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    model = VerblunskyModel.iid_uniform_disk(float(rng.uniform(0.1, 0.95)), seed)
    n = int(rng.integers(1, 31))
    beta = cmath.exp(1j * rng.uniform(0, TWO_PI))
    fast, slow = find_zeros(model, n, beta), oracle_zeros(model, n, beta)
    assert fast.thetas.size == slow.thetas.size == n + 1
    assert cyclic_match(fast.thetas, slow.thetas) < 1e-8


@pytest.mark.parametrize("model", [
    VerblunskyModel.zero(),
    VerblunskyModel.constant(-0.7),
    VerblunskyModel.power_decay(0.5, 0.5),
    VerblunskyModel.iid_uniform_disk(0.9, 77),
], ids=["zero", "geronimus", "power", "iid"])
@pytest.mark.parametrize("n", [0, 1, 9, 64, 257])
def test_zero_set_structure(model, n):
    tol = 1e-12
    zs = find_zeros(model, n, cmath.exp(0.77j), tol)
    assert zs.thetas.size == n + 1
    assert np.all(zs.thetas >= 0) and np.all(zs.thetas < TWO_PI)
    assert np.all(np.diff(zs.thetas) > 2 * tol)
    growth = np.prod(1 + np.abs(model.coefficients(n)))
    assert np.all(zs.residuals < 1e-8 * growth)
    assert count_zeros_in(model, n, zs.beta, 0.0, TWO_PI) == zs.thetas.size


@pytest.mark.parametrize("seed", range(6))
def test_beta_interlacing(seed):
    rng = np.random.default_rng(100 + seed)
    model = VerblunskyModel.iid_uniform_disk(float(rng.uniform(0.2, 0.9)), seed)
    n = int(rng.integers(2, 31))
    b1, b2 = cmath.exp(1j * rng.uniform(0, TWO_PI)), cmath.exp(1j * rng.uniform(0, TWO_PI))
    for zs1, zs2 in ((find_zeros(model, n, b1), find_zeros(model, n, b2)),
                     (oracle_zeros(model, n, b1), oracle_zeros(model, n, b2))):
        merged = sorted([(t, 0) for t in zs1.thetas] + [(t, 1) for t in zs2.thetas])
        labels = [lab for _, lab in merged]
        assert all(labels[i] != labels[(i + 1) % len(labels)] for i in range(len(labels)))


def test_count_examples():
    model = VerblunskyModel.iid_uniform_disk(0.6, 8)
    assert count_zeros_in(model, 20, 1, 0.0, TWO_PI) == 21
    assert count_zeros_in(model, 20, 1, 1.0, 1.0) == 0
    with pytest.raises(ValueError):
        count_zeros_in(model, 20, 1, 1.0, 0.5)
    with pytest.raises(ValueError):
        count_zeros_in(model, 20, 1, 0.0, 7.0)


def test_geronimus_gap_has_no_zeros():
    x = 2 * math.asin(0.6)
    assert count_zeros_in(VerblunskyModel.constant(-0.6), 400, -1, -x + 1e-3, x - 1e-3) == 0


@pytest.mark.parametrize("seed", range(5))
def test_count_agrees_with_filtering(seed):
    rng = np.random.default_rng(seed)
    model = VerblunskyModel.power_decay(0.8, 0.4, "random", seed)
    n, beta = 60, cmath.exp(1j * rng.uniform(0, TWO_PI))
    thetas = find_zeros(model, n, beta).thetas
    for _ in range(20):
        a = float(rng.uniform(-TWO_PI, TWO_PI))
        b = a + float(rng.uniform(0, TWO_PI))
        lo = (thetas - a) % TWO_PI
        expected = int(np.count_nonzero(lo < b - a))
        assert count_zeros_in(model, n, beta, a, b) == expected


def test_threaded_solve_matches_serial(monkeypatch):
    model = VerblunskyModel.iid_uniform_disk(0.5, 19)
    serial = find_zeros(model, 120, 1j)
    monkeypatch.setenv("POPUC_THREADS", "3")
    threaded = find_zeros(model, 120, 1j)
    np.testing.assert_array_equal(serial.thetas, threaded.thetas)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("POPUC_THREADS", "zero")
    with pytest.raises(ValueError):
        find_zeros(VerblunskyModel.zero(), 3, 1)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        find_zeros(VerblunskyModel.zero(), 3, 1, tol_theta=1e-3)
    with pytest.raises(ValueError, match="unimodular"):
        find_zeros(VerblunskyModel.zero(), 3, 2.0)


def test_seam_zero_wraps_to_zero():
    # real positive, non-summable coefficients: the beta = 1 zero sits at theta = 0
    zs = find_zeros(VerblunskyModel.power_decay(0.5, 0.5), 1600, 1)
    assert zs.thetas[0] == 0.0
    assert zs.thetas.size == 1601
