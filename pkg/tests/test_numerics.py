import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from accelcs.numerics import (
    AIRY_SEAM_NEG,
    AIRY_SEAM_POS,
    Grid1D,
    WaveField,
    airy_ai,
    airy_ai_quadrature_oracle,
    central_second_derivative,
    first_derivative,
    grid_inner_product,
    integrate_adaptive,
    second_derivative_5pt,
    simpson_weights,
)
from oracles import airy_maclaurin, gaussian_overlap

# Frozen from the Maclaurin series oracle (oracles.airy_maclaurin).
AI_0 = 0.35502805388781724
AI_1 = 0.13529241631288141
AI_M1 = 0.53556088329235211


def test_airy_reference_values():
    assert airy_maclaurin(0.0) == pytest.approx(AI_0, abs=1e-15)
    assert airy_ai(0.0) == pytest.approx(AI_0, abs=1e-10)
    assert airy_ai(1.0) == pytest.approx(AI_1, abs=1e-10)
    assert airy_ai(-1.0) == pytest.approx(AI_M1, abs=1e-10)


def test_airy_accuracy_band():
    x = np.linspace(-10.0, 10.0, 2001)
    ref = scipy.special.airy(x)[0]
    assert np.max(np.abs(airy_ai(x) - ref)) < 1e-10


def test_airy_matches_series_oracle_spotwise():
    for x in (-5.5, -2.3, 0.7, 3.1, 5.9):
        assert airy_ai(x) == pytest.approx(airy_maclaurin(x), abs=1e-12)


def test_airy_seam_continuity():
    eps = 1e-13
    for seam in (AIRY_SEAM_POS, AIRY_SEAM_NEG):
        assert abs(airy_ai(seam - eps) - airy_ai(seam + eps)) <= 1e-10


def test_airy_ode_residual():
    # y'' = x y checked with the 4th-order central stencil at h = 1e-3.
    # Stencils straddling a branch seam amplify the (sub-1e-10) seam jump
    # by 1/h^2, so a small window around each seam is excluded.
    h = 1e-3
    x = np.linspace(-8.0, 4.0, 1201)
    x = x[np.abs(x - AIRY_SEAM_NEG) > 0.02]
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * h
    samples = airy_ai(x[:, None] + offsets[None, :])
    d2 = (
        -samples[:, 0]
        + 16.0 * samples[:, 1]
        - 30.0 * samples[:, 2]
        + 16.0 * samples[:, 3]
        - samples[:, 4]
    ) / (12.0 * h * h)
    residual = np.abs(d2 - x * samples[:, 2])
    assert residual.max() < 1e-7


def test_airy_rejects_non_finite():
    with pytest.raises(ValueError):
        airy_ai(float("nan"))
    with pytest.raises(ValueError):
        airy_ai(np.array([0.0, np.inf]))


def test_airy_quadrature_oracle():
    # The truncated oscillatory tail leaves a ~1/(pi u_max^2) boundary term,
    # about 1.6e-4 at u_max = 40; it falls below 1e-4 by u_max = 60.
    val, err, _ = airy_ai_quadrature_oracle(0.0, 40.0, 1e-4)
    assert val == pytest.approx(AI_0, abs=2.5e-4)
    assert err < 1e-5
    val60, _, _ = airy_ai_quadrature_oracle(0.0, 60.0, 1e-4)
    assert val60 == pytest.approx(AI_0, abs=1e-4)
    assert abs(val60 - AI_0) < abs(val - AI_0)
    val1, _, _ = airy_ai_quadrature_oracle(1.0, 60.0, 1e-4)
    assert val1 == pytest.approx(AI_1, abs=1e-4)
    empty = airy_ai_quadrature_oracle(0.0, 0.0, 1e-4)
    assert empty.value == 0.0


def test_integrate_adaptive_gaussian():
    value, err, converged = integrate_adaptive(
        lambda q: math.exp(-q * q), -8.0, 8.0, 1e-10
    )
    assert converged
    assert value.real == pytest.approx(math.sqrt(math.pi), abs=1e-9)


def test_integrate_adaptive_trivial_and_complex():
    assert integrate_adaptive(lambda q: 1.0, 0.0, 1.0, 1e-12).value == pytest.approx(1.0)
    value, _, _ = integrate_adaptive(lambda q: np.exp(1j * q), 0.0, math.pi, 1e-12)
    assert value == pytest.approx(2.0j, abs=1e-10)


def test_integrate_adaptive_against_scipy():
    f = lambda x: math.exp(-x * x) * math.cos(3.0 * x)
    mine = integrate_adaptive(f, -5.0, 5.0, 1e-11).value.real
    ref, _ = scipy.integrate.quad(f, -5.0, 5.0, epsabs=1e-13)
    assert mine == pytest.approx(ref, abs=1e-9)


def test_integrate_adaptive_flags_budget_exhaustion():
    wild = lambda x: math.sin(1.0 / (x + 1e-9))
    result = integrate_adaptive(wild, 1e-6, 1.0, 1e-14, max_intervals=64)
    assert not result.converged


def test_integrate_adaptive_rejects_bad_bounds():
    with pytest.raises(ValueError):
        integrate_adaptive(lambda q: q, 1.0, 0.0, 1e-8)


def _gaussian_field(grid, sigma, center=0.0, momentum=0.0, tau=0.0):
    def fn(q):
        return (
            (2.0 * math.pi * sigma * sigma) ** -0.25
            * np.exp(-((q - center) ** 2) / (4.0 * sigma * sigma))
            * np.exp(1j * momentum * q)
        )

    return WaveField.sample(grid, tau, fn)


def test_inner_product_normalization():
    grid = Grid1D(-10.0, 10.0, 2001)
    f = _gaussian_field(grid, 1.0 / math.sqrt(2.0))
    assert grid_inner_product(f, f) == pytest.approx(1.0, abs=1e-8)


def test_inner_product_disjoint_supports():
    grid = Grid1D(-20.0, 20.0, 4001)
    a = _gaussian_field(grid, 0.3, center=-8.0)
    b = _gaussian_field(grid, 0.3, center=8.0)
    assert abs(grid_inner_product(a, b)) < 1e-10


def test_inner_product_displaced_gaussian_overlap():
    sigma = 1.0 / math.sqrt(2.0)
    d = math.sqrt(2.0)
    grid = Grid1D(-12.0, 12.0, 3001)
    a = _gaussian_field(grid, sigma)
    b = _gaussian_field(grid, sigma, center=d)
    expect = gaussian_overlap(sigma, d)
    assert expect == pytest.approx(math.exp(-0.5), abs=1e-15)
    assert grid_inner_product(a, b).real == pytest.approx(expect, abs=1e-10)


def test_inner_product_conjugate_symmetry(rng):
    grid = Grid1D(-1.0, 1.0, 257)
    vals_a = rng.normal(size=257) + 1j * rng.normal(size=257)
    vals_b = rng.normal(size=257) + 1j * rng.normal(size=257)
    a = WaveField(grid, 0.0, vals_a)
    b = WaveField(grid, 0.0, vals_b)
    lhs = grid_inner_product(a, b)
    rhs = np.conj(grid_inner_product(b, a))
    assert abs(lhs - rhs) <= 1e-14 * abs(lhs)


def test_inner_product_contract_violations():
    g1 = Grid1D(-1.0, 1.0, 11)
    g2 = Grid1D(-1.0, 1.0, 21)
    a = WaveField(g1, 0.0, np.ones(11))
    b = WaveField(g2, 0.0, np.ones(21))
    with pytest.raises(ValueError):
        grid_inner_product(a, b)
    c = WaveField(g1, 1.0, np.ones(11))
    with pytest.raises(ValueError):
        grid_inner_product(a, c)


def test_central_second_derivative_quadratic_and_constant():
    grid = Grid1D(-1.0, 1.0, 201)
    quad = WaveField.sample(grid, 0.0, lambda q: q * q + 0j)
    for i in (1, 50, 100, 199):
        assert central_second_derivative(quad, i) == pytest.approx(2.0, abs=1e-9)
    flat = WaveField.sample(grid, 0.0, lambda q: np.full_like(q, 0.7) + 0j)
    assert central_second_derivative(flat, 5) == pytest.approx(0.0, abs=1e-12)


def test_central_second_derivative_harmonic_and_order():
    errors = []
    for n in (2001, 4001):
        grid = Grid1D(-1.0, 1.0, n)
        f = WaveField.sample(grid, 0.0, lambda q: np.exp(1j * q))
        i = n // 2
        qi = grid.nodes()[i]
        err = abs(central_second_derivative(f, i) + np.exp(1j * qi))
        errors.append(err)
    assert errors[0] < 1e-6
    ratio = errors[0] / errors[1]
    assert 3.6 <= ratio <= 4.4


def test_central_second_derivative_boundary_raises():
    grid = Grid1D(-1.0, 1.0, 11)
    f = WaveField(grid, 0.0, np.ones(11))
    with pytest.raises(ValueError):
        central_second_derivative(f, 0)
    with pytest.raises(ValueError):
        central_second_derivative(f, 10)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 11, 12])
def test_simpson_weights_integrate_cubics(n):
    a, b = -1.0, 2.0
    h = (b - a) / (n - 1)
    w = simpson_weights(n, h)
    x = np.linspace(a, b, n)
    assert np.dot(w, x ** 3) == pytest.approx((b ** 4 - a ** 4) / 4.0, abs=1e-12)
    assert np.dot(w, np.ones(n)) == pytest.approx(b - a, abs=1e-12)


def test_first_derivative_accuracy():
    grid = Grid1D(-2.0, 2.0, 2001)
    q = grid.nodes()
    d = first_derivative(np.exp(1j * 3.0 * q), grid.h)
    interior = slice(2, -2)
    assert np.max(np.abs(d[interior] - 3j * np.exp(1j * 3.0 * q[interior]))) < 1e-9


def test_second_derivative_5pt_accuracy():
    grid = Grid1D(-2.0, 2.0, 2001)
    q = grid.nodes()
    d = second_derivative_5pt(np.sin(2.0 * q), grid.h)
    interior = slice(2, -2)
    assert np.max(np.abs(d[interior] + 4.0 * np.sin(2.0 * q[interior]))) < 1e-9


def test_grid_and_field_invariants():
    with pytest.raises(ValueError):
        Grid1D(1.0, -1.0, 11)
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 2)
    grid = Grid1D(0.0, 1.0, 5)
    with pytest.raises(ValueError):
        WaveField(grid, 0.0, np.ones(4))
    with pytest.raises(ValueError):
        WaveField(grid, 0.0, np.array([1.0, np.nan, 1.0, 1.0, 1.0]))
