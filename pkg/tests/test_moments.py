from math import factorial, pi

import numpy as np
import pytest
from scipy import integrate

from polyfock.cpoly import CPolynomial
from polyfock.errors import GridOrderTooLarge, QuadratureOrderInsufficient
from polyfock.fockbasis import phi_jk, phi_k
from polyfock.moments import (
    gauss_hermite,
    gh_grid_1d,
    gh_grid_2d,
    grid_for_degree,
    inner_poly,
    inner_product_dmu,
    integrate_poly_dmu,
    monomial_moment,
    order_for_degree,
)
from polyfock.verify import random_polys

Z, ZB = CPolynomial.z(), CPolynomial.zbar()


def test_monomial_moment_examples():
    assert monomial_moment(0, 0) == 1
    assert monomial_moment(1, 1) == pytest.approx(1 / pi, rel=1e-15)
    assert monomial_moment(2, 1) == 0


@pytest.mark.parametrize("a", range(5))
def test_monomial_moment_against_polar_integral(a):
    # independent oracle: radial integral of r^(2a) e^{-pi r^2} 2 pi r dr
    val, _ = integrate.quad(lambda r: r ** (2 * a) * np.exp(-pi * r * r) * 2 * pi * r, 0, np.inf)
    assert monomial_moment(a, a) == pytest.approx(val, rel=1e-10)


def test_gh_grid_1d_examples():
    g = gh_grid_1d(1)
    assert np.allclose(g.nodes, [0.0]) and np.allclose(g.weights, [1.0])
    g = gh_grid_1d(2)
    assert g.integrate(g.nodes**2) == pytest.approx(1 / (2 * pi), rel=1e-14)
    g = gh_grid_1d(4)
    oracle = gh_grid_1d(64)
    want = 15 / (8 * pi**3)
    assert oracle.integrate(oracle.nodes**6) == pytest.approx(want, rel=1e-12)
    assert g.integrate(g.nodes**6) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 20, 40, 64, 100])
def test_gauss_hermite_matches_numpy(n):
    x, w, scaled = gauss_hermite(n)
    xr, wr = np.polynomial.hermite.hermgauss(n)
    assert np.allclose(x, xr, rtol=0, atol=1e-12 * max(1, np.max(np.abs(xr))))
    assert np.allclose(w, wr, rtol=1e-10, atol=1e-300)
    assert np.allclose(scaled, wr * np.exp(xr**2), rtol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 7, 32, 128, 200])
def test_weights_positive_sum_one_nodes_symmetric(n):
    g = gh_grid_1d(n)
    assert np.all(g.weights > 0)
    assert g.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.sort(g.nodes), -np.sort(g.nodes)[::-1], atol=1e-14)
    g2 = gh_grid_2d(min(n, 60))
    assert g2.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_order_limits():
    with pytest.raises(GridOrderTooLarge):
        gh_grid_1d(201)
    with pytest.raises(ValueError):
        gh_grid_1d(0)


def test_order_mapping_and_insufficient_order():
    assert order_for_degree(0) == 1
    assert order_for_degree(12) == 13
    assert grid_for_degree(6).order == 7
    with pytest.raises(QuadratureOrderInsufficient):
        grid_for_degree(10, order=4)


@pytest.mark.parametrize("N", [1, 3, 6, 9])
def test_grid_exact_for_monomials_below_order(N):
    g = gh_grid_2d(N)
    for a in range(N):
        for b in range(N):
            got = g.integrate(g.nodes**a * np.conj(g.nodes) ** b)
            want = monomial_moment(a, b)
            assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_inner_product_examples():
    g = grid_for_degree(4)
    assert inner_product_dmu(phi_k(0), phi_k(0), g) == pytest.approx(1, abs=1e-14)
    assert inner_product_dmu(phi_k(1), phi_k(2), g) == pytest.approx(0, abs=1e-14)
    assert inner_product_dmu(phi_jk(1, 1), phi_jk(1, 1), g) == pytest.approx(1, abs=1e-13)


def test_integrate_poly_examples():
    assert integrate_poly_dmu(CPolynomial.constant(1)) == 1
    assert integrate_poly_dmu(pi * Z * ZB) == pytest.approx(1, rel=1e-15)
    assert integrate_poly_dmu(Z**2 * ZB) == 0


def test_oracle_agreement_fifty_random_polynomials():
    g = gh_grid_2d(8)
    for p in random_polys(50, 12, seed=11):
        # keep the part with per-variable degree below 8, where the 8-node rule is exact
        p = CPolynomial({k: c for k, c in p.items() if k[0] < 8 and k[1] < 8})
        quad = g.integrate(p(g.nodes))
        exact = integrate_poly_dmu(p)
        assert abs(quad - exact) <= 1e-10 * (1 + abs(exact))


def test_oracle_agreement_full_degree_at_mandated_order():
    for p in random_polys(50, 12, seed=12):
        g = grid_for_degree(p.degree)
        assert abs(g.integrate(p(g.nodes)) - integrate_poly_dmu(p)) <= 1e-10 * (1 + abs(integrate_poly_dmu(p)))


def test_recentred_grid_integrates_shifted_gaussian():
    c = 0.7 - 0.4j
    g = gh_grid_2d(6, c)
    w = g.nodes
    # integral of |w|^2 e^{-pi|w-c|^2} d^2w equals |c|^2 + 1/pi
    assert g.integrate(np.abs(w) ** 2) == pytest.approx(abs(c) ** 2 + 1 / pi, rel=1e-13)


def test_inner_poly_is_sesquilinear():
    p, q = random_polys(2, 4, seed=5)
    a = 0.3 - 1.2j
    assert inner_poly(a * p, q) == pytest.approx(a * inner_poly(p, q), rel=1e-13)
    assert inner_poly(p, a * q) == pytest.approx(np.conj(a) * inner_poly(p, q), rel=1e-13)
    assert inner_poly(p, q) == pytest.approx(np.conj(inner_poly(q, p)), rel=1e-13)


def test_moment_factorial_growth():
    assert monomial_moment(10, 10) == pytest.approx(factorial(10) / pi**10, rel=1e-15)
