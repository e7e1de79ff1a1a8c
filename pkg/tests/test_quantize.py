import warnings
from math import pi, sqrt

import numpy as np
import pytest

from polyfock.cpoly import CPolynomial, DiffOp, anti_wick, heat_flow
from polyfock.errors import (
    DivergentWeight,
    NotDivisible,
    TruncationWarning,
    UnboundedSymbol,
    WindowSubspaceViolation,
)
from polyfock.fockbasis import HermiteSignal, phi_jk, phi_k
from polyfock.kernels import weyl_apply
from polyfock.moments import gh_grid_2d, inner_poly
from polyfock.quantize import (
    BerezinToeplitzOperator,
    ConjugatedOperator,
    IdentityOperator,
    OperatorMatrix,
    SymbolSpec,
    ToeplitzOperator,
    berezin_convolution,
    berezin_symbol,
    berezin_toeplitz_matrix,
    coburn_operator,
    coburn_sum,
    coburn_verify,
    convolution_commute_check,
    cross_symbol,
    gabor_bridge_check,
    phase_space_symbol,
    projection,
    quasi_norm,
    toeplitz_matrix,
    two_window_operator,
)

Z, ZB = CPolynomial.z(), CPolynomial.zbar()
ONE = CPolynomial.constant(1)


def _brute_pairing(F, Psi, z, n=30):
    """<F, W_z Psi> by direct quadrature on the plane."""
    g = gh_grid_2d(n, z / 2)
    w = g.nodes
    W = weyl_apply(z, Psi)
    corr = np.exp(-pi * np.abs(w) ** 2 + pi * np.abs(w - z / 2) ** 2)
    return complex(np.sum(g.weights * F(w) * np.conj(W(w)) * corr))


# cross symbols


def test_cross_symbol_examples():
    assert cross_symbol(ONE, ONE).allclose(ONE)
    for k in range(5):
        assert cross_symbol(phi_k(k), phi_k(0)).allclose(phi_k(k), rtol=1e-13)
    assert cross_symbol(phi_k(0), phi_k(1)).allclose(-sqrt(pi) * ZB, rtol=1e-14)
    assert cross_symbol(phi_k(0), phi_k(1)).allclose(phi_jk(1, 0), rtol=1e-14)


def test_cross_symbol_against_quadrature():
    F = phi_jk(1, 2) + 0.5j * phi_k(3)
    Psi = phi_jk(1, 1) - 0.3 * phi_k(1)
    Q = cross_symbol(F, Psi)
    for z in (0.3 - 0.2j, -0.6 + 0.9j, 1.1):
        want = _brute_pairing(F, Psi, z)
        assert abs(np.exp(-pi * abs(z) ** 2 / 2) * Q(z) - want) <= 1e-12


# Toeplitz and Berezin-Toeplitz matrices


def test_operator_matrix_layout():
    M = OperatorMatrix.zeros(1, 3)
    assert M.data.shape == (8, 8)
    assert M.index(1, 2) == 6
    assert M.labels()[5] == (1, 1)
    assert len(M.to_rows()) == 64


def test_toeplitz_of_one_is_projection():
    for j in range(3):
        T = toeplitz_matrix(j, ONE, 2, 4)
        want = np.zeros_like(T.data)
        for k in range(5):
            want[T.index(j, k), T.index(j, k)] = 1
        assert np.max(np.abs(T.data - want)) <= 1e-12


def test_toeplitz_entry_example():
    T = toeplitz_matrix(0, Z * ZB, 1, 3)
    assert T.entry((0, 0), (0, 0)) == pytest.approx(1 / pi, rel=1e-14)


def test_toeplitz_rows_outside_level_vanish():
    T = toeplitz_matrix(1, Z + ZB**2, 2, 3)
    for j in (0, 2):
        assert np.all(T.block(j, 0) == 0) and np.all(T.block(j, 1) == 0)


BOUNDED = [
    (lambda z: np.cos(2 * pi * z.real), 1.0),
    (lambda z: np.exp(-np.abs(z) ** 2), 1.0),
    (lambda z: np.sign(z.imag) * np.exp(1j * z.real), 1.0),
]


@pytest.mark.parametrize("func,bound", BOUNDED)
def test_toeplitz_norm_bound(func, bound):
    sigma = SymbolSpec.sampled(func, bound)
    for j in range(2):
        assert toeplitz_matrix(j, sigma, 1, 5).spectral_norm() <= bound + 1e-9


@pytest.mark.parametrize("j,k", [(0, 0), (1, 1), (0, 1), (1, 0), (2, 1), (2, 2)])
def test_berezin_toeplitz_with_basis_windows_is_toeplitz(j, k):
    for sigma in (Z * ZB, Z + ZB, Z**2 * ZB**2 - 1j * Z**3, ONE):
        L = berezin_toeplitz_matrix(phi_jk(k, k), phi_jk(j, j), sigma, 2, 4)
        T = toeplitz_matrix(j, sigma, 2, 4)
        assert np.max(np.abs(L.block(j, k) - T.block(j, k))) <= 1e-8
        # the other column levels are annihilated
        for kk in range(3):
            if kk != k:
                assert np.max(np.abs(L.data[:, L.index(kk, 0) : L.index(kk, 4) + 1])) <= 1e-8


def test_toeplitz_is_sum_of_basis_window_operators():
    # on the full polyanalytic space Toep^j equals the sum over column levels k
    for sigma in (Z * ZB + Z, ZB**2 - 2j, Z**2 * ZB**2):
        for j in range(3):
            total = OperatorMatrix.zeros(2, 4)
            for k in range(3):
                total = total + berezin_toeplitz_matrix(phi_jk(k, k), phi_jk(j, j), sigma, 2, 4)
            assert total.max_abs_diff(toeplitz_matrix(j, sigma, 2, 4)) <= 1e-8


def test_berezin_toeplitz_cross_levels_example():
    L = berezin_toeplitz_matrix(phi_jk(1, 1), phi_jk(0, 0), ONE, 1, 4)
    assert np.max(np.abs(L.block(0, 0))) <= 1e-12


def test_berezin_toeplitz_entry_by_brute_force():
    Psi, Theta = phi_k(1), phi_jk(1, 1) + 0.5 * phi_k(0)
    sigma = Z + ZB**2
    L = berezin_toeplitz_matrix(Psi, Theta, sigma, 1, 2)
    outer = gh_grid_2d(10)
    for col, row in (((0, 1), (1, 0)), ((0, 2), (0, 1)), ((1, 1), (1, 2))):
        F, G = phi_jk(*col), phi_jk(*row)
        vals = [
            sigma(z) * _brute_pairing(F, Psi, z) * np.conj(_brute_pairing(G, Theta, z))
            for z in outer.nodes
        ]
        want = np.sum(outer.weights * np.array(vals) * np.exp(pi * np.abs(outer.nodes) ** 2))
        assert abs(L.entry(row, col) - want) <= 1e-9


def test_berezin_toeplitz_hermitian_for_real_symbol():
    W = phi_jk(1, 1) + 0.5 * phi_k(2)
    L = berezin_toeplitz_matrix(W, W, Z * ZB + Z + ZB, 1, 4)
    assert np.max(np.abs(L.data - L.data.conj().T)) <= 1e-10


def test_berezin_toeplitz_norm_bound():
    Psi, Theta = phi_jk(0, 0) + phi_jk(1, 1), phi_k(1) + 0.5 * phi_jk(1, 0)
    nP, nT = sqrt(inner_poly(Psi, Psi).real), sqrt(inner_poly(Theta, Theta).real)
    for func, bound in BOUNDED:
        L = berezin_toeplitz_matrix(Psi, Theta, SymbolSpec.sampled(func, bound), 1, 5)
        assert L.spectral_norm() <= bound * nP * nT + 1e-9


def test_unbounded_sampled_symbol_rejected():
    sigma = SymbolSpec.sampled(lambda z: np.abs(z) ** 2, 1.0)
    with pytest.raises(UnboundedSymbol):
        toeplitz_matrix(0, sigma, 0, 3)
    with pytest.raises(UnboundedSymbol):
        berezin_toeplitz_matrix(ONE, ONE, sigma, 0, 3)


# Berezin symbols


def test_berezin_symbol_of_identity():
    for zeta in (0, 0.4 - 0.3j):
        for j in range(3):
            for k in range(3):
                assert abs(berezin_symbol(IdentityOperator(), zeta, j, k) - (j == k)) <= 1e-12


@pytest.mark.filterwarnings("ignore::polyfock.errors.TruncationWarning")
def test_berezin_symbol_bounded_by_norm():
    L = berezin_toeplitz_matrix(phi_k(1), phi_k(1), Z * ZB, 1, 12)
    nrm = L.spectral_norm()
    for zeta in (0, 0.3, 0.2 - 0.4j, -0.5j):
        for j in range(2):
            for k in range(2):
                assert abs(berezin_symbol(L, zeta, j, k)) <= nrm + 1e-12


def test_matrix_and_closure_symbols_agree():
    op = BerezinToeplitzOperator(phi_jk(1, 1), phi_jk(1, 1), Z + ZB)
    L = berezin_toeplitz_matrix(phi_jk(1, 1), phi_jk(1, 1), Z + ZB, 1, 30)
    for zeta in (0.2, -0.1 + 0.3j):
        assert abs(berezin_symbol(L, zeta, 1, 1) - berezin_symbol(op, zeta, 1, 1)) <= 1e-8


def test_truncation_warning():
    L = berezin_toeplitz_matrix(ONE, ONE, Z * ZB, 0, 2)
    with pytest.warns(TruncationWarning):
        berezin_symbol(L, 1 + 1j, 0, 0)


def test_translation_covariance():
    op = BerezinToeplitzOperator(phi_jk(1, 1), phi_k(1) + phi_k(0), Z * ZB + ZB**2)
    z = 0.3 - 0.5j
    shifted = ConjugatedOperator(op, z)
    for zeta in (0, 0.4 + 0.2j):
        for j, k in ((0, 0), (1, 1), (1, 0)):
            assert abs(berezin_symbol(shifted, zeta, j, k) - berezin_symbol(op, zeta + z, j, k)) <= 1e-10


def test_toeplitz_operator_symbol_matches_matrix():
    op = ToeplitzOperator(0, Z * ZB)
    T = toeplitz_matrix(0, Z * ZB, 0, 40)
    assert abs(berezin_symbol(op, 0.3j, 0, 0) - berezin_symbol(T, 0.3j, 0, 0)) <= 1e-10


def test_berezin_symbol_uniqueness_surrogate():
    # recover a random operator matrix from its Berezin symbols at 25 points
    rng = np.random.default_rng(9)
    n, K = 2, 2
    A = OperatorMatrix(n, K, rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))
    g = np.linspace(-1, 1, 5)
    zetas = (g[:, None] + 1j * g[None, :]).ravel()
    from polyfock.quantize import coherent_coefficients

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for j in range(n + 1):
            for k in range(n + 1):
                rows, rhs = [], []
                for zt in zetas:
                    cj, _ = coherent_coefficients(j, zt, K)
                    ck, _ = coherent_coefficients(k, zt, K)
                    rows.append(np.outer(np.conj(cj), ck).ravel())
                    rhs.append(berezin_symbol(A, zt, j, k))
                sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
                assert np.max(np.abs(sol.reshape(K + 1, K + 1) - A.block(j, k))) <= 1e-6


# convolution picture


def test_berezin_convolution_examples():
    for zeta in (0, 0.5 - 1j):
        assert abs(berezin_convolution(ONE, phi_k(0), phi_k(0), zeta) - 1) <= 1e-12
    assert abs(berezin_convolution(Z + ZB, phi_k(0), phi_k(0), 0)) <= 1e-14


@pytest.mark.parametrize(
    "Psi,Theta,j,k",
    [
        (phi_k(0), phi_k(0), 0, 0),
        (phi_k(1), phi_k(2), 0, 0),
        (phi_jk(1, 1), phi_jk(1, 2) + phi_jk(1, 0), 1, 1),
        (phi_jk(1, 1), phi_k(1), 0, 1),
    ],
)
def test_berezin_convolution_equals_symbol(Psi, Theta, j, k):
    sigma = Z * ZB + 2 * Z - 1j * ZB**2
    op = BerezinToeplitzOperator(Psi, Theta, sigma)
    for zeta in (0, 0.3 - 0.6j):
        assert abs(berezin_convolution(sigma, Psi, Theta, zeta) - berezin_symbol(op, zeta, j, k)) <= 1e-6


def test_convolution_commutation_instances():
    sigma = SymbolSpec.polynomial(Z * ZB)
    assert convolution_commute_check(sigma, phi_k(0), phi_k(0), DiffOp.identity(), [0, 1 + 1j]) <= 1e-12
    D = DiffOp({(0, 0, 1, 1): 1.0, (0, 0, 0, 0): 1.0})
    assert convolution_commute_check(sigma, phi_k(0), phi_k(0), D, [0, 1 + 1j]) <= 1e-8
    D = DiffOp({(0, 0, 1, 0): -1 / sqrt(pi)})
    assert convolution_commute_check(SymbolSpec.polynomial(Z), phi_k(1), phi_k(0), D, [1j]) <= 1e-8


# projections


def test_projection_examples():
    assert projection(0, Z**2).allclose(Z**2, rtol=1e-13)
    assert projection(0, ZB).is_zero
    assert projection(1, ZB).allclose(ZB, rtol=1e-13)


def test_projections_recover_polynomial():
    sigma = Z**2 * ZB - 3j * ZB**2 + Z + 1
    total = sum((projection(j, sigma) for j in range(sigma.degree + 1)), CPolynomial())
    assert total.max_abs_diff(sigma) <= 1e-12 * sigma.max_abs


def test_projection_is_idempotent_and_orthogonal():
    sigma = Z * ZB**2 + ZB
    P1 = projection(1, sigma)
    assert projection(1, P1).allclose(P1, rtol=1e-12, atol=1e-14)
    assert abs(inner_poly(P1, projection(0, sigma))) <= 1e-13


# the Coburn construction


def test_coburn_operator_basis_windows_give_identity():
    for j in range(3):
        for k in range(3):
            res = coburn_operator(phi_jk(k, k), phi_jk(j, j), j, k)
            assert res.quotient.allclose(ONE, rtol=1e-12)
            assert res.operator.allclose(DiffOp.identity(), rtol=1e-12)
            assert res.degree == 0


def test_coburn_operator_phi1():
    res = coburn_operator(phi_k(1), phi_k(1), 0, 0)
    assert res.numerator.allclose(pi * Z * ZB + 1, rtol=1e-14)
    assert res.denominator.allclose(ONE)
    assert res.quotient.allclose(pi * Z * ZB + 1, rtol=1e-14)
    want = DiffOp.d_z() @ DiffOp.d_zbar() * (1 / pi) + DiffOp.identity()
    assert res.operator.allclose(want, rtol=1e-14)
    assert res.degree == 2


def test_coburn_operator_phi2_constants():
    res = coburn_operator(phi_k(2), phi_k(2), 0, 0)
    dd = DiffOp.d_z() @ DiffOp.d_zbar()
    want = DiffOp.identity() + (2 / pi) * dd + (1 / (2 * pi**2)) * (dd @ dd)
    assert res.operator.allclose(want, rtol=1e-13)


def test_coburn_operator_not_divisible():
    with pytest.raises(NotDivisible) as info:
        coburn_operator(phi_k(1), phi_jk(1, 1), 1, 0)
    res = info.value.result
    assert res.numerator.allclose(-sqrt(pi) * Z * (1 + pi * Z * ZB), rtol=1e-13)
    assert res.denominator.allclose(-pi * Z * ZB, rtol=1e-14)
    assert res.quotient is None


def test_coburn_operator_subspace_violation():
    with pytest.raises(WindowSubspaceViolation):
        coburn_operator(phi_k(1) + phi_jk(1, 1), phi_k(0), 0, 0)


WINDOW_CASES = [
    (phi_k(1), phi_k(1), 0, 0),
    (phi_k(2), phi_k(2), 0, 0),
    (1j * phi_k(1), phi_k(1) + 0.5 * phi_k(0), 0, 0),
    (phi_jk(1, 2), phi_k(1), 0, 1),
    (phi_jk(1, 1), phi_jk(1, 1), 1, 1),
]


def test_mixed_level_one_windows_do_not_divide():
    with pytest.raises(NotDivisible):
        coburn_operator(phi_jk(1, 2) - 0.25j * phi_jk(1, 1), phi_jk(1, 3), 1, 1)


@pytest.mark.parametrize("Psi,Theta,j,k", WINDOW_CASES)
def test_coburn_degree_formula_and_heat_constraint(Psi, Theta, j, k):
    res = coburn_operator(Psi, Theta, j, k)
    assert res.degree == Psi.degree + Theta.degree - 2 * j - 2 * k
    t = 1 / (4 * pi)
    ref = heat_flow(phi_jk(k, k) * phi_jk(j, j).conjugate(), t)
    back = heat_flow(res.quotient * ref, -t)
    prod = Psi * Theta.conjugate()
    assert back.max_abs_diff(prod) <= 1e-10 * prod.max_abs
    assert (res.quotient * res.denominator).max_abs_diff(res.numerator) <= 1e-10 * res.numerator.max_abs


@pytest.mark.parametrize("Psi,Theta,j,k", WINDOW_CASES)
def test_coburn_verify_window_cases(Psi, Theta, j, k):
    for sigma in (ONE, Z + ZB, Z * ZB, Z**2 + ZB**2, 1j * Z**2 * ZB):
        rep, _ = coburn_verify(Psi, Theta, j, k, sigma, 5)
        assert rep.passed and rep.max_abs_error <= 1e-6


def test_coburn_verify_examples():
    rep, _ = coburn_verify(phi_k(0), phi_k(0), 0, 0, Z * ZB, 5)
    assert rep.max_abs_error <= 1e-8
    rep, _ = coburn_verify(phi_jk(1, 1), phi_jk(1, 1), 1, 1, Z + ZB, 5)
    assert rep.max_abs_error <= 1e-8
    rep, res = coburn_verify(phi_k(1), phi_k(1), 0, 0, Z * ZB, 5)
    assert rep.max_abs_error <= 1e-6
    assert rep.details["d_sigma"].allclose(Z * ZB + 1 / pi, rtol=1e-14)


def test_literal_substitution_scale_fails_the_identity():
    # the literal z -> -d/sqrt(pi) reading gives D sigma = z zbar + 1, which is not L
    res = coburn_operator(phi_k(1), phi_k(1), 0, 0)
    literal = anti_wick(res.quotient)
    dsigma = literal(Z * ZB)
    assert dsigma.allclose(Z * ZB + 1, rtol=1e-14)
    L = berezin_toeplitz_matrix(phi_k(1), phi_k(1), Z * ZB, 0, 5)
    T = toeplitz_matrix(0, dsigma, 0, 5)
    assert L.max_abs_diff(T) > 0.1
    assert L.entry((0, 0), (0, 0)) == pytest.approx(2 / pi, rel=1e-12)


def test_two_window_equivalence():
    res = two_window_operator(phi_k(1), phi_k(1), phi_k(0), phi_k(0))
    assert res.degree == 2
    for sigma in (Z * ZB, Z**2 + ZB, ONE):
        L1 = berezin_toeplitz_matrix(phi_k(1), phi_k(1), sigma, 0, 5)
        L0 = berezin_toeplitz_matrix(phi_k(0), phi_k(0), res.operator(sigma), 0, 5)
        assert L1.max_abs_diff(L0) <= 1e-6


def test_two_window_not_divisible():
    with pytest.raises(NotDivisible):
        two_window_operator(phi_k(0), phi_k(0), phi_k(1), phi_k(1))


# level sums


def test_coburn_sum_constant_symbol():
    W = phi_jk(0, 0) + phi_jk(1, 1)
    rep = coburn_sum(W, W, SymbolSpec.polynomial(ONE), 1, 5)
    assert rep.passed and rep.max_abs_error <= 1e-8


def test_coburn_sum_single_level_matches_verify():
    W = phi_jk(1, 1)
    rep = coburn_sum(W, W, SymbolSpec.polynomial(Z * ZB), 1, 5)
    single, _ = coburn_verify(W, W, 1, 1, Z * ZB, 5)
    assert rep.passed and single.passed
    assert rep.details["degrees"] == {1: 0}


def test_coburn_sum_mixed_window():
    W = phi_jk(0, 0) + phi_jk(1, 1)
    rep = coburn_sum(W, W, SymbolSpec.polynomial(Z * ZB), 1, 5)
    assert rep.passed and rep.max_abs_error <= 1e-6
    assert rep.details["degrees"] == rep.details["expected_degrees"] == {0: 0, 1: 0}


def test_lumped_scalar_operator_does_not_reproduce_the_sum():
    # one scalar D_j applied to every column level is off by a factor of two here
    W = phi_jk(0, 0) + phi_jk(1, 1)
    rep = coburn_sum(W, W, SymbolSpec.polynomial(Z * ZB), 1, 5)
    assert rep.details["lumped_error"] > 1.0


def test_coburn_sum_reports_offending_pair():
    W = phi_k(1) + phi_jk(1, 1)
    with pytest.raises(NotDivisible, match=r"level pair \(j=\d, k=\d\)"):
        coburn_sum(W, W, SymbolSpec.polynomial(ONE), 1, 3)


# quasi-norms


def test_quasi_norm_zero():
    assert quasi_norm(CPolynomial(), 1, 1, np.inf, 0) == 0


def test_quasi_norm_gaussian_boundary_case():
    # a = 1 < pi/2: exp((1 - pi/2)|z|^2) peaks at the origin
    assert quasi_norm(ONE, 1, 0.5, np.inf, 0) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DivergentWeight):
        quasi_norm(ONE, 2, 0.5, np.inf, 0)
    with pytest.raises(DivergentWeight):
        quasi_norm(ONE, 0.1, 0.4, np.inf, 0)


def test_quasi_norm_alpha_one_finite():
    val = quasi_norm(ONE, 1, 1, np.inf, 0)
    # sup of exp(r - pi r^2 / 2) is at r = 1/pi
    assert val == pytest.approx(np.exp(1 / (2 * pi)), rel=1e-3)


def test_quasi_norm_l1_oracle():
    # int exp(-pi |z|^2 / 2) d^2z = 2
    assert quasi_norm(ONE, 0, 1, 1, 0) == pytest.approx(2.0, rel=1e-10)


def test_quasi_norm_monotone_in_a():
    sigma = phi_jk(1, 1) + Z
    for p in (1, np.inf):
        vals = [quasi_norm(sigma, a, 1, p, 1) for a in (0, 0.25, 0.5, 1.0)]
        assert all(x <= y for x, y in zip(vals, vals[1:]))


def test_quasi_norm_reproducible():
    a = quasi_norm(phi_jk(1, 1), 0.5, 1, np.inf, 1)
    b = quasi_norm(phi_jk(1, 1), 0.5, 1, np.inf, 1)
    assert a > 0 and a == b


# the time-frequency bridge


def test_phase_space_symbol_flips_frequency():
    w = (Z - ZB) * (-0.5j)  # omega = Im z
    assert phase_space_symbol(w).allclose(-w, rtol=1e-15)
    x = (Z + ZB) * 0.5
    assert phase_space_symbol(x).allclose(x, rtol=1e-15)


@pytest.mark.parametrize("which", ["one", "radial", "omega", "x_omega", "x_squared"])
def test_gabor_bridge_level_zero(which):
    x, w = (Z + ZB) * 0.5, (Z - ZB) * (-0.5j)
    a = {"one": ONE, "radial": Z * ZB, "omega": w, "x_omega": x * w, "x_squared": x * x}[which]
    h0 = HermiteSignal.basis(0)
    rep = gabor_bridge_check(a, h0, h0, 0, 0, 4)
    assert rep.passed and rep.max_abs_error <= 1e-6


def test_gabor_bridge_level_one_windows():
    x, w = (Z + ZB) * 0.5, (Z - ZB) * (-0.5j)
    h1 = HermiteSignal.basis(1)
    for a in (ONE, x * w + w):
        rep = gabor_bridge_check(a, h1, h1, 1, 1, 3)
        assert rep.passed


def test_gabor_bridge_mixed_windows():
    x = (Z + ZB) * 0.5
    rep = gabor_bridge_check(x, HermiteSignal([1, 0.5]), HermiteSignal([0.2j, 0, 1]), 0, 0, 3)
    assert rep.passed
