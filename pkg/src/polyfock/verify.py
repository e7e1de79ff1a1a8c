"""The verification suite: one Report per identity family.

Each check takes the quadrature order (None lets the library pick the exact
order) and, where matrices are involved, the truncation index K. A check
that cannot run at the requested order fails with a diagnostic instead of
raising.
"""

from math import pi, sqrt

import numpy as np

from .cpoly import CPolynomial, DiffOp, heat_flow
from .errors import NotDivisible, PolyfockError
from .fockbasis import (
    GENERATORS,
    HermiteSignal,
    LADDERS,
    MAGNETIC_LAPLACIAN,
    ladder_expected,
    phi_jk,
    phi_jk_heat,
    phi_k,
)
from .kernels import coherent_state, kernel, reproduce, weyl_adjoint_apply
from .moments import grid_for_degree, inner_poly, inner_product_dmu
from .quantize import (
    Report,
    SymbolSpec,
    berezin_toeplitz_matrix,
    coburn_operator,
    coburn_sum,
    coburn_verify,
    convolution_commute_check,
    gabor_bridge_check,
    toeplitz_matrix,
)
from .transforms import DEFAULT_ORDER, stft_inner, true_poly_bargmann

Z, ZBAR = CPolynomial.z(), CPolynomial.zbar()


def random_polys(count, degree, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        terms = {}
        for a in range(degree + 1):
            for b in range(degree + 1 - a):
                terms[(a, b)] = complex(rng.normal(), rng.normal())
        out.append(CPolynomial(terms))
    return out


def _coeff_err(p, q):
    return p.max_abs_diff(q)


def check_basis_consistency(order=None):
    err = max(_coeff_err(phi_jk(j, k), phi_jk_heat(j, k)) for j in range(5) for k in range(7))
    return Report("basis_binomial_equals_heat_flow", err, 1e-12, err <= 1e-12, {"j_max": 4, "k_max": 6})


def check_orthonormality(order=None):
    idx = [(j, k) for j in range(4) for k in range(7)]
    basis = {i: phi_jk(*i) for i in idx}
    sym = quad = 0.0
    grid = grid_for_degree(2 * (3 + 6), order)
    for a in idx:
        for b in idx:
            target = 1.0 if a == b else 0.0
            sym = max(sym, abs(inner_poly(basis[a], basis[b]) - target))
            quad = max(quad, abs(inner_product_dmu(basis[a], basis[b], grid) - target))
    err = max(sym, quad)
    return Report(
        "basis_orthonormality", err, 1e-10, err <= 1e-10,
        {"symbolic": sym, "quadrature": quad, "grid_order": grid.order},
    )


def check_ladders(order=None):
    err = 0.0
    for j in range(5):
        for k in range(7):
            p = phi_jk(j, k)
            for kind, op in LADDERS.items():
                f, (jj, kk) = ladder_expected(kind, j, k)
                expect = f * phi_jk(jj, kk) if jj >= 0 and kk >= 0 else CPolynomial()
                err = max(err, _coeff_err(op(p), expect))
            err = max(err, _coeff_err(MAGNETIC_LAPLACIAN(p), j * p))
    G = GENERATORS
    ident = DiffOp.identity()
    comm = {
        "[Z,Z_dag]": (G["Z"] @ G["Z_dag"] - G["Z_dag"] @ G["Z"], ident),
        "[Zbar,Zbar_dag]": (G["Zbar"] @ G["Zbar_dag"] - G["Zbar_dag"] @ G["Zbar"], ident),
        "[Z,Zbar]": (G["Z"] @ G["Zbar"] - G["Zbar"] @ G["Z"], DiffOp()),
        "[Z,Zbar_dag]": (G["Z"] @ G["Zbar_dag"] - G["Zbar_dag"] @ G["Z"], DiffOp()),
        "[Z_dag,Zbar]": (G["Z_dag"] @ G["Zbar"] - G["Zbar"] @ G["Z_dag"], DiffOp()),
        "[Z_dag,Zbar_dag]": (G["Z_dag"] @ G["Zbar_dag"] - G["Zbar_dag"] @ G["Z_dag"], DiffOp()),
        "magnetic = Zbar_dag Zbar": (G["Zbar_dag"] @ G["Zbar"], MAGNETIC_LAPLACIAN),
    }
    for got, want in comm.values():
        err = max(err, (got - want).max_abs)
    for p in random_polys(10, 6, seed=3):
        for got, want in comm.values():
            err = max(err, _coeff_err(got(p), want(p)) / max(p.max_abs, 1.0))
    return Report("ladder_commutator_eigen", err, 1e-12, err <= 1e-12, {"identities": list(comm)})


def check_intertwining(order=None):
    t = 1 / (4 * pi)
    up_z = DiffOp({(1, 0, 0, 0): pi, (0, 0, 0, 1): -1.0})
    up_zb = DiffOp({(0, 1, 0, 0): pi, (0, 0, 1, 0): -1.0})
    err = 0.0
    for p in random_polys(20, 5, seed=4):
        hp = heat_flow(p, t)
        for m in range(5):
            for op, mono in ((up_z, CPolynomial.monomial(1, 0, pi)), (up_zb, CPolynomial.monomial(0, 1, pi))):
                left = (op**m)(p)
                right = heat_flow(mono**m * hp, -t)
                scale = max(left.max_abs, right.max_abs, 1.0)
                err = max(err, _coeff_err(left, right) / scale)
    return Report("heat_flow_intertwining", err, 1e-10, err <= 1e-10, {"m_max": 4, "samples": 20})


def check_transforms(order=None):
    order = order or DEFAULT_ORDER
    xs = np.linspace(-1.4, 1.4, 5)
    zs = (xs[:, None] + 1j * xs[None, :]).ravel()
    berr = 0.0
    for j in range(3):
        for k in range(5):
            got = true_poly_bargmann(j, HermiteSignal.basis(k), zs, order)
            berr = max(berr, float(np.max(np.abs(got - phi_jk(j, k)(zs)))))
    corpus = [HermiteSignal.basis(0), HermiteSignal.basis(1), HermiteSignal([0.5, 0, 1j]), HermiteSignal([1, -1, 0, 0.5])]
    oerr = 0.0
    for f in corpus[:3]:
        for g in corpus[1:]:
            for psi in corpus[:2]:
                for phi in corpus[1:3]:
                    got = stft_inner(f, psi, g, phi, order)
                    want = f.inner(g) * np.conj(psi.inner(phi))
                    oerr = max(oerr, abs(got - want))
    err = max(berr, oerr)
    return Report(
        "transform_fidelity", err, 1e-6, err <= 1e-6, {"bargmann": berr, "stft_orthogonality": oerr}
    )


def check_kernels(order=None):
    rep = 0.0
    for j in range(3):
        for k in range(5):
            for z in (0, 0.5, 1j, 1 - 1j):
                rep = max(rep, abs(reproduce(j, phi_jk(j, k), z) - phi_jk(j, k)(z)))
    diag = 0.0
    rng = np.random.default_rng(6)
    pts = rng.uniform(-1.4, 1.4, 20) + 1j * rng.uniform(-1.4, 1.4, 20)
    for j in range(4):
        for zt in pts:
            want = np.exp(pi * abs(zt) ** 2)
            diag = max(diag, abs(kernel(j, zt, zt) - want) / want)
    phase = 0.0
    grid = np.linspace(-1, 1, 5)
    samples = (grid[:, None] + 1j * grid[None, :]).ravel()
    probe = np.array([0.3 - 0.2j, -0.7 + 0.4j, 1.1j])
    for j in range(3):
        for zt in samples[::3]:
            for z in samples[1::4]:
                left = weyl_adjoint_apply(z, coherent_state(j, zt))(probe)
                right = np.exp(1j * pi * (np.conj(zt) * z).imag) * coherent_state(j, zt - z)(probe)
                phase = max(phase, float(np.max(np.abs(left - right))))
    ok = rep <= 1e-8 and diag <= 1e-10 and phase <= 1e-10
    return Report(
        "reproducing_kernels", max(rep, diag, phase), 1e-8, ok,
        {"reproduce": rep, "diagonal_relative": diag, "phase_identity": phase},
    )


COBURN_CASES = [
    ("phi(0,0)", phi_jk(0, 0), phi_jk(0, 0), 0, 0),
    ("phi(0,1)", phi_k(1), phi_k(1), 0, 0),
    ("phi(1,1)", phi_jk(1, 1), phi_jk(1, 1), 1, 1),
    ("phi(0,2)", phi_k(2), phi_k(2), 0, 0),
]
COBURN_SYMBOLS = [("1", CPolynomial.constant(1)), ("z+zbar", Z + ZBAR), ("z*zbar", Z * ZBAR), ("z^2+zbar^2", Z**2 + ZBAR**2)]


def check_coburn(order=None, K=5):
    err = 0.0
    cases = {}
    for name, Psi, Theta, j, k in COBURN_CASES:
        for sname, sigma in COBURN_SYMBOLS:
            rep, _ = coburn_verify(Psi, Theta, j, k, sigma, K, 1e-6, order)
            cases[f"{name}|{sname}"] = rep.max_abs_error
            err = max(err, rep.max_abs_error)
    try:
        coburn_operator(phi_k(1), phi_jk(1, 1), 1, 0)
        rejected = False
    except NotDivisible:
        rejected = True
    return Report(
        "coburn_end_to_end", err, 1e-6, err <= 1e-6 and rejected,
        {"K": K, "cases": cases, "not_divisible_rejected": rejected},
    )


def check_level_sum(order=None, K=5):
    W = phi_jk(0, 0) + phi_jk(1, 1)
    rep = coburn_sum(W, W, SymbolSpec.polynomial(Z * ZBAR), 1, K, 1e-6, order)
    rep.identity = "coburn_level_sum"
    return rep


BOUNDED_SYMBOLS = [
    ("cos(2 pi x)", lambda z: np.cos(2 * pi * z.real), 1.0),
    ("exp(-|z|^2)", lambda z: np.exp(-np.abs(z) ** 2), 1.0),
    ("1/(1+|z|^2)", lambda z: 1 / (1 + np.abs(z) ** 2), 1.0),
    ("tanh(x) + i sin(y)/2", lambda z: np.tanh(z.real) + 0.5j * np.sin(z.imag), sqrt(1.25)),
    ("sign(x) exp(i y)", lambda z: np.sign(z.real) * np.exp(1j * z.imag), 1.0),
]


def check_boundedness(order=None, K=5):
    Psi = phi_jk(0, 0) + phi_jk(1, 1)
    Theta = phi_k(1) + 0.5 * phi_jk(1, 0)
    npsi, nth = sqrt(inner_poly(Psi, Psi).real), sqrt(inner_poly(Theta, Theta).real)
    slack = -np.inf
    details = {}
    for name, f, bound in BOUNDED_SYMBOLS:
        sigma = SymbolSpec.sampled(f, bound, name)
        L = berezin_toeplitz_matrix(Psi, Theta, sigma, 1, K, order)
        nl = L.spectral_norm()
        slack = max(slack, nl - bound * npsi * nth)
        nt = 0.0
        for j in range(2):
            T = toeplitz_matrix(j, sigma, 1, K, order)
            nt = max(nt, T.spectral_norm())
            slack = max(slack, T.spectral_norm() - bound)
        details[name] = {"L_norm": nl, "L_bound": bound * npsi * nth, "toeplitz_norm": nt, "sup": bound}
    slack = float(slack)
    return Report("norm_bounds", max(slack, 0.0), 1e-9, slack <= 1e-9, details)


def check_gabor_bridge(order=None):
    h0 = HermiteSignal.basis(0)
    err = 0.0
    for a in (CPolynomial.constant(1), Z * ZBAR):
        rep = gabor_bridge_check(a, h0, h0, 0, 0, 4, 1e-6, order)
        err = max(err, rep.max_abs_error)
    return Report("gabor_daubechies_bridge", err, 1e-6, err <= 1e-6, {"M": 4})


def check_convolution(order=None):
    p0, p1 = phi_k(0), phi_k(1)
    cases = [
        ("identity", Z * ZBAR, p0, p0, DiffOp.identity(), [0, 1 + 1j]),
        ("dz dzbar + 1", Z * ZBAR, p0, p0, DiffOp({(0, 0, 1, 1): 1.0, (0, 0, 0, 0): 1.0}), [0, 1 + 1j]),
        ("-dz/sqrt(pi)", Z, p1, p0, DiffOp({(0, 0, 1, 0): -1 / sqrt(pi)}), [1j]),
    ]
    err = 0.0
    details = {}
    for name, sigma, Psi, Theta, D, zetas in cases:
        e = convolution_commute_check(SymbolSpec.polynomial(sigma), Psi, Theta, D, zetas, order)
        details[name] = e
        err = max(err, e)
    return Report("convolution_commutation", err, 1e-8, err <= 1e-8, details)


CHECKS = [
    ("basis consistency", check_basis_consistency, False, "basis_binomial_equals_heat_flow", 1e-12),
    ("orthonormality", check_orthonormality, False, "basis_orthonormality", 1e-10),
    ("ladders and commutators", check_ladders, False, "ladder_commutator_eigen", 1e-12),
    ("intertwining", check_intertwining, False, "heat_flow_intertwining", 1e-10),
    ("transform fidelity", check_transforms, False, "transform_fidelity", 1e-6),
    ("reproducing kernels", check_kernels, False, "reproducing_kernels", 1e-8),
    ("coburn end-to-end", check_coburn, True, "coburn_end_to_end", 1e-6),
    ("level sum", check_level_sum, True, "coburn_level_sum", 1e-6),
    ("boundedness", check_boundedness, True, "norm_bounds", 1e-9),
    ("gabor bridge", check_gabor_bridge, False, "gabor_daubechies_bridge", 1e-6),
    ("convolution commutation", check_convolution, False, "convolution_commutation", 1e-8),
]


def run_check(entry, order=None, K=5):
    _, fn, uses_k, identity, tol = entry
    try:
        return fn(order, K) if uses_k else fn(order)
    except PolyfockError as exc:
        return Report(identity, float("nan"), tol, False, {"error": type(exc).__name__, "message": str(exc)})


def run_suite(order=None, K=5):
    return [run_check(entry, order, K) for entry in CHECKS]
