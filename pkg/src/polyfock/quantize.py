"""Toeplitz and Berezin-Toeplitz (two-window localization) operators on the
polyanalytic Fock spaces, their Berezin symbols, and the differential
operators that turn one kind into the other."""

import warnings
from dataclasses import dataclass, field
from math import comb, factorial, pi, sqrt

import numpy as np

from .cpoly import CPolynomial, DiffOp, anti_wick, heat_flow, try_divide
from .errors import (
    DivergentWeight,
    NotDivisible,
    TruncationWarning,
    UnboundedSymbol,
    WindowSubspaceViolation,
)
from .fockbasis import phi_jk
from .kernels import CoherentPoly, coherent_state, weyl_apply
from .moments import gh_grid_2d, grid_for_degree, inner_poly, order_for_degree

TRUNCATION_TOL = 1e-8
TAIL_TERMS = 160


class SymbolSpec:
    """Symbol sigma(z, zbar): either a CPolynomial or a bounded sampled function."""

    def __init__(self, poly=None, func=None, sup_bound=None, name=None):
        if (poly is None) == (func is None):
            raise ValueError("give exactly one of poly or func")
        if func is not None and sup_bound is None:
            raise UnboundedSymbol("sampled symbols need a declared sup bound")
        self.poly = poly
        self.func = func
        self.sup_bound = sup_bound
        self.name = name

    @classmethod
    def polynomial(cls, p, name=None):
        return cls(poly=p, name=name)

    @classmethod
    def sampled(cls, func, sup_bound, name=None):
        return cls(func=func, sup_bound=float(sup_bound), name=name)

    @property
    def is_polynomial(self):
        return self.poly is not None

    @property
    def degree(self):
        return self.poly.degree if self.poly is not None else 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.poly is not None:
            return np.asarray(self.poly(z)) * np.ones_like(z)
        vals = np.asarray(self.func(z), dtype=complex) * np.ones_like(z)
        if np.max(np.abs(vals), initial=0.0) > self.sup_bound * (1 + 1e-12):
            raise UnboundedSymbol(f"sampled symbol exceeds its declared bound {self.sup_bound}")
        return vals


def _as_symbol(sigma):
    if isinstance(sigma, SymbolSpec):
        return sigma
    if isinstance(sigma, CPolynomial):
        return SymbolSpec.polynomial(sigma)
    if isinstance(sigma, (int, float, complex)):
        return SymbolSpec.polynomial(CPolynomial.constant(sigma))
    raise TypeError("symbol must be a SymbolSpec or CPolynomial")


@dataclass
class OperatorMatrix:
    """Matrix of an operator on span{Phi_{j,k}: j <= n, k <= K}.

    Basis element (j, k) sits at position j * (K + 1) + k; entry [r, c] is
    <Op e_c, e_r>.
    """

    n: int
    K: int
    data: np.ndarray

    @classmethod
    def zeros(cls, n, K):
        size = (n + 1) * (K + 1)
        return cls(n, K, np.zeros((size, size), dtype=complex))

    def index(self, j, k):
        return j * (self.K + 1) + k

    def labels(self):
        return [(j, k) for j in range(self.n + 1) for k in range(self.K + 1)]

    def entry(self, row, col):
        return self.data[self.index(*row), self.index(*col)]

    def block(self, j, k):
        """Rows at level j, columns at level k."""
        r = slice(self.index(j, 0), self.index(j, self.K) + 1)
        c = slice(self.index(k, 0), self.index(k, self.K) + 1)
        return self.data[r, c]

    def spectral_norm(self):
        return float(np.linalg.norm(self.data, 2))

    def max_abs_diff(self, other):
        return float(np.max(np.abs(self.data - other.data), initial=0.0))

    def __add__(self, other):
        return OperatorMatrix(self.n, self.K, self.data + other.data)

    def __sub__(self, other):
        return OperatorMatrix(self.n, self.K, self.data - other.data)

    def to_rows(self):
        rows = []
        for r in range(self.data.shape[0]):
            for c in range(self.data.shape[1]):
                v = self.data[r, c]
                rows.append((r, c, float(v.real), float(v.imag)))
        return rows


def cross_symbol(F, Psi):
    """Polynomial Q with <F, W_z Psi> = exp(-pi |z|^2 / 2) Q(z, zbar).

    Expands conj(Psi(zeta - z)) and contracts the zeta moments using
    int zeta^A zbar^B exp(pi z zbar_zeta) dmu = A! / ((A - B)! pi^B) z^(A - B).
    """
    out = {}
    for (c, d), g in Psi.items():
        gc = g.conjugate()
        for s in range(c + 1):
            cs = comb(c, s) * (-1) ** (c - s)
            for r in range(d + 1):
                cr = comb(d, r) * (-1) ** (d - r)
                zpow, zbpow = d - r, c - s
                for (a, b), f in F.items():
                    A, B = a + r, b + s
                    if A < B:
                        continue
                    mom = factorial(A) / (factorial(A - B) * pi**B)
                    key = (A - B + zpow, zbpow)
                    out[key] = out.get(key, 0) + f * gc * cs * cr * mom
    return CPolynomial(out)


def _basis(n, K):
    return [phi_jk(j, k) for j in range(n + 1) for k in range(K + 1)]


def _symbol_grid(sigma, poly_degree, order):
    """Grid for int sigma * (polynomial of given degree) dmu."""
    if sigma.is_polynomial:
        return grid_for_degree(poly_degree + sigma.degree, order)
    # sampled symbols: the rule must still be exact for the polynomial part
    return grid_for_degree(poly_degree, order)


def toeplitz_matrix(j, sigma, n, K, order=None):
    """Toep^j_sigma = P^j (sigma .) restricted to levels <= n and indices <= K."""
    sigma = _as_symbol(sigma)
    op = OperatorMatrix.zeros(n, K)
    basis = _basis(n, K)
    rows = [op.index(j, m) for m in range(K + 1)]
    if sigma.is_polynomial:
        for r in rows:
            for c, col in enumerate(basis):
                op.data[r, c] = inner_poly(sigma.poly * col, basis[r])
        return op
    grid = _symbol_grid(sigma, 2 * (n + K), order)
    vals = np.array([b(grid.nodes) for b in basis])
    sv = sigma(grid.nodes) * grid.weights
    for r in rows:
        op.data[r, :] = (vals * sv) @ np.conj(vals[r])
    return op


def berezin_toeplitz_matrix(Psi, Theta, sigma, n, K, order=None):
    """Matrix of L F = int sigma(z) <F, W_z Psi> W_z Theta d^2z.

    Entry [(j,k), (j',k')] = int sigma Q_{Phi_{j',k'},Psi} conj(Q_{Phi_{j,k},Theta}) dmu,
    evaluated with one Gaussian rule.
    """
    sigma = _as_symbol(sigma)
    basis = _basis(n, K)
    qcols = [cross_symbol(b, Psi) for b in basis]
    qrows = [cross_symbol(b, Theta) for b in basis]
    deg = max(q.degree for q in qcols) + max(q.degree for q in qrows)
    grid = _symbol_grid(sigma, max(deg, 0), order)
    z = grid.nodes
    C = np.array([q(z) * np.ones_like(z) for q in qcols])
    R = np.array([q(z) * np.ones_like(z) for q in qrows])
    sv = sigma(z) * grid.weights
    data = np.conj(R) @ (C * sv).T
    return OperatorMatrix(n, K, data)


class ToeplitzOperator:
    """Toep^j_sigma as a sesquilinear form on coherent polynomials.

    ``G`` is assumed to lie in the level-j space so that P^j G = G.
    """

    def __init__(self, j, sigma, order=None):
        self.j = j
        self.sigma = _as_symbol(sigma)
        self.order = order

    def form(self, F, G):
        F, G = _coherent(F), _coherent(G)
        c = (complex(F.center) + complex(G.center)) / 2
        deg = F.poly.degree + G.poly.degree + self.sigma.degree
        grid = gh_grid_2d(self.order or order_for_degree(deg), c)
        w = grid.nodes
        vals = self.sigma(w) * F(w) * np.conj(G(w))
        vals = vals * np.exp(-pi * np.abs(w) ** 2 + pi * np.abs(w - c) ** 2)
        return complex(np.sum(grid.weights * vals))


class BerezinToeplitzOperator:
    """L^{Psi,Theta}_sigma as a sesquilinear form <L F, G> on coherent polynomials."""

    def __init__(self, Psi, Theta, sigma, order=None):
        self.Psi = Psi
        self.Theta = Theta
        self.sigma = _as_symbol(sigma)
        self.order = order

    @staticmethod
    def _pairing(F, q, z):
        # <F, W_z window> for F = W_c p: exp(i pi Im(conj(c) z)) e^{-pi|z-c|^2/2} Q_{p,window}(z - c)
        c = complex(F.center)
        phase = np.exp(1j * pi * (np.conj(c) * z).imag)
        return phase * np.exp(-pi * np.abs(z - c) ** 2 / 2) * q(z - c)

    def form(self, F, G):
        F, G = _coherent(F), _coherent(G)
        c = (complex(F.center) + complex(G.center)) / 2
        # a CoherentPoly stores p(zeta - c); undo the shift to get p
        qf = cross_symbol(F.poly.shift(-complex(F.center)), self.Psi)
        qg = cross_symbol(G.poly.shift(-complex(G.center)), self.Theta)
        deg = qf.degree + qg.degree + self.sigma.degree
        grid = gh_grid_2d(self.order or order_for_degree(deg), c)
        z = grid.nodes
        a = self._pairing(F, qf, z)
        b = self._pairing(G, qg, z)
        vals = self.sigma(z) * a * np.conj(b) * np.exp(pi * np.abs(z - c) ** 2)
        return complex(np.sum(grid.weights * vals))


class IdentityOperator:
    def form(self, F, G):
        from .kernels import inner

        return inner(F, G)


class ConjugatedOperator:
    """W_z^* Op W_z."""

    def __init__(self, op, z):
        self.op = op
        self.z = complex(z)

    def form(self, F, G):
        return self.op.form(weyl_apply(self.z, F), weyl_apply(self.z, G))


def _coherent(F):
    return F if isinstance(F, CoherentPoly) else CoherentPoly(0j, F)


def coherent_coefficients(k, zeta, K):
    """Coefficients of K^k_zeta on Phi_{k,m}, m <= K, and the norm of the tail."""
    zeta = complex(zeta)
    env = np.exp(-pi * abs(zeta) ** 2 / 2)
    c = np.array([env * np.conj(phi_jk(k, m)(zeta)) for m in range(K + 1)])
    # sum the tail directly; 1 - sum |c|^2 cancels to rounding level
    tail2 = 0.0
    for m in range(K + 1, TAIL_TERMS):
        term = abs(env * phi_jk(k, m)(zeta)) ** 2
        tail2 += term
        if m > K + 10 and term < 1e-34:
            break
    return c, sqrt(tail2)


def berezin_symbol(op, zeta, j, k, K=None):
    """<Op K^k_zeta, K^j_zeta>.

    ``op`` is an OperatorMatrix or any object with a ``form(F, G)`` method.
    For matrices the coherent states are expanded up to index K and a
    TruncationWarning is issued when the neglected tail is not small.
    """
    if isinstance(op, OperatorMatrix):
        K = op.K if K is None else min(K, op.K)
        ck, tk = coherent_coefficients(k, zeta, K)
        cj, tj = coherent_coefficients(j, zeta, K)
        if max(tk, tj) > TRUNCATION_TOL:
            warnings.warn(
                f"coherent state tail {max(tk, tj):.2g} beyond index {K}", TruncationWarning, stacklevel=2
            )
        blk = op.block(j, k)[: K + 1, : K + 1]
        return complex(np.conj(cj) @ blk @ ck)
    return op.form(coherent_state(k, zeta), coherent_state(j, zeta))


def berezin_convolution(sigma, Psi, Theta, zeta, order=None):
    """(sigma * conj(Psi) Theta e^{-pi|.|^2})(zeta) by Gaussian quadrature."""
    sigma = _as_symbol(sigma)
    h = Psi.conjugate() * Theta
    grid = grid_for_degree(h.degree + sigma.degree, order)
    w = grid.nodes
    zeta = np.asarray(zeta, dtype=complex)
    out = np.array([np.sum(grid.weights * sigma(zt - w) * h(w)) for zt in np.atleast_1d(zeta)])
    return out.reshape(zeta.shape) if zeta.ndim else complex(out[0])


def _gaussian_twisted(op):
    """D^ with D(p e^{-pi|w|^2}) = e^{-pi|w|^2} D^ p, for constant-coefficient D."""
    dz = DiffOp({(0, 0, 1, 0): 1.0, (0, 1, 0, 0): -pi})
    dzb = DiffOp({(0, 0, 0, 1): 1.0, (1, 0, 0, 0): -pi})
    out = DiffOp()
    for (a, b, l, m), c in op.items():
        if a or b:
            raise ValueError("only constant-coefficient operators are supported")
        out = out + c * (dz**l).compose(dzb**m)
    return out


def convolution_commute_check(sigma, Psi, Theta, D, zetas, order=None):
    """Max |(D sigma) * (conj(Psi) Theta g) - sigma * D(conj(Psi) Theta g)| over zetas."""
    sigma = _as_symbol(sigma)
    if not sigma.is_polynomial:
        raise ValueError("the commutation check needs a polynomial symbol")
    h = Psi.conjugate() * Theta
    Dh = _gaussian_twisted(D)(h)
    Dsigma = D(sigma.poly)
    deg = max(h.degree, Dh.degree) + sigma.degree
    grid = grid_for_degree(deg, order)
    w = grid.nodes
    worst = 0.0
    for zt in np.atleast_1d(np.asarray(zetas, dtype=complex)):
        left = np.sum(grid.weights * Dsigma(zt - w) * h(w))
        right = np.sum(grid.weights * sigma.poly(zt - w) * Dh(w))
        worst = max(worst, abs(left - right))
    return float(worst)


@dataclass
class CoburnResult:
    numerator: CPolynomial
    denominator: CPolynomial
    quotient: CPolynomial | None = None
    operator: DiffOp | None = None
    degree: int | None = None
    meta: dict = field(default_factory=dict)


def symbol_to_operator(quotient):
    """Differential operator D with L^{Psi,Theta}_sigma = L^{Psi*,Theta*}_{D sigma}.

    A quotient term q z^a zbar^b becomes conj(q) (-1/pi)^(a+b) d_z^a d_zbar^b.
    """
    return anti_wick(quotient.conj_coeffs(), scale=1 / pi)


def two_window_operator(Psi, Theta, Psi_ref, Theta_ref):
    """Differential operator trading windows (Psi, Theta) for (Psi_ref, Theta_ref)."""
    num = heat_flow(Psi * Theta.conjugate(), 1 / (4 * pi))
    den = heat_flow(Psi_ref * Theta_ref.conjugate(), 1 / (4 * pi))
    res = CoburnResult(num, den)
    q = try_divide(num, den)
    if q is None:
        raise NotDivisible("heat-flowed windows do not divide", res)
    expected = Psi.degree + Theta.degree - Psi_ref.degree - Theta_ref.degree
    if q.degree != expected:
        raise NotDivisible(f"quotient degree {q.degree} differs from {expected}", res)
    res.quotient = q
    res.operator = symbol_to_operator(q)
    res.degree = q.degree
    return res


def _level_residual(F, level):
    d = F.degree
    inside = CPolynomial()
    for m in range(d + 1):
        inside = inside + inner_poly(F, phi_jk(level, m)) * phi_jk(level, m)
    return (F - inside).max_abs


def coburn_operator(Psi, Theta, j, k):
    """D with L^{Psi,Theta}_sigma = Toep^j_{D sigma} on the level-k space.

    Psi must lie at level k and Theta at level j; raises NotDivisible when
    the heat-flowed window product is not a multiple of the reference one.
    """
    for name, W, lvl in (("Psi", Psi, k), ("Theta", Theta, j)):
        if _level_residual(W, lvl) > 1e-10 * max(W.max_abs, 1e-300):
            raise WindowSubspaceViolation(f"{name} is not in the level-{lvl} space")
    return two_window_operator(Psi, Theta, phi_jk(k, k), phi_jk(j, j))


@dataclass
class Report:
    identity: str
    max_abs_error: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "identity": self.identity,
            "max_abs_error": self.max_abs_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "details": self.details,
        }


def _column_block_diff(A, B, k):
    cols = slice(A.index(k, 0), A.index(k, A.K) + 1)
    return float(np.max(np.abs(A.data[:, cols] - B.data[:, cols]), initial=0.0))


def coburn_verify(Psi, Theta, j, k, sigma, K, tol=1e-6, order=None):
    """Compare L^{Psi,Theta}_sigma with Toep^j_{D sigma} on the level-k columns."""
    res = coburn_operator(Psi, Theta, j, k)
    sigma = _as_symbol(sigma)
    if not sigma.is_polynomial:
        raise ValueError("the Coburn check needs a polynomial symbol")
    dsigma = res.operator(sigma.poly)
    n = max(j, k)
    L = berezin_toeplitz_matrix(Psi, Theta, sigma, n, K, order)
    T = toeplitz_matrix(j, dsigma, n, K)
    err = _column_block_diff(L, T, k)
    return Report(
        "berezin_toeplitz_equals_toeplitz",
        err,
        tol,
        err <= tol,
        {"j": j, "k": k, "K": K, "quotient": res.quotient, "d_sigma": dsigma, "degree": res.degree},
    ), res


def projection(j, sigma):
    """P^j sigma, computed from moments; sigma is a polynomial."""
    out = CPolynomial()
    for m in range(sigma.degree + 1):
        c = inner_poly(sigma, phi_jk(j, m))
        if c:
            out = out + c * phi_jk(j, m)
    return out


def coburn_sum(Psi, Theta, sigma, n, K, tol=1e-6, order=None):
    """Split windows into levels and reassemble L^{Psi,Theta}_sigma from Toeplitz pieces.

    Each pair of levels contributes Toep^j_{D_{j,k} sigma} on the level-k
    columns. The degree of D_j is the largest degree among its pieces.
    """
    sigma = _as_symbol(sigma)
    Pk = {lvl: projection(lvl, Psi) for lvl in range(n + 1)}
    Pj = {lvl: projection(lvl, Theta) for lvl in range(n + 1)}
    total = OperatorMatrix.zeros(n, K)
    lumped = OperatorMatrix.zeros(n, K)
    expected = {}
    ops, quotients = {}, {}
    for j in range(n + 1):
        for k in range(n + 1):
            if Pk[k].is_zero or Pj[j].is_zero:
                continue
            try:
                res = coburn_operator(Pk[k], Pj[j], j, k)
            except NotDivisible as exc:
                raise NotDivisible(f"level pair (j={j}, k={k}): {exc}", exc.result) from exc
            ops[(j, k)] = res.operator
            quotients[j] = quotients.get(j, CPolynomial()) + res.quotient
            T = toeplitz_matrix(j, res.operator(sigma.poly), n, K)
            cols = slice(total.index(k, 0), total.index(k, K) + 1)
            total.data[:, cols] += T.data[:, cols]
            expected[j] = max(expected.get(j, -1), Pj[j].degree + Pk[k].degree - 2 * j - 2 * k)
    for j in {jj for jj, _ in ops}:
        # D_j lumped into a single scalar operator, applied to every column
        Dj = sum((op for (jj, _), op in ops.items() if jj == j), DiffOp())
        lumped = lumped + toeplitz_matrix(j, Dj(sigma.poly), n, K)
    degrees = {j: q.degree for j, q in quotients.items()}
    L = berezin_toeplitz_matrix(Psi, Theta, sigma, n, K, order)
    err = L.max_abs_diff(total)
    degree_ok = degrees == expected
    return Report(
        "level_sum_decomposition",
        err,
        tol,
        bool(err <= tol and degree_ok),
        {
            "degrees": degrees,
            "expected_degrees": expected,
            "lumped_error": L.max_abs_diff(lumped),
        },
    )


QUASI_RADIUS = 6.0


def _polar_grid(nr=160, nt=128):
    r, wr = np.polynomial.legendre.leggauss(nr)
    r = (r + 1) * QUASI_RADIUS / 2
    wr = wr * QUASI_RADIUS / 2
    t = np.arange(nt) * 2 * pi / nt
    z = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    w = (wr[:, None] * r[:, None] * (2 * pi / nt) * np.ones((1, nt))).ravel()
    return z, w


def quasi_norm(sigma, a, alpha, p, n):
    """sum_{j<=n} || exp(a |z|^(1/alpha)) exp(-pi |z|^2 / 2) P^j sigma ||_{L^p(d^2z)}.

    Evaluated on the disc |z| <= 6. The weight must lose to the Gaussian:
    alpha >= 1/2 and, at alpha = 1/2, a < pi/2.
    """
    if alpha < 0.5:
        raise DivergentWeight("alpha below 1/2 outgrows the Gaussian")
    if alpha == 0.5 and a >= pi / 2:
        raise DivergentWeight("exp(a|z|^2) with a >= pi/2 is not dominated by exp(-pi|z|^2/2)")
    if p not in (1, np.inf, float("inf")):
        raise ValueError("p must be 1 or inf")
    sigma = sigma.poly if isinstance(sigma, SymbolSpec) else sigma
    z, w = _polar_grid()
    r = np.abs(z)
    weight = np.exp(a * r ** (1 / alpha) - pi * r**2 / 2)
    outer = r >= r.max() - 1e-12
    total = 0.0
    for j in range(n + 1):
        vals = weight * np.abs(projection(j, sigma)(z))
        if p == 1:
            total += float(np.sum(w * vals))
        else:
            peak = float(vals.max())
            inner_peak = float(vals[~outer].max())
            if peak > 0 and vals[outer].max() >= inner_peak:
                raise DivergentWeight("weighted symbol still growing at the grid edge")
            total += max(peak, abs(projection(j, sigma)(0j)))
    return total


def phase_space_symbol(a):
    """sigma(z) = a(Re z, -Im z) for a given as a polynomial in x + i omega."""
    return a.conjugate().conj_coeffs()


def gabor_bridge_check(a, psi, theta, j, k, M, tol=1e-6, order=None):
    """Compare <A_a h_m, h_m'> with <L Phi_{k,m}, Phi_{j,m'}> for windows B^k psi, B^j theta.

    ``a`` is a CPolynomial read as a function of x + i omega; ``psi`` and
    ``theta`` are HermiteSignal instances.
    """
    from .transforms import DEFAULT_ORDER, gabor_daubechies_matrix

    G = gabor_daubechies_matrix(lambda x, w: a(x + 1j * w), psi, theta, M, order or DEFAULT_ORDER)
    Psi, Theta = psi.bargmann_poly(k), theta.bargmann_poly(j)
    L = berezin_toeplitz_matrix(Psi, Theta, phase_space_symbol(a), max(j, k), M)
    rows = slice(L.index(j, 0), L.index(j, M) + 1)
    cols = slice(L.index(k, 0), L.index(k, M) + 1)
    err = float(np.max(np.abs(G - L.data[rows, cols])))
    return Report("gabor_daubechies_equals_berezin_toeplitz", err, tol, err <= tol, {"j": j, "k": k, "M": M})
