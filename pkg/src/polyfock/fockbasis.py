"""Orthonormal basis Phi_{j,k} of the Gaussian-weighted polyanalytic spaces,
Hermite functions, and the ladder operators between basis elements."""

from functools import lru_cache
from math import comb, factorial, pi, sqrt

import numpy as np

from .cpoly import CPolynomial, DiffOp, heat_flow
from .errors import NegativeIndex, OrderTooLarge

MAX_HERMITE = 60


def _check_index(*idx):
    for i in idx:
        if int(i) != i or i < 0:
            raise NegativeIndex(f"index {i} must be a non-negative integer")


@lru_cache(maxsize=None)
def phi_k(k):
    """Analytic basis element (pi^k / k!)^(1/2) z^k."""
    _check_index(k)
    return CPolynomial.monomial(k, 0, sqrt(pi**k / factorial(k)))


@lru_cache(maxsize=None)
def phi_jk(j, k):
    """Phi_{j,k} built from the binomial sum over derivatives of Phi_k.

    Term l of the sum is C(j,l) (-pi zbar)^(j-l) d_z^l Phi_k; powers of pi
    are collected before rounding so simple cases come out exact.
    """
    _check_index(j, k)
    if j == 0:
        return phi_k(k)
    terms = {}
    norm = sqrt(factorial(j) * factorial(k))
    for l in range(min(j, k) + 1):
        c = comb(j, l) * (-1) ** (j - l) * (factorial(k) // factorial(k - l)) / norm
        terms[(k - l, j - l)] = c * pi ** ((j + k) / 2 - l)
    return CPolynomial(terms)


def phi_jk_heat(j, k):
    """Phi_{j,k} as the backward heat flow of Phi_j(-zbar) Phi_k(z)."""
    _check_index(j, k)
    left = CPolynomial.monomial(0, j, sqrt(pi**j / factorial(j)) * (-1) ** j)
    return heat_flow(left * phi_k(k), -1.0 / (4 * pi))


def hermite(j, t):
    """L^2-normalized Hermite function h_j(t), Gaussian factor exp(-pi t^2).

    Uses the three-term recurrence; h_0 = 2^(1/4) exp(-pi t^2) and the
    Bargmann transform sends h_k to Phi_k.
    """
    _check_index(j)
    if j > MAX_HERMITE:
        raise OrderTooLarge(f"Hermite order {j} exceeds {MAX_HERMITE}")
    t = np.asarray(t, dtype=float)
    prev = np.zeros_like(t)
    cur = 2**0.25 * np.exp(-pi * t * t)
    for n in range(j):
        nxt = sqrt(4 * pi / (n + 1)) * t * cur - sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
    return cur


class HermiteSignal:
    """Finite Hermite expansion sum c_m h_m, usable as a signal evaluator."""

    def __init__(self, coeffs, center=0.0):
        self.coeffs = [complex(c) for c in coeffs]
        self.center = float(center)

    @classmethod
    def basis(cls, m):
        return cls([0] * m + [1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for m, c in enumerate(self.coeffs):
            if c:
                out = out + c * hermite(m, t - self.center)
        return out

    def bargmann_poly(self, j):
        """Image under the level-j poly-Bargmann transform, sum c_m Phi_{j,m}."""
        if self.center:
            raise ValueError("only centred Hermite expansions map to polynomials")
        out = CPolynomial()
        for m, c in enumerate(self.coeffs):
            if c:
                out = out + c * phi_jk(j, m)
        return out

    def inner(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        return sum(self.coeffs[m] * other.coeffs[m].conjugate() for m in range(n))


# ladder and generator operators; each maps Phi_{j,k} to a multiple of a neighbour

_SP = sqrt(pi)

GENERATORS = {
    "Z": DiffOp({(0, 0, 1, 0): 1 / _SP}),
    "Z_dag": DiffOp({(1, 0, 0, 0): _SP, (0, 0, 0, 1): -1 / _SP}),
    "Zbar": DiffOp({(0, 0, 0, 1): 1 / _SP}),
    "Zbar_dag": DiffOp({(0, 1, 0, 0): _SP, (0, 0, 1, 0): -1 / _SP}),
}

LADDERS = {
    "raise_k": GENERATORS["Z_dag"],
    "lower_k": GENERATORS["Z"],
    "raise_j": GENERATORS["Zbar_dag"],
    "lower_j": GENERATORS["Zbar"],
}


def generator(name):
    try:
        return GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None


def ladder(kind, p):
    """Apply one of raise_k, lower_k, raise_j, lower_j to a polynomial."""
    try:
        op = LADDERS[kind]
    except KeyError:
        raise ValueError(f"unknown ladder {kind!r}") from None
    return op(p)


def ladder_expected(kind, j, k):
    """(factor, (j', k')) with ladder(kind, Phi_{j,k}) = factor * Phi_{j',k'}."""
    if kind == "raise_k":
        return sqrt(k + 1), (j, k + 1)
    if kind == "lower_k":
        return sqrt(k), (j, k - 1)
    if kind == "raise_j":
        return -sqrt(j + 1), (j + 1, k)
    if kind == "lower_j":
        return -sqrt(j), (j - 1, k)
    raise ValueError(f"unknown ladder {kind!r}")


# zbar d_zbar - Delta/(4 pi); Phi_{j,k} is an eigenvector with eigenvalue j
MAGNETIC_LAPLACIAN = DiffOp({(0, 1, 0, 1): 1.0, (0, 0, 1, 1): -1 / pi})


def magnetic_laplacian(p):
    return MAGNETIC_LAPLACIAN(p)
