"""Gaussian moments and Gauss-Hermite quadrature for dmu = exp(-pi |z|^2) d^2z."""

from dataclasses import dataclass
from math import factorial, pi, sqrt

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import GridOrderTooLarge, QuadratureOrderInsufficient

MAX_ORDER = 200


def monomial_moment(a, b):
    """Integral of z^a zbar^b against dmu."""
    if a != b:
        return 0.0
    return factorial(a) / pi**a


def integrate_poly_dmu(p):
    return sum((c * monomial_moment(a, b) for (a, b), c in p.items()), 0j)


def inner_poly(p, q):
    """<p, q> in L^2(dmu), computed from moments."""
    return integrate_poly_dmu(p * q.conjugate())


def order_for_degree(d):
    """Nodes per axis used for a polynomial integrand of total degree d."""
    return max(int(d), 0) + 1


def _check_order(n):
    if n < 1:
        raise ValueError("quadrature order must be at least 1")
    if n > MAX_ORDER:
        raise GridOrderTooLarge(f"quadrature order {n} outside 1..{MAX_ORDER}")


def gauss_hermite(n):
    """Nodes and weights for the weight exp(-x^2).

    Nodes come from the symmetric Jacobi matrix. The weights are rebuilt
    from the Christoffel sum over normalized Hermite functions, which also
    yields ``w * exp(x^2)`` without overflow.

    Returns ``(nodes, weights, scaled)`` with ``scaled = weights * exp(nodes**2)``.
    """
    _check_order(n)
    if n == 1:
        return np.zeros(1), np.array([sqrt(pi)]), np.array([sqrt(pi)])
    off = np.sqrt(np.arange(1, n) / 2.0)
    x = eigh_tridiagonal(np.zeros(n), off, eigvals_only=True)
    x = 0.5 * (x - x[::-1])  # exact symmetry
    # normalized Hermite functions psi_k(x) = H_k(x) exp(-x^2/2) / sqrt(2^k k! sqrt(pi))
    prev = np.zeros_like(x)
    cur = np.exp(-x * x / 2) / pi**0.25
    total = cur * cur
    for k in range(1, n):
        nxt = np.sqrt(2.0 / k) * x * cur - np.sqrt((k - 1) / k) * prev
        prev, cur = cur, nxt
        total += cur * cur
    scaled = 1.0 / total
    return x, scaled * np.exp(-x * x), scaled


@dataclass(frozen=True)
class GaussGrid:
    """Quadrature rule: sum(weights * f(nodes)) approximates an integral.

    ``exact_degree`` is the total polynomial degree integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    dim: int
    order: int

    def integrate(self, values):
        return np.sum(self.weights * values)


def gh_grid_1d(n, center=0.0):
    """Rule for the weight exp(-pi (u - center)^2) on the real line, weights summing to 1."""
    x, w, _ = gauss_hermite(n)
    return GaussGrid(center + x / sqrt(pi), w / sqrt(pi), 2 * n - 1, 1, n)


def gh_grid_2d(n, center=0j):
    """Tensor rule for exp(-pi |z - center|^2) d^2z with z = x + i omega."""
    x, w, _ = gauss_hermite(n)
    u = x / sqrt(pi)
    nodes = (u[:, None] + 1j * u[None, :]).ravel() + complex(center)
    weights = (w[:, None] * w[None, :]).ravel() / pi
    return GaussGrid(nodes, weights, 2 * n - 1, 2, n)


def grid_for_degree(d, order=None, center=0j):
    """dmu grid exact for total degree d; an explicit ``order`` is checked, not trusted."""
    need = order_for_degree(d)
    if order is None:
        order = need
    elif order < need:
        raise QuadratureOrderInsufficient(
            f"order {order} below the {need} nodes per axis needed for degree {d}"
        )
    _check_order(order)
    return gh_grid_2d(order, center)


def gauss_rule(n, kappa, center=0.0):
    """Nodes and modified weights for integrating g(t) dt where g decays like
    exp(-kappa (t - center)^2).

    The integral is ``sum(mweights * g(nodes))``; the Gaussian factor is
    divided out inside the weights.
    """
    x, _, scaled = gauss_hermite(n)
    s = sqrt(kappa)
    return center + x / s, scaled / s


def inner_product_dmu(F, G, grid):
    """Quadrature of F conj(G) against the grid's Gaussian weight."""
    z = grid.nodes
    return complex(grid.integrate(np.asarray(F(z)) * np.conj(np.asarray(G(z)))))
