"""Weyl operators, coherent states and reproducing kernels of the true and
full polyanalytic Fock spaces.

Functions of the form exp(pi conj(c) zeta - pi |c|^2 / 2) q(zeta, conj zeta)
are represented exactly by :class:`CoherentPoly`. Inner products between
them reduce to derivatives of the generating function
int exp(alpha zeta + beta conj zeta) dmu = exp(alpha beta / pi).
"""

from dataclasses import dataclass
from math import comb, factorial, pi

import numpy as np

from .cpoly import CPolynomial
from .errors import NotInSubspace
from .fockbasis import phi_jk
from .moments import gh_grid_2d, inner_poly, order_for_degree

REPRODUCE_MARGIN = 20


@dataclass(frozen=True)
class CoherentPoly:
    center: complex
    poly: CPolynomial

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        c = complex(self.center)
        env = np.exp(pi * c.conjugate() * zeta - pi * abs(c) ** 2 / 2)
        out = env * self.poly(zeta)
        return out if np.ndim(out) else complex(out)

    def scale(self, factor):
        return CoherentPoly(self.center, self.poly * complex(factor))


def _as_coherent(F):
    if isinstance(F, CoherentPoly):
        return F
    return CoherentPoly(0j, F)


def weyl_apply(z, F):
    """W_z F(zeta) = exp(pi conj(z) zeta - pi |z|^2 / 2) F(zeta - z)."""
    z = complex(z)
    F = _as_coherent(F)
    b = complex(F.center)
    phase = np.exp(1j * pi * (z.conjugate() * b).imag)
    return CoherentPoly(z + b, F.poly.shift(z) * complex(phase))


def weyl_adjoint_apply(z, F):
    return weyl_apply(-complex(z), F)


def _gaussian_moment(p, q, alpha, beta):
    """exp(-alpha beta / pi) * int zeta^p conj(zeta)^q exp(alpha zeta + beta conj zeta) dmu."""
    total = 0j
    for r in range(min(p, q) + 1):
        total += (
            factorial(r) * comb(p, r) * comb(q, r) * pi**-r
            * (beta / pi) ** (p - r) * (alpha / pi) ** (q - r)
        )
    return total


def inner(F, G):
    """Exact <F, G> in L^2(dmu) for polynomials or coherent polynomials."""
    F, G = _as_coherent(F), _as_coherent(G)
    # W is unitary: move the midpoint of the centres to the origin to avoid cancellation
    mid = (complex(F.center) + complex(G.center)) / 2
    if mid:
        F, G = weyl_apply(-mid, F), weyl_apply(-mid, G)
    c1, c2 = complex(F.center), complex(G.center)
    alpha, beta = pi * c1.conjugate(), pi * c2
    env = np.exp(alpha * beta / pi - pi * (abs(c1) ** 2 + abs(c2) ** 2) / 2)
    total = 0j
    for (a, b), f in F.poly.items():
        for (c, d), g in G.poly.items():
            # F term f zeta^a zbar^b; conj of G term is conj(g) zeta^d zbar^c
            total += f * g.conjugate() * _gaussian_moment(a + d, b + c, alpha, beta)
    return complex(env * total)


def norm(F):
    return float(np.sqrt(max(inner(F, F).real, 0.0)))


def norm_quadrature(F, order=None):
    """Norm by a Gaussian rule recentred at the coherent state's centre."""
    F = _as_coherent(F)
    d = 2 * max(F.poly.degree, 0)
    grid = gh_grid_2d(order or order_for_degree(d), F.center)
    w = grid.nodes
    vals = np.abs(F(w)) ** 2 * np.exp(pi * np.abs(w - F.center) ** 2 - pi * np.abs(w) ** 2)
    return float(np.sqrt(np.sum(grid.weights * vals)))


def coherent_state(j, zeta):
    """K^j_zeta = W_zeta Phi_{j,j}, a unit vector in the level-j space."""
    return weyl_apply(zeta, phi_jk(j, j))


def kernel(j, zeta, z):
    """Reproducing kernel K^j(zeta, z) = exp(pi conj(z) zeta) Phi_{j,j}(zeta - z)."""
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.exp(pi * np.conj(z) * zeta) * phi_jk(j, j)(zeta - z)
    return out if np.ndim(out) else complex(out)


def poly_kernel(n, zeta, z):
    """Kernel of the full polyanalytic space of order n, the sum over levels j <= n."""
    return sum(kernel(j, zeta, z) for j in range(n + 1))


def kernel_as_function(j, z):
    """zeta -> K^j(zeta, z) as a coherent polynomial."""
    z = complex(z)
    return CoherentPoly(z, phi_jk(j, j).shift(z) * np.exp(pi * abs(z) ** 2 / 2))


def level_components(F, max_level=None):
    """Norms of the projections of polynomial F onto each level j."""
    d = F.degree
    levels = range((max_level if max_level is not None else d) + 1)
    out = {}
    for j in levels:
        s = 0.0
        for m in range(d + 1):
            s += abs(inner_poly(F, phi_jk(j, m))) ** 2
        out[j] = s**0.5
    return out


def reproduce(j, F, z, check=True):
    """<F, K^j(., z)> by quadrature; equals F(z) when F lies in the level-j space."""
    if check:
        scale = max(F.max_abs, 1e-300)
        for level, size in level_components(F).items():
            if level != j and size > 1e-10 * scale:
                raise NotInSubspace(f"component of size {size:.3g} at level {level}")
    z = complex(z)
    # |F conj(K)| e^{-pi|w|^2} peaks near z/2 and carries an oscillating phase
    deg = F.degree + 2 * j
    grid = gh_grid_2d(min(order_for_degree(deg) + REPRODUCE_MARGIN, 200), z / 2)
    w = grid.nodes
    vals = F(w) * np.conj(kernel(j, w, z)) * np.exp(-pi * np.abs(w) ** 2 + pi * np.abs(w - z / 2) ** 2)
    return complex(np.sum(grid.weights * vals))
