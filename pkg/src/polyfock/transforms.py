"""Short-time Fourier transform, Bargmann transforms and the Gabor-Daubechies
localization matrix, all by Gauss-Hermite quadrature on the real line.

Signals are plain callables on real arrays. An optional ``center``
attribute tells the quadrature where the signal's Gaussian envelope sits.
"""

from math import pi, sqrt

import numpy as np

from .errors import LengthMismatch, QuadratureOrderInsufficient
from .fockbasis import HermiteSignal, hermite
from .moments import gauss_rule, gh_grid_2d

DEFAULT_ORDER = 64
ERROR_TOL = 1e-7


def _center(f):
    return float(getattr(f, "center", 0.0))


def _gauss_integral(integrand, center, order, check=True):
    """Integrate ``integrand(t)`` whose envelope is exp(-2 pi (t - center)^2).

    ``center`` may be an array; the result broadcasts over it. The doubled
    order serves as the error estimate.
    """
    center = np.asarray(center, dtype=float)

    def run(n):
        t, w = gauss_rule(n, 2 * pi)
        tt = center[..., None] + t
        return np.sum(integrand(tt) * w, axis=-1)

    value = run(order)
    if check:
        ref = run(min(2 * order, 200))
        err = float(np.max(np.abs(ref - value))) if np.size(value) else 0.0
        if err > ERROR_TOL:
            raise QuadratureOrderInsufficient(
                f"order {order} quadrature differs from order {min(2 * order, 200)} by {err:.3g}"
            )
        value = ref
    return value


class TimeFrequencyShift:
    """M_eta T_u f, the signal t -> exp(2 pi i eta t) f(t - u)."""

    def __init__(self, f, u, eta):
        self.f, self.u, self.eta = f, float(u), float(eta)
        self.center = _center(f) + self.u

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(2j * pi * self.eta * t) * self.f(t - self.u)


def phase_space_shift(u, eta, F):
    """beta_{u + i eta} F = exp(i pi u eta) W_{u - i eta} F for a callable F on the plane.

    With this phase B^j(M_eta T_u f) = beta_{u + i eta} B^j f.
    """
    w = complex(u, -eta)

    def shifted(z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * pi * u * eta + pi * np.conj(w) * z - pi * abs(w) ** 2 / 2) * F(z - w)

    return shifted


def stft(f, psi, x, omega, order=DEFAULT_ORDER):
    """V_psi f(x, omega) = int f(t) conj(psi(t - x)) exp(-2 pi i t omega) dt."""
    x, omega = np.broadcast_arrays(np.asarray(x, float), np.asarray(omega, float))
    xe, oe = x[..., None], omega[..., None]

    def integrand(t):
        return f(t) * np.conj(psi(t - xe)) * np.exp(-2j * pi * t * oe)

    center = 0.5 * (_center(f) + _center(psi) + x)
    out = _gauss_integral(integrand, center, order)
    return out if out.ndim else complex(out)


def bargmann(f, z, order=DEFAULT_ORDER):
    """Bf(z) = 2^(1/4) int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt."""
    z = np.asarray(z, dtype=complex)
    ze = z[..., None]

    def integrand(t):
        return 2**0.25 * f(t) * np.exp(2 * pi * t * ze - pi * t * t - pi * ze * ze / 2)

    center = 0.5 * (_center(f) + z.real)
    out = _gauss_integral(integrand, center, order)
    return out if out.ndim else complex(out)


def true_poly_bargmann(j, f, z, order=DEFAULT_ORDER):
    """B^j f(x + i omega) = exp(-i pi x omega + pi |z|^2 / 2) V_{h_j} f(x, -omega)."""
    z = np.asarray(z, dtype=complex)
    x, w = z.real, z.imag
    window = HermiteSignal.basis(j)
    v = stft(f, window, x, -w, order)
    out = np.exp(-1j * pi * x * w + pi * np.abs(z) ** 2 / 2) * v
    return out if np.ndim(out) else complex(out)


def vector_bargmann(n, fs, z, order=DEFAULT_ORDER):
    """Sum over j <= n of B^j applied to the j-th signal."""
    if len(fs) != n + 1:
        raise LengthMismatch(f"expected {n + 1} signals, got {len(fs)}")
    return sum(true_poly_bargmann(j, f, z, order) for j, f in enumerate(fs))


def stft_inner(f, psi, g, phi, order=DEFAULT_ORDER, grid_order=24):
    """<V_psi f, V_phi g> over the time-frequency plane.

    For signals with Gaussian envelopes the product is exp(-pi(x^2 + omega^2))
    times a polynomial, so a Gaussian tensor rule in (x, omega) is exact.
    """
    grid = gh_grid_2d(grid_order)
    x, w = grid.nodes.real, grid.nodes.imag
    vals = stft(f, psi, x, w, order) * np.conj(stft(g, phi, x, w, order))
    vals = vals * np.exp(pi * (x * x + w * w))
    return complex(np.sum(grid.weights * vals))


def gabor_daubechies_matrix(a, psi, theta, M, order=DEFAULT_ORDER, grid_order=32):
    """Matrix of <A h_m, h_m'> for the localization operator with symbol a(x, omega).

    Entry [m', m] is int a V_psi h_m conj(V_theta h_m') dx domega.
    """
    grid = gh_grid_2d(grid_order)
    x, w = grid.nodes.real, grid.nodes.imag
    aval = np.asarray(a(x, w), dtype=complex) * np.ones_like(x)
    gauss = np.exp(pi * (x * x + w * w))
    vpsi = [stft(HermiteSignal.basis(m), psi, x, w, order) for m in range(M + 1)]
    vth = [stft(HermiteSignal.basis(m), theta, x, w, order) for m in range(M + 1)]
    out = np.zeros((M + 1, M + 1), dtype=complex)
    for m in range(M + 1):
        for mp in range(M + 1):
            out[mp, m] = np.sum(grid.weights * aval * vpsi[m] * np.conj(vth[mp]) * gauss)
    return out


__all__ = [
    "TimeFrequencyShift",
    "phase_space_shift",
    "stft",
    "bargmann",
    "true_poly_bargmann",
    "vector_bargmann",
    "stft_inner",
    "gabor_daubechies_matrix",
    "hermite",
]
