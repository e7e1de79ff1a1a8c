import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polyfock.cpoly import CPolynomial

settings.register_profile(
    "default", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("explore", deadline=None, max_examples=2000)
settings.load_profile("default")

coeffs = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False).map(
    lambda c: complex(round(c.real, 6), round(c.imag, 6))
)


@st.composite
def polys(draw, max_degree=6, min_terms=0, max_terms=8):
    """Random CPolynomial with total degree at most max_degree."""
    monos = [(a, b) for a in range(max_degree + 1) for b in range(max_degree + 1 - a)]
    keys = draw(st.lists(st.sampled_from(monos), min_size=min_terms, max_size=max_terms, unique=True))
    return CPolynomial({k: draw(coeffs) for k in keys})


def nonzero_polys(max_degree=4, max_terms=5):
    return polys(max_degree, 1, max_terms).filter(lambda p: not p.is_zero)


def random_points(n, seed=0, radius=1.5):
    rng = np.random.default_rng(seed)
    return rng.uniform(-radius, radius, n) + 1j * rng.uniform(-radius, radius, n)
