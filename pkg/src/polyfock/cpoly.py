"""Sparse polynomials in z and zbar, constant-coefficient style differential
operators acting on them, and the heat semigroup generated by 4 d/dz d/dzbar.

A polynomial is a map ``(a, b) -> c`` standing for ``sum c z^a zbar^b``.
A differential operator is a map ``(a, b, l, m) -> c`` standing for
``sum c z^a zbar^b d_z^l d_zbar^m`` (derivatives act first).
"""

from math import comb, factorial, pi, sqrt

import numpy as np

from .errors import ZeroDivisor

PRUNE_RTOL = 1e-14
DIVISION_RTOL = 1e-10


def _falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _grlex(mono):
    # graded lexicographic with z > zbar
    return (mono[0] + mono[1], mono[0])


class CPolynomial:
    """Polynomial in z and zbar with complex coefficients.

    Coefficients below ``1e-14`` times the largest one are dropped on
    construction, so the zero polynomial has an empty term map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (a, b), c in terms.items():
                a, b = int(a), int(b)
                if a < 0 or b < 0:
                    raise ValueError("exponents must be non-negative")
                c = complex(c)
                if c != 0:
                    clean[(a, b)] = clean.get((a, b), 0) + c
        if clean:
            cutoff = PRUNE_RTOL * max(abs(c) for c in clean.values())
            clean = {k: c for k, c in clean.items() if abs(c) > cutoff}
        self._terms = clean

    @classmethod
    def monomial(cls, a, b, c=1.0):
        return cls({(a, b): c})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def z(cls):
        return cls({(1, 0): 1.0})

    @classmethod
    def zbar(cls):
        return cls({(0, 1): 1.0})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, a, b):
        return self._terms.get((a, b), 0j)

    @property
    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(a + b for a, b in self._terms)

    @property
    def degree_z(self):
        return max((a for a, _ in self._terms), default=-1)

    @property
    def degree_zbar(self):
        return max((b for _, b in self._terms), default=-1)

    @property
    def max_abs(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def leading_monomial(self):
        if not self._terms:
            return None
        return max(self._terms, key=_grlex)

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return CPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return CPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return CPolynomial({k: c * other for k, c in self._terms.items()})
        other = _coerce(other)
        out = {}
        for (a, b), c in self._terms.items():
            for (d, e), f in other._terms.items():
                key = (a + d, b + e)
                out[key] = out.get(key, 0) + c * f
        return CPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a non-negative integer")
        out = CPolynomial.constant(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, CPolynomial):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def allclose(self, other, rtol=1e-12, atol=0.0):
        """Coefficientwise comparison, tolerance relative to the larger operand."""
        other = _coerce(other)
        scale = max(self.max_abs, other.max_abs)
        return (self - other).max_abs <= atol + rtol * scale if scale else True

    def max_abs_diff(self, other):
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.coeff(*k) - other.coeff(*k)) for k in keys), default=0.0)

    # calculus and symmetries

    def conjugate(self):
        """The polynomial whose values are the complex conjugates of ours."""
        return CPolynomial({(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def conj_coeffs(self):
        """Conjugate the coefficients only, keeping every monomial in place."""
        return CPolynomial({k: c.conjugate() for k, c in self._terms.items()})

    def differentiate(self, wrt="z", times=1):
        if wrt not in ("z", "zbar"):
            raise ValueError("wrt must be 'z' or 'zbar'")
        out = {}
        for (a, b), c in self._terms.items():
            if wrt == "z" and a >= times:
                out[(a - times, b)] = c * _falling(a, times)
            elif wrt == "zbar" and b >= times:
                out[(a, b - times)] = c * _falling(b, times)
        return CPolynomial(out)

    def shift(self, w):
        """Return q with q(zeta) = p(zeta - w)."""
        w = complex(w)
        wb = w.conjugate()
        out = {}
        for (a, b), c in self._terms.items():
            for r in range(a + 1):
                ca = comb(a, r) * (-w) ** (a - r)
                for s in range(b + 1):
                    key = (r, s)
                    out[key] = out.get(key, 0) + c * ca * comb(b, s) * (-wb) ** (b - s)
        return CPolynomial(out)

    def evaluate(self, z):
        """Evaluate at a complex scalar or array, nested Horner in zbar then z."""
        z = np.asarray(z, dtype=complex)
        if not self._terms:
            return np.zeros_like(z) if z.ndim else 0j
        zb = np.conj(z)
        by_a = {}
        for (a, b), c in self._terms.items():
            by_a.setdefault(a, {})[b] = c
        out = np.zeros_like(z)
        for a in range(self.degree_z, -1, -1):
            inner = np.zeros_like(z)
            row = by_a.get(a)
            if row:
                for b in range(max(row), -1, -1):
                    inner = inner * zb + row.get(b, 0)
            out = out * z + inner
        return out if out.ndim else complex(out)

    __call__ = evaluate

    # serialization

    def to_json(self):
        terms = sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0]))
        return {
            "terms": [
                {"a": a, "b": b, "re": c.real, "im": c.imag} for (a, b), c in terms
            ]
        }

    @classmethod
    def from_json(cls, data):
        return cls({(t["a"], t["b"]): complex(t["re"], t["im"]) for t in data["terms"]})

    def __repr__(self):
        from .expr import format_poly

        return f"CPolynomial({format_poly(self)!r})"

    def __str__(self):
        from .expr import format_poly

        return format_poly(self)


def _coerce(x):
    if isinstance(x, CPolynomial):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return CPolynomial.constant(x)
    raise TypeError(f"cannot combine CPolynomial with {type(x).__name__}")


def heat_flow(p, t):
    """Apply exp(t * Delta), Delta = 4 d_z d_zbar.

    The series terminates because Delta lowers both degrees by one.
    """
    out = {}
    for (a, b), c in p.items():
        for m in range(min(a, b) + 1):
            coef = c * (4.0 * t) ** m / factorial(m) * _falling(a, m) * _falling(b, m)
            key = (a - m, b - m)
            out[key] = out.get(key, 0) + coef
    return CPolynomial(out)


def try_divide(num, den, rtol=DIVISION_RTOL):
    """Exact polynomial division, or None if the remainder does not vanish.

    Uses multivariate division in graded-lex order with z > zbar. Terms
    smaller than ``rtol`` times the largest numerator coefficient count as
    zero, both while reducing and when judging the remainder.
    """
    if den.is_zero:
        raise ZeroDivisor("division by the zero polynomial")
    if num.is_zero:
        return CPolynomial()
    tiny = rtol * num.max_abs
    lead = den.leading_monomial()
    lead_c = den.coeff(*lead)
    tail = [(k, c) for k, c in den.items() if k != lead]
    rem = num.terms
    quot = {}
    while rem:
        mono = max(rem, key=_grlex)
        c = rem.pop(mono)
        if abs(c) <= tiny:
            continue
        if mono[0] < lead[0] or mono[1] < lead[1]:
            return None
        qm = (mono[0] - lead[0], mono[1] - lead[1])
        qc = c / lead_c
        quot[qm] = quot.get(qm, 0) + qc
        for (a, b), dc in tail:
            key = (a + qm[0], b + qm[1])
            rem[key] = rem.get(key, 0) - qc * dc
    return CPolynomial(quot)


class DiffOp:
    """Differential operator sum c z^a zbar^b d_z^l d_zbar^m in normal order."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                key = tuple(int(v) for v in key)
                if len(key) != 4 or min(key) < 0:
                    raise ValueError("DiffOp keys are (a, b, l, m) with non-negative entries")
                c = complex(c)
                if c != 0:
                    clean[key] = clean.get(key, 0) + c
        if clean:
            cutoff = PRUNE_RTOL * max(abs(c) for c in clean.values())
            clean = {k: c for k, c in clean.items() if abs(c) > cutoff}
        self._terms = clean

    @classmethod
    def identity(cls):
        return cls({(0, 0, 0, 0): 1.0})

    @classmethod
    def d_z(cls):
        return cls({(0, 0, 1, 0): 1.0})

    @classmethod
    def d_zbar(cls):
        return cls({(0, 0, 0, 1): 1.0})

    @classmethod
    def multiply_by(cls, p):
        return cls({(a, b, 0, 0): c for (a, b), c in p.items()})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def is_zero(self):
        return not self._terms

    @property
    def order(self):
        return max((l + m for _, _, l, m in self._terms), default=-1)

    @property
    def max_abs(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __add__(self, other):
        other = _coerce_op(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce_op(other))

    def __rsub__(self, other):
        return _coerce_op(other) - self

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, complex, np.number)):
            return DiffOp({k: c * scalar for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self.compose(other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def allclose(self, other, rtol=1e-12, atol=0.0):
        other = _coerce_op(other)
        scale = max(self.max_abs, other.max_abs)
        return (self - other).max_abs <= atol + rtol * scale if scale else True

    def compose(self, other):
        """Normal-ordered form of ``self`` applied after ``other``."""
        out = {}
        for (a, b, l, m), c in self._terms.items():
            for (p, q, r, s), d in other._terms.items():
                for i in range(min(l, p) + 1):
                    ci = comb(l, i) * _falling(p, i)
                    for j in range(min(m, q) + 1):
                        coef = c * d * ci * comb(m, j) * _falling(q, j)
                        key = (a + p - i, b + q - j, l - i + r, m - j + s)
                        out[key] = out.get(key, 0) + coef
        return DiffOp(out)

    def __pow__(self, n):
        out = DiffOp.identity()
        for _ in range(n):
            out = self.compose(out)
        return out

    def __call__(self, p):
        return apply_diff(self, p)

    def __repr__(self):
        parts = [f"{c:.6g}*z^{a}*zbar^{b}*dz^{l}*dzbar^{m}" for (a, b, l, m), c in sorted(self._terms.items())]
        return "DiffOp(" + " + ".join(parts) + ")"


def _coerce_op(x):
    if isinstance(x, DiffOp):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return DiffOp({(0, 0, 0, 0): x})
    raise TypeError(f"cannot combine DiffOp with {type(x).__name__}")


def apply_diff(op, p):
    out = {}
    for (a, b, l, m), c in op.items():
        for (pa, pb), pc in p.items():
            if pa < l or pb < m:
                continue
            key = (pa - l + a, pb - m + b)
            out[key] = out.get(key, 0) + c * pc * _falling(pa, l) * _falling(pb, m)
    return CPolynomial(out)


def anti_wick(p, scale=1 / sqrt(pi)):
    """Replace z^a zbar^b by (-scale)^(a+b) d_z^a d_zbar^b, keeping coefficients."""
    return DiffOp({(0, 0, a, b): c * (-scale) ** (a + b) for (a, b), c in p.items()})
