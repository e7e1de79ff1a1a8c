"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 not divisible,
3 parse or configuration error.
"""

import argparse
import math
import sys
from dataclasses import dataclass

from .errors import (
    DivergentWeight,
    NotDivisible,
    ParseError,
    PolyfockError,
    QuadratureOrderInsufficient,
    WindowSubspaceViolation,
)
from .expr import format_poly, parse_complex, parse_poly
from .fockbasis import phi_jk
from .kernels import kernel, poly_kernel
from .moments import MAX_ORDER
from .quantize import coburn_verify, quasi_norm
from .serialize import dumps, matrix_csv, reports_csv
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_NOT_DIVISIBLE, EXIT_USAGE = 0, 1, 2, 3


class ConfigError(PolyfockError):
    pass


@dataclass
class CliConfig:
    quad_order: int = 64
    truncation: int = 6
    n: int = 2
    tolerance: float = 1e-6
    fmt: str = "json"

    def validate(self):
        if self.truncation < 1:
            raise ConfigError("truncation K must be at least 1")
        if not 1 <= self.quad_order <= MAX_ORDER:
            raise ConfigError(f"quad-order must lie in 1..{MAX_ORDER}")
        if self.n < 0:
            raise ConfigError("n must be non-negative")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")

    def require_order(self, degree):
        need = 2 * degree + 2
        if self.quad_order < need:
            raise ConfigError(
                f"quad-order {self.quad_order} below {need} required for polynomials of degree {degree}"
            )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, fmt_default="json"):
    p.add_argument("--quad-order", type=int, default=64, help="Gauss-Hermite nodes per axis")
    p.add_argument("--truncation", type=int, default=6, help="largest basis index K")
    p.add_argument("--n", type=int, default=2, help="largest polyanalytic level")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--format", choices=["json", "csv", "text"], default=fmt_default)
    p.add_argument("--out", help="write the output to this file instead of stdout")


def build_parser():
    parser = _Parser(prog="polyfock", description="Polyanalytic Fock space toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("basis", help="print the basis polynomial Phi_{j,k}")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eval", dest="point", help="also evaluate at this complex point")
    _common(p, "text")

    p = sub.add_parser("kernel", help="evaluate the reproducing kernel K^j(zeta, z)")
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--zeta", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--full", action="store_true", help="sum over levels j <= n instead")
    _common(p)

    p = sub.add_parser("coburn", help="build and verify the Toeplitz form of a two-window operator")
    p.add_argument("--psi", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--sigma", required=True)
    _common(p)

    p = sub.add_parser("verify-suite", help="run every identity check")
    _common(p)

    p = sub.add_parser("norms", help="weighted quasi-norm of a polynomial symbol")
    p.add_argument("--sigma", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", required=True, choices=["1", "inf"])
    _common(p)
    p.set_defaults(n=0)
    return parser


def _config(args):
    cfg = CliConfig(args.quad_order, args.truncation, args.n, args.tolerance, args.format)
    cfg.validate()
    return cfg


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_basis(args, cfg):
    p = phi_jk(args.j, args.k)
    value = parse_complex(args.point) if args.point is not None else None
    if cfg.fmt == "text":
        lines = [format_poly(p)]
        if value is not None:
            lines.append(dumps(p(value)))
        return "\n".join(lines), EXIT_OK
    payload = {"j": args.j, "k": args.k, "polynomial": p, "terms": p.to_json()["terms"]}
    if value is not None:
        payload["value"] = p(value)
    if cfg.fmt == "csv":
        rows = ["a,b,re,im"] + [f"{t['a']},{t['b']},{t['re']!r},{t['im']!r}" for t in payload["terms"]]
        return "\n".join(rows), EXIT_OK
    return dumps(payload), EXIT_OK


def cmd_kernel(args, cfg):
    zeta, z = parse_complex(args.zeta), parse_complex(args.z)
    value = poly_kernel(cfg.n, zeta, z) if args.full else kernel(args.j, zeta, z)
    payload = {"j": cfg.n if args.full else args.j, "full": args.full, "zeta": zeta, "z": z, "value": value}
    if cfg.fmt == "csv":
        return f"re,im\n{value.real!r},{value.imag!r}", EXIT_OK
    return dumps(payload), EXIT_OK


def cmd_coburn(args, cfg):
    psi, theta, sigma = parse_poly(args.psi), parse_poly(args.theta), parse_poly(args.sigma)
    if psi.is_zero or theta.is_zero:
        raise ConfigError("windows must be nonzero polynomials")
    cfg.require_order(max(psi.degree, theta.degree, sigma.degree))
    try:
        report, res = coburn_verify(psi, theta, args.j, args.k, sigma, cfg.truncation, cfg.tolerance, cfg.quad_order)
    except NotDivisible as exc:
        res = exc.result
        payload = {"error": "NotDivisible", "message": str(exc)}
        if res is not None:
            payload["numerator"] = res.numerator
            payload["denominator"] = res.denominator
        return dumps(payload), EXIT_NOT_DIVISIBLE
    code = EXIT_OK if report.passed else EXIT_FAIL
    if cfg.fmt == "csv":
        from .quantize import berezin_toeplitz_matrix

        L = berezin_toeplitz_matrix(psi, theta, sigma, max(args.j, args.k), cfg.truncation, cfg.quad_order)
        return matrix_csv(L.data), code
    payload = {
        "quotient": res.quotient,
        "degree": res.degree,
        "numerator": res.numerator,
        "denominator": res.denominator,
        "operator": res.operator,
        "report": report,
    }
    return dumps(payload), code


def cmd_verify_suite(args, cfg):
    reports = run_suite(cfg.quad_order, cfg.truncation)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if cfg.fmt == "csv":
        return reports_csv(reports), code
    return dumps(reports), code


def cmd_norms(args, cfg):
    sigma = parse_poly(args.sigma)
    p = 1 if args.p == "1" else math.inf
    try:
        value = quasi_norm(sigma, args.a, args.alpha, p, cfg.n)
    except DivergentWeight as exc:
        return dumps({"error": "DivergentWeight", "message": str(exc)}), EXIT_FAIL
    return dumps({"value": value, "a": args.a, "alpha": args.alpha, "p": args.p, "n": cfg.n}), EXIT_OK


COMMANDS = {
    "basis": cmd_basis,
    "kernel": cmd_kernel,
    "coburn": cmd_coburn,
    "verify-suite": cmd_verify_suite,
    "norms": cmd_norms,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        text, code = COMMANDS[args.command](args, cfg)
    except (ParseError, ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (QuadratureOrderInsufficient, WindowSubspaceViolation) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
