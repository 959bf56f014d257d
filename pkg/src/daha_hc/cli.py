"""Command-line entry point.

Settings resolve as flags > ``DAHA_*`` environment variables > INI config
file (section ``[daha]``) > built-in defaults.  Reports are JSON lines.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import macdonald as M
from . import spherical as S
from .errors import DahaError, InsufficientCutoffError, NonGenericError
from .polyring import ParamSpec, as_fraction, fmt
from .qseries import mu_coefficients, mu_ct_product, sigma_value, theta_value
from .rootdata import build_root_system
from .suites import SUITES, SuiteContext, run_suite

_NEGATIVE = re.compile(r"^-\d[\d,-]*$")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONGENERIC, EXIT_CUTOFF = 0, 1, 2, 3, 4

# key -> (default, parser); the environment variable is DAHA_<KEY upper>
SETTINGS = {
    "type": ("A1", str),
    "v": ("1/2", str),
    "u": ("1/3", str),
    "theta_shells": (S.DEFAULT_CUTOFFS.theta_shells, int),
    "product_order": (S.DEFAULT_CUTOFFS.product_order, int),
    "mu_order": (S.DEFAULT_CUTOFFS.mu_order, int),
    "psi_shells": (S.DEFAULT_CUTOFFS.psi_shells, int),
    "xi_depth": (S.DEFAULT_CUTOFFS.xi_depth, int),
    "tolerance": (fmt(S.DEFAULT_TOLERANCE), str),
    "max_tail": (fmt(S.DEFAULT_MAX_TAIL), str),
    "format": ("jsonl", str),
    "output": ("-", str),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    type: str
    v: Fraction
    u: list
    cut: S.Cutoffs
    tolerance: Fraction
    max_tail: Fraction
    format: str = "jsonl"
    output: str = "-"
    sources: dict = field(default_factory=dict)

    def params(self) -> ParamSpec:
        rs = build_root_system(self.type)
        u = self.u[0] if len(self.u) == 1 else self.u
        return ParamSpec(rs, self.v, u)


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _coords(text: Sequence[str]) -> tuple:
    out = []
    for piece in text:
        for part in piece.replace(",", " ").split():
            try:
                out.append(int(part))
            except ValueError as exc:
                raise UsageError(f"weight coordinates must be integers: {part!r}") from exc
    return tuple(out)


def _rationals(text: str) -> list:
    return [_rational(x) for x in text.replace(",", " ").split()]


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    file_values: dict = {}
    path = getattr(args, "config", None) or environ.get("DAHA_CONFIG")
    if path:
        cp = configparser.ConfigParser()
        if not cp.read(path):
            raise UsageError(f"cannot read config file {path}")
        if cp.has_section("daha"):
            file_values = {k.replace("-", "_"): v for k, v in cp.items("daha")}
    values, sources = {}, {}
    for key, (default, conv) in SETTINGS.items():
        flag = getattr(args, key, None)
        env = environ.get("DAHA_" + key.upper())
        if flag is not None:
            raw, src = flag, "flag"
        elif env is not None:
            raw, src = env, "env"
        elif key in file_values:
            raw, src = file_values[key], "config"
        else:
            raw, src = default, "default"
        try:
            values[key] = conv(raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
        sources[key] = src
    tol = _rational(values["tolerance"])
    if tol <= 0:
        raise UsageError("tolerance must be positive")
    if values["format"] not in ("jsonl", "csv"):
        raise UsageError("format must be jsonl or csv")
    cut = S.Cutoffs(theta_shells=values["theta_shells"], product_order=values["product_order"],
                    mu_order=values["mu_order"], psi_shells=values["psi_shells"],
                    xi_depth=values["xi_depth"])
    return RunConfig(values["type"], _rational(values["v"]), _rationals(values["u"]), cut, tol,
                     _rational(values["max_tail"]), values["format"], values["output"], sources)


# ------------------------------------------------------------------ commands
def _poly_json(p) -> dict:
    return {"terms": p.to_json()}


def cmd_roots(cfg: RunConfig, args) -> list:
    return [build_root_system(cfg.type).summary()]


def cmd_epoly(cfg: RunConfig, args) -> list:
    params = cfg.params()
    b = _coords(args.coords)
    e = M.e_polynomial(params, b)
    return [{"object": "E", "params": params.echo(), "b": list(b),
             "b_sharp": params.point_sharp(b).to_json(), "coefficients": e.poly.to_json()}]


def cmd_eval(cfg: RunConfig, args) -> list:
    params = cfg.params()
    b = _coords(args.coords)
    val = M.e_poly(params, b)(params.point_rho(-1))
    prod = M.evaluation_product(params, b)
    return [{"object": "evaluation", "params": params.echo(), "b": list(b),
             "specialized": fmt(val), "product": fmt(prod), "pass": val == prod}]


def cmd_duality(cfg: RunConfig, args) -> list:
    params = cfg.params()
    b, c = _coords([args.b]), _coords([args.c])
    gap = M.duality_gap(params, b, c)
    return [{"object": "duality", "params": params.echo(), "b": list(b), "c": list(c),
             "gap": fmt(gap), "pass": gap == 0}]


def cmd_sympoly(cfg: RunConfig, args) -> list:
    params = cfg.params()
    b = _coords(args.coords)
    if not params.rs.is_antidominant(b):
        raise UsageError("sympoly expects an antidominant weight")
    return [{"object": "P", "params": params.echo(), "b": list(b),
             "coefficients": M.symmetric_P(params, b).to_json(),
             "normalized": M.symmetric_P_normalized(params, b).to_json()}]


def cmd_mu(cfg: RunConfig, args) -> list:
    params = cfg.params()
    prod = mu_ct_product(params, cfg.cut.product_order)
    mu = mu_coefficients(params, cfg.cut.mu_order)
    return [{"object": "mu", "params": params.echo(), "product": prod.to_json(),
             "constant_term": mu.ct.to_json(), "coefficients": len(mu.coef)}]


def _point(params: ParamSpec, text: str):
    vals = _rationals(text)
    if len(vals) != params.rs.rank:
        raise UsageError(f"a point needs {params.rs.rank} values (on the fundamental weights)")
    return params.point_numeric(vals)


def cmd_theta(cfg: RunConfig, args) -> list:
    params = cfg.params()
    pt = _point(params, args.point)
    return [{"object": "theta", "params": params.echo(), "point": args.point,
             "value": theta_value(pt, cfg.cut.theta_shells).to_json()}]


def cmd_sigma(cfg: RunConfig, args) -> list:
    params = cfg.params()
    pt = _point(params, args.point)
    return [{"object": "sigma", "params": params.echo(), "point": args.point,
             "value": sigma_value(pt, cfg.cut.product_order).to_json()}]


def cmd_psi(cfg: RunConfig, args) -> list:
    params = cfg.params()
    x, lam = _point(params, args.x), _point(params, args.lam)
    return [{"object": "psi", "params": params.echo(), "x": args.x, "lam": args.lam,
             "value": S.psi_value(x, lam, cfg.cut).to_json()}]


def cmd_gfun(cfg: RunConfig, args) -> list:
    params = cfg.params()
    x, lam = _point(params, args.x), _point(params, args.lam)
    return [{"object": "G", "params": params.echo(), "x": args.x, "lam": args.lam,
             "value": S.g_value(x, lam, cfg.cut).to_json()}]


def cmd_verify(cfg: RunConfig, args) -> list:
    ctx = SuiteContext(cfg.params(), cfg.cut, cfg.tolerance, cfg.max_tail)
    reports = [r.to_json() for r in run_suite(args.suite, ctx)]
    if not reports:
        raise UsageError(f"suite {args.suite} has no items for type {cfg.type}")
    return reports


COMMANDS = {
    "roots": cmd_roots, "epoly": cmd_epoly, "eval": cmd_eval, "duality": cmd_duality,
    "sympoly": cmd_sympoly, "mu": cmd_mu, "theta": cmd_theta, "sigma": cmd_sigma,
    "psi": cmd_psi, "gfun": cmd_gfun, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters (flags > DAHA_* env > config > defaults)")
    g.add_argument("--type", help="root system label, e.g. A1, B2, G2 (default A1)")
    g.add_argument("--v", help="base v with q = v^(2m), rational string (default 1/2)")
    g.add_argument("--u", help="bases u_nu with t_nu = u_nu^(2 nu m); comma list by root length (default 1/3)")
    g.add_argument("--theta-shells", dest="theta_shells", help="θ shell cutoff R")
    g.add_argument("--product-order", dest="product_order", help="infinite product order")
    g.add_argument("--mu-order", dest="mu_order", help="μ expansion order")
    g.add_argument("--psi-shells", dest="psi_shells", help="Ψ/Φ shell cap")
    g.add_argument("--xi-depth", dest="xi_depth", help="Ξ series depth J")
    g.add_argument("--tolerance", help="residual tolerance added to tail budgets (rational > 0)")
    g.add_argument("--max-tail", dest="max_tail", help="largest accepted tail budget (rational)")
    g.add_argument("--config", help="INI file with a [daha] section")
    g.add_argument("--format", help="jsonl (default) or csv")
    g.add_argument("--output", help="output path, - for stdout")

    ap = argparse.ArgumentParser(prog="daha-hc", description="Nonsymmetric Macdonald polynomials, "
                                 "global spherical functions and their verification suites.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("roots", "dump root system data")
    p.add_argument("root_type", nargs="?")
    for name, text in (("epoly", "E-polynomial of a weight"), ("eval", "evaluation at q^{-ρ_k}"),
                       ("sympoly", "symmetric P of an antidominant weight")):
        p = add(name, text)
        p.add_argument("root_type", nargs="?", help="root system label (overrides --type)")
        p.add_argument("coords", nargs="*", help="weight coordinates on ω_i")
    p = add("duality", "duality gap of two weights")
    p.add_argument("b", help="comma-separated coordinates")
    p.add_argument("c", help="comma-separated coordinates")
    add("mu", "⟨μ⟩ by product and by constant term")
    for name in ("theta", "sigma"):
        p = add(name, f"{name} at a point")
        p.add_argument("--point", required=True, help="values on ω_i, comma separated")
    for name in ("psi", "gfun"):
        p = add(name, f"{'Ψ' if name == 'psi' else 'G'}(x, λ)")
        p.add_argument("--x", required=True, help="values on ω_i, comma separated")
        p.add_argument("--lam", required=True, help="values on ω_i, comma separated")
    p = add("verify", "run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    # weights such as -1,2 are positionals, not options
    for parser in [ap, *sub.choices.values()]:
        parser._negative_number_matcher = _NEGATIVE
    return ap


def _split_type(args) -> None:
    """``epoly A1 -1``: the first positional is a type when it is not a number."""
    root = getattr(args, "root_type", None)
    if root is None:
        return
    coords = getattr(args, "coords", None)
    try:
        int(root.replace(",", " ").split()[0])
        is_number = True
    except (ValueError, IndexError):
        is_number = False
    if is_number and coords is not None:
        args.coords = [root] + list(coords)
    elif args.type is None:
        args.type = root
    elif args.type != root:
        raise UsageError(f"conflicting root types {root!r} and --type {args.type!r}")


def _emit(records: list, cfg: RunConfig, stream) -> None:
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity", "residual", "tail", "pass"])
        for r in records:
            w.writerow([r.get("identity", r.get("object", "")), r.get("residual", ""),
                        r.get("tail_budget", ""), r.get("pass", "")])
        stream.write(buf.getvalue())
    else:
        for r in records:
            stream.write(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n")


def _error(stream, kind: str, exc: Exception, code: int) -> int:
    stream.write(json.dumps({"error": kind, "message": str(exc), "exit_code": code},
                            sort_keys=True, ensure_ascii=False) + "\n")
    return code


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None, environ=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _split_type(args)
        cfg = resolve_config(args, environ)
        if args.command in ("epoly", "eval", "sympoly") and not args.coords:
            raise UsageError("weight coordinates are required")
        records = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        stderr.write(f"daha-hc: {exc}\n")
        return EXIT_USAGE
    except NonGenericError as exc:
        return _error(stdout, "non-generic", exc, EXIT_NONGENERIC)
    except InsufficientCutoffError as exc:
        return _error(stdout, "insufficient-cutoff", exc, EXIT_CUTOFF)
    except DahaError as exc:
        if exc.exit_code == EXIT_USAGE:
            stderr.write(f"daha-hc: {exc}\n")
            return EXIT_USAGE
        return _error(stdout, type(exc).__name__, exc, exc.exit_code)
    if cfg.output != "-":
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            _emit(records, cfg, fh)
    else:
        _emit(records, cfg, stdout)
    ok = all(r.get("pass", True) for r in records)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
