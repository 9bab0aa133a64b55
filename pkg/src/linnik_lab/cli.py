"""Command-line front end: one subcommand per operation, plus parameter sweeps.

Numbers accept scientific notation (``1e8``).  List-valued options accept
comma lists (``3,4,5``), geometric ranges ``start:stop:xK`` and arithmetic
ranges ``start:stop:+K``.  Exit status is 0 on success, 1 on a domain error
and 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from typing import Callable, Sequence

from . import __version__
from .analysis import (DirichletPolynomial, mean_square_window, montgomery_check, mvt_probe,
                       taylor_log_deriv_KN)
from .errors import ConfigurationError, DomainError, LinnikLabError, PoleError, PrecisionWarning
from .lemma_lab import LEMMA_CSV_COLUMNS, ShiuSpec, shiu_ratio, verify_sifted_lemma
from .linnik import (PROBE_COLUMNS, DeltaInput, RoughTable, delta, delta_star, exponent_fit,
                     hybrid_identity_residual, parameter_schedule, recursion_residual, resolve_psi,
                     theorem_probe)
from .lseries import (dirichlet_l, find_exceptional, l_rough, l_rough_deriv,
                      measure_lseries_bounds, siegel_zero_scan)
from .reports import render, write_report
from .residues import (DEFAULT_MODULUS_CAP, DirichletCharacter, build_unit_group, enumerate_characters)
from .sieve import DEFAULT_RANGE_CAP, THREADS_ENV, chebyshev_residues, rough_residues

EXIT_OK, EXIT_DOMAIN, EXIT_CONFIG = 0, 1, 2


class UsageError(ConfigurationError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route its complaints through exit code 2 via an exception
    def error(self, message):
        raise UsageError(message)


# value parsers

def real_value(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def int_value(text: str) -> int:
    v = real_value(text)
    if not math.isfinite(v) or v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def complex_value(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _expand(text: str, integral: bool) -> list:
    scalar = int_value if integral else real_value
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            out.append(scalar(part))
            continue
        pieces = part.split(":")
        if len(pieces) != 3 or not pieces[2] or pieces[2][0] not in "x+":
            raise argparse.ArgumentTypeError(f"range must be start:stop:xK or start:stop:+K, got {part!r}")
        start, stop, step = real_value(pieces[0]), real_value(pieces[1]), real_value(pieces[2][1:])
        geometric = pieces[2][0] == "x"
        if (geometric and (step <= 1 or start <= 0)) or (not geometric and step <= 0):
            raise argparse.ArgumentTypeError(f"range {part!r} does not advance")
        k, v = 0, start
        while v <= stop * (1 + 1e-12):
            out.append(int(round(v)) if integral else v)
            k += 1
            v = start * step**k if geometric else start + step * k
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def int_list(text: str) -> list[int]:
    return _expand(text, True)


def real_list(text: str) -> list[float]:
    return _expand(text, False)


def interval(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return real_value(lo), real_value(hi)


def coefficient_map(text: str) -> dict[int, complex]:
    """``n:a`` pairs separated by commas, e.g. ``1:1,2:0.5,3:-1j``."""
    out = {}
    for part in text.split(","):
        n, sep, a = part.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"coefficient must be n:a, got {part!r}")
        out[int_value(n)] = complex_value(a)
    return out


# shared helpers

def _characters(q: int, spec: str, cap: int) -> list[DirichletCharacter]:
    group = build_unit_group(q, cap)
    chars = enumerate_characters(group)
    if spec == "all":
        return chars
    body = spec.split(":", 1)[1] if ":" in spec else spec
    exps = tuple(int(e) for e in body.split(".")) if group.orders else ()
    if not group.orders and body not in ("", "0"):
        raise DomainError(f"modulus {q} has only the trivial character")
    return [DirichletCharacter(group, exps)]


def _coprime(q: int, given: list[int] | None) -> list[int]:
    if given is not None:
        return given
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1] if q > 1 else [1]


# subcommands; each returns (rows, preferred columns, extra meta)

def cmd_group(args):
    g = build_unit_group(args.q, args.modulus_cap)
    rows = [{"q": g.modulus, "phi": g.phi, "component": i, "generator": gen, "order": o}
            for i, (gen, o) in enumerate(g.components)]
    return rows or [{"q": g.modulus, "phi": g.phi, "component": None, "generator": None, "order": None}], (), {}


def cmd_chars(args):
    rows = []
    for chi in _characters(args.q, args.chi, args.modulus_cap):
        rows.append({"q": chi.modulus, "chi": chi.label, "order": chi.order,
                     "is_principal": chi.is_principal, "is_real": chi.is_real})
    return rows, (), {}


def cmd_psi_ap(args):
    rows = []
    for q in args.q:
        for x in args.x:
            table = chebyshev_residues(x, q, threads=args.threads, cap=args.sieve_cap)
            for a in _coprime(q, args.a):
                if math.gcd(a, q) != 1:
                    raise DomainError(f"gcd({a}, {q}) > 1")
                rows.append({"q": q, "a": a, "x": x, "psi_ap": float(table[a % q])})
    return rows, (), {}


def cmd_rough(args):
    table = rough_residues(args.x, args.y, args.q, args.j, threads=args.threads, cap=args.sieve_cap)
    rows = [{"q": args.q, "a": a, "x": args.x, "y": args.y, "j": args.j, "sum": float(table[a % args.q])}
            for a in _coprime(args.q, args.a)]
    return rows, (), {}


def cmd_verify_lemma(args):
    rows = []
    for q in args.q:
        if args.kind == "character":
            targets = _characters(q, args.target, args.modulus_cap)
        else:
            targets = _coprime(q, None if args.target == "all" else int_list(args.target))
        for target in targets:
            rep = verify_sifted_lemma(args.kind, args.x, args.y, q, target, args.j,
                                      args.envelope_constant, args.decay_constant)
            row = rep.as_row()
            row.update({"envelope_constant": rep.envelope_constant, "decay_constant": rep.decay_constant,
                        "implied_constant": rep.implied_constant})
            rows.append(row)
    return rows, LEMMA_CSV_COLUMNS, {}


def cmd_shiu(args):
    spec = {"one": ShiuSpec.constant_one, "rough": lambda: ShiuSpec.rough_indicator(args.y),
            "divisor": lambda: ShiuSpec.divisor(args.m)}[args.f]()
    r = shiu_ratio(spec, args.x, args.window, args.q, args.a, args.epsilon)
    row = r.as_row()
    row["epsilon"] = args.epsilon
    return [row], (), {}


def cmd_lvalue(args):
    rows = []
    for chi in _characters(args.q, args.chi, args.modulus_cap):
        try:
            v = dirichlet_l(args.s, chi)
        except PoleError:
            # a single requested character at its pole is an error; in a full listing it is one row
            if args.chi != "all":
                raise
            rows.append({"q": chi.modulus, "chi": chi.label, "s": args.s, "re": None, "im": None, "abs": None,
                         "pole": True})
            continue
        rows.append({"q": chi.modulus, "chi": chi.label, "s": args.s, "re": v.real, "im": v.imag, "abs": abs(v),
                     "pole": False})
    return rows, (), {}


def cmd_lrough(args):
    rows = []
    for chi in _characters(args.q, args.chi, args.modulus_cap):
        row = {"q": chi.modulus, "chi": chi.label, "y": args.y, "s": args.s, "k": args.k}
        if args.k == 0:
            v = l_rough(args.s, chi, args.y)
            row.update({"re": v.real, "im": v.imag})
        else:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", PrecisionWarning)
                res = l_rough_deriv(args.s, chi, args.y, args.k)
            row.update({"re": res.value.real, "im": res.value.imag, "radius": res.radius, "nodes": res.nodes,
                        "rel_change": res.rel_change, "precision_warning": bool(caught) or bool(res.warning)})
        rows.append(row)
    return rows, (), {}


def cmd_exceptional(args):
    rows = []
    for q in args.q:
        rep = find_exceptional(q, scan=not args.no_scan)
        row = rep.as_row()
        if rep.scan is not None:
            row.update({"zeros": len(rep.scan.zeros), "anomaly": rep.scan.anomaly, "ratio": rep.scan.ratio})
        rows.append(row)
    return rows, (), {}


def cmd_siegel_scan(args):
    rows = []
    for q in args.q:
        rows.append(siegel_zero_scan(q, args.window, args.grid).as_row())
    return rows, (), {}


def cmd_lbounds(args):
    table = measure_lseries_bounds(args.q, args.y, args.sigma, args.t, args.j_max)
    rows = [dict(r, q=args.q, y=args.y, feasible=False) for r in table.rows]
    return rows, ("q", "y", "class", "chi", "sigma", "t", "j", "value", "feasible"), {"header": table.header,
                                                                                          "summary": table.summary}


def cmd_meansq(args):
    P = DirichletPolynomial.from_mapping(args.coeffs)
    v = mean_square_window(P, args.sigma, args.T1, args.T2, args.weight)
    return [{"sigma": args.sigma, "T1": args.T1, "T2": args.T2, "weight": args.weight, "terms": len(P),
             "value": v}], (), {}


def cmd_montgomery(args):
    A = DirichletPolynomial.from_mapping(args.a_coeffs)
    B = DirichletPolynomial.from_mapping(args.b_coeffs)
    r = montgomery_check(A, B, args.sigma, args.T)
    return [dict(r.as_row(), sigma=args.sigma, T=args.T)], (), {}


def cmd_mvt(args):
    rows = []
    for sigma in args.sigma:
        for j in args.j:
            for T in args.T:
                rows.append(mvt_probe(args.q, args.a, args.y, sigma, j, T, args.T_max, args.N_trunc).as_row())
    return rows, (), {}


def cmd_kn(args):
    F = DirichletPolynomial.from_mapping(args.coeffs)
    r = taylor_log_deriv_KN(F, args.s, args.k)
    return [dict(r.as_row(), s=args.s)], (), {}


def cmd_delta(args):
    psi = resolve_psi(args.q)
    table = RoughTable(max(args.u), args.y, args.q)
    rows = []
    for b in _coprime(args.q, args.b):
        for u in args.u:
            inp = DeltaInput(u, args.y, args.q, b, psi)
            rows.append({"q": args.q, "b": b, "u": u, "y": args.y, "psi": psi.label if psi else None,
                         "feasible": False, "delta": delta(inp, table), "delta_star": delta_star(inp, table)})
    return rows, (), {}


def cmd_identity(args):
    rows = []
    for q in args.q:
        for a in _coprime(q, args.a):
            for x in args.x:
                y = args.y if args.y is not None else 16 * q * q
                rows.append(dict(hybrid_identity_residual(x, q, a, y).as_row(), feasible=False))
    return rows, (), {}


def cmd_recursion(args):
    rows = []
    for q in args.q:
        for a in _coprime(q, args.a):
            for x in args.x:
                y = args.y if args.y is not None else 16 * q * q
                rows.append(dict(recursion_residual(x, q, a, y, args.C2).as_row(), feasible=False))
    return rows, (), {}


def cmd_schedule(args):
    rows = []
    for q in args.q:
        for x in args.x:
            y = args.y_override if args.y_override is not None else 16 * q * q
            s = parameter_schedule(x, q, args.L_const, args.M_prime, y, args.sieve_cap, args.B)
            rows.append(s.as_row())
    return rows, (), {}


def _probe_rows(args) -> list[dict]:
    rows = []
    for q in args.q:
        for a in _coprime(q, args.a):
            for x in args.x:
                rep = theorem_probe(x, q, a, args.y_override, C1=args.C1, C2=args.C2, c_prime=args.c_prime,
                                    c_dprime=args.c_dprime, L_const=args.L_const, M_prime=args.M_prime,
                                    threads=args.threads)
                rows.append(rep.as_row())
    return rows


def cmd_probe(args):
    return _probe_rows(args), PROBE_COLUMNS, {}


def cmd_sweep(args):
    if args.target == "probe":
        return _probe_rows(args), PROBE_COLUMNS, {}
    if args.target == "fit":
        rows = []
        for q in args.q:
            for a in _coprime(q, args.a):
                fit = exponent_fit(args.x, q, a, y_override=args.y_override, threads=args.threads)
                rows.append(dict(fit.as_row(), q=q, a=a, feasible=False))
        return rows, ("q", "a", "slope", "intercept"), {}
    sub = {"identity": cmd_identity, "recursion": cmd_recursion, "schedule": cmd_schedule}[args.target]
    if args.target != "schedule":
        args.y = args.y_override
    return sub(args)


# parser

def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output and run control")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--output", default=None, help="output path (default: stdout)")
    g.add_argument("--config", default=None, help="key = value file; flags override it")
    g.add_argument("--threads", type=int_value, default=None, help=f"worker threads (default: ${THREADS_ENV} or 1)")
    g.add_argument("--sieve-cap", dest="sieve_cap", type=int_value, default=DEFAULT_RANGE_CAP)
    g.add_argument("--modulus-cap", dest="modulus_cap", type=int_value, default=DEFAULT_MODULUS_CAP)
    c = p.add_argument_group("constants")
    c.add_argument("--C1", type=real_value, default=0.1)
    c.add_argument("--C2", type=real_value, default=0.1)
    c.add_argument("--c-prime", dest="c_prime", type=real_value, default=0.1)
    c.add_argument("--c-dprime", dest="c_dprime", type=real_value, default=0.1)
    c.add_argument("--L-const", dest="L_const", type=real_value, default=1.0)
    c.add_argument("--M-prime", dest="M_prime", type=real_value, default=4.0)
    c.add_argument("--B", type=real_value, default=4.0)
    c.add_argument("--envelope-constant", dest="envelope_constant", type=real_value, default=1.0)
    c.add_argument("--decay-constant", dest="decay_constant", type=real_value, default=0.1)


COMMANDS: dict[str, tuple[Callable, str]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linnik-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        p = subs.add_parser(name, help=help_text, description=help_text)
        _common(p)
        p.set_defaults(handler=fn)
        COMMANDS[name] = (fn, help_text)
        return p

    p = add("group", cmd_group, "cyclic decomposition of (Z/qZ)*")
    p.add_argument("--q", type=int_value, required=True)
    p = add("chars", cmd_chars, "list characters with their classification")
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--chi", default="all", help="exponents e1.e2..., or 'all'")
    p = add("psi-ap", cmd_psi_ap, "Chebyshev psi(x; q, a)")
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--x", type=int_list, required=True)
    p.add_argument("--a", type=int_list, default=None)
    p = add("rough", cmd_rough, "sums of (log n)^j over y-rough n <= x by residue class")
    p.add_argument("--x", type=int_value, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--q", type=int_value, default=1)
    p.add_argument("--a", type=int_list, default=None)
    p.add_argument("--j", type=int_value, default=0)
    p = add("verify-lemma", cmd_verify_lemma, "sifted sum against its sieve main term")
    p.add_argument("--kind", choices=("character", "ap"), default="ap")
    p.add_argument("--x", type=real_value, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--target", default="all", help="residue list, character exponents, or 'all'")
    p.add_argument("--j", type=int_value, default=0)
    p = add("shiu", cmd_shiu, "short-interval progression sum of a multiplicative function")
    p.add_argument("--f", choices=("one", "rough", "divisor"), default="one")
    p.add_argument("--m", type=int_value, default=2)
    p.add_argument("--y", type=real_value, default=10.0)
    p.add_argument("--x", type=real_value, required=True)
    p.add_argument("--window", type=real_value, required=True)
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--a", type=int_value, required=True)
    p.add_argument("--epsilon", type=real_value, default=0.1)
    p = add("lvalue", cmd_lvalue, "Dirichlet L(s, chi)")
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--chi", default="all")
    p.add_argument("--s", type=complex_value, required=True)
    p = add("lrough", cmd_lrough, "y-rough L-series and its derivatives")
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--chi", default="all")
    p.add_argument("--s", type=complex_value, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--k", type=int_value, default=0)
    p = add("exceptional", cmd_exceptional, "exceptional real character psi and L_q(1, psi)")
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--no-scan", dest="no_scan", action="store_true")
    p = add("siegel-scan", cmd_siegel_scan, "real-zero scan of L(sigma, psi)")
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--window", type=interval, default=(0.85, 1.0))
    p.add_argument("--grid", type=int_value, default=512)
    p = add("lbounds", cmd_lbounds, "grid measurements of |L_y| and its normalised derivatives")
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--sigma", type=real_list, default=[1.1, 1.5])
    p.add_argument("--t", type=real_list, default=[0.0, 1.0])
    p.add_argument("--j-max", dest="j_max", type=int_value, default=4)
    p = add("meansq", cmd_meansq, "windowed mean square of a Dirichlet polynomial")
    p.add_argument("--coeffs", type=coefficient_map, required=True)
    p.add_argument("--sigma", type=real_value, required=True)
    p.add_argument("--T1", type=real_value, required=True)
    p.add_argument("--T2", type=real_value, required=True)
    p.add_argument("--weight", choices=("flat", "inverse-t-squared"), default="flat")
    p = add("montgomery", cmd_montgomery, "majorant mean-square comparison")
    p.add_argument("--a-coeffs", dest="a_coeffs", type=coefficient_map, required=True)
    p.add_argument("--b-coeffs", dest="b_coeffs", type=coefficient_map, required=True)
    p.add_argument("--sigma", type=real_value, required=True)
    p.add_argument("--T", type=real_value, required=True)
    p = add("mvt", cmd_mvt, "truncated mean-value probe of the rough progression series")
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--a", type=int_value, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--sigma", type=real_list, required=True)
    p.add_argument("--j", type=int_list, default=[0])
    p.add_argument("--T", type=real_list, required=True)
    p.add_argument("--T-max", dest="T_max", type=real_value, default=None)
    p.add_argument("--N-trunc", dest="N_trunc", type=int_value, default=10**6)
    p = add("kn", cmd_kn, "Taylor-coefficient sandwich K versus N")
    p.add_argument("--coeffs", type=coefficient_map, required=True)
    p.add_argument("--s", type=complex_value, required=True)
    p.add_argument("--k", type=int_value, required=True)
    p = add("delta", cmd_delta, "discrepancy functionals Delta and Delta*")
    p.add_argument("--u", type=real_list, required=True)
    p.add_argument("--y", type=real_value, required=True)
    p.add_argument("--q", type=int_value, required=True)
    p.add_argument("--b", type=int_list, default=None)
    for name, fn, text in (("identity", cmd_identity, "residual of the exact bilinear log identity"),
                           ("recursion", cmd_recursion, "residual of the Delta recursion")):
        p = add(name, fn, text)
        p.add_argument("--x", type=int_list, required=True)
        p.add_argument("--q", type=int_list, required=True)
        p.add_argument("--a", type=int_list, default=None)
        p.add_argument("--y", type=real_value, default=None, help="default 16 q^2")
    p = add("schedule", cmd_schedule, "parameter schedule of the argument")
    p.add_argument("--x", type=real_list, required=True)
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--y-override", dest="y_override", type=real_value, default=None)
    p = add("probe", cmd_probe, "error term E(x; q, a) with its envelopes")
    p.add_argument("--x", type=int_list, required=True)
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--a", type=int_list, default=None)
    p.add_argument("--y-override", dest="y_override", type=real_value, default=None)
    p = add("sweep", cmd_sweep, "grid sweep of probe, fit, identity, recursion or schedule")
    p.add_argument("target", choices=("probe", "fit", "identity", "recursion", "schedule"))
    p.add_argument("--x", type=int_list, required=True)
    p.add_argument("--q", type=int_list, required=True)
    p.add_argument("--a", type=int_list, default=None)
    p.add_argument("--y-override", dest="y_override", type=real_value, default=None)
    return parser


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"{path}:{num}: expected key = value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def _config_path(argv: Sequence[str]) -> str | None:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    """Install config-file values as subcommand defaults, so explicit flags still win."""
    path = _config_path(argv)
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    if path is None or command is None:
        return
    try:
        sub = _subparser(parser, command)
    except KeyError:
        return  # argparse reports the bad command
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    converted = {}
    for key, text in read_config(path).items():
        if key not in actions:
            raise ConfigurationError(f"unknown config key {key!r} for {command}")
        action = actions[key]
        if action.nargs == 0:
            converted[key] = text.lower() in ("1", "true", "yes", "on")
            continue
        try:
            converted[key] = action.type(text) if action.type else text
        except argparse.ArgumentTypeError as exc:
            raise ConfigurationError(f"config key {key}: {exc}") from None
        if action.choices is not None and converted[key] not in action.choices:
            raise ConfigurationError(f"config key {key}: {text!r} not among {list(action.choices)}")
    sub.set_defaults(**converted)
    for action in sub._actions:
        if action.dest in converted:
            action.required = False


def parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    _apply_config(parser, argv)
    args = parser.parse_args(argv)
    for name in ("threads", "sieve_cap", "modulus_cap"):
        v = getattr(args, name)
        if v is not None and v < 1:
            raise ConfigurationError(f"--{name.replace('_', '-')} must be positive")
    return args


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "output", "format", "command")}


def dispatch(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = parse(list(sys.argv[1:] if argv is None else argv))
        rows, columns, extra = args.handler(args)
        meta = {"version": __version__, "command": args.command, "config": _config_echo(args)}
        meta.update(extra)
        write_report(render(rows, args.format, meta, columns), args.output, stdout)
    except ConfigurationError as exc:
        print(f"linnik-lab: configuration error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (DomainError, LinnikLabError, ValueError) as exc:
        print(f"linnik-lab: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
