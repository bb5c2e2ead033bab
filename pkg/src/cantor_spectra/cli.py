"""Command-line front end.

Every subcommand prints one report (JSON by default, CSV on request) tagged
with ``"schema": "cantor-spectra/1"``. Exit status: 0 success, 1 invalid
input, 2 inconclusive (a stabilization scan did not settle).

Examples::

    cantor-spectra member --q 3 --digits 0,2 --x 1/4
    cantor-spectra intersect --q 3 --digits 0,2 --p 2 --max-level 20 --window 6
    cantor-spectra hadamard --N 4 --B 0,2 --L 0,1
    cantor-spectra verify --N 4 --B 0,2 --L 0,1 --depth 8 --xi-hi 1
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import __version__
from .automaton import build_orbit_graph, is_member
from .dp import dimension_upper_bound, intersect_dp, uniform_bound_experiment
from .errors import CantorSpectraError, Inconclusive, InvalidRational
from .exact import affine_digit_transform, format_rational, make_system, parse_rational, parse_rational_list
from .fourier import gram_offdiag_exact, parseval_sweep
from .hadamard import HadamardTriple, check_hadamard
from .numtheory import bloshchitsyn_params, multiplicative_order
from .spectrum import eigen_spectrum, mB_cycles, normalize_triple, spectrum_ladder

SCHEMA = "cantor-spectra/1"
FORMAT_ENV = "CANTOR_SPECTRA_FORMAT"
SUBCOMMANDS = (
    "member", "coding", "intersect", "dimbound", "uniformbound", "order",
    "bloshchitsyn", "hadamard", "spectrum", "eigenspectrum", "verify",
)

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_format: str = "json"
    seed: int = 0


def _integer(text: str) -> int:
    x = parse_rational(text)
    if x.denominator != 1:
        raise InvalidRational(f"expected an integer, got {text!r}")
    return x.numerator


def _integer_list(text: str) -> list[int]:
    return [_integer(t) for t in text.split(",") if t.strip()]


def _digits(params) -> list[Fraction]:
    return parse_rational_list(params["digits"])


def _triple(params) -> HadamardTriple:
    if params.get("triple"):
        raw = params["triple"]
        if os.path.exists(raw):
            with open(raw, encoding="utf-8") as fh:
                raw = fh.read()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CantorSpectraError(f"triple is not valid JSON: {exc}") from exc
        return HadamardTriple.of(
            _integer(str(data["N"])),
            [_integer(str(b)) for b in data["B"]],
            [_integer(str(x)) for x in data["L"]],
        )
    if params.get("N") is None or params.get("B") is None or params.get("L") is None:
        raise CantorSpectraError("give --triple JSON or all of --N, --B, --L")
    return HadamardTriple.of(_integer(params["N"]), _integer_list(params["B"]), _integer_list(params["L"]))


# -- subcommand bodies: each returns (exit code, payload dict, csv rows or None)

def _cmd_member(cfg: RunConfig):
    p = cfg.parameters
    sys_ = make_system(_integer(p["q"]), _digits(p))
    cert = is_member(sys_, parse_rational(p["x"]))
    return EXIT_OK, {"x": format_rational(parse_rational(p["x"])), **cert.to_json()}, None


def _cmd_coding(cfg: RunConfig):
    p = cfg.parameters
    sys_ = make_system(_integer(p["q"]), _digits(p))
    x = parse_rational(p["x"])
    cert = is_member(sys_, x)
    graph = build_orbit_graph(sys_, x)
    out = {"x": format_rational(x), "system": sys_.to_json(), **cert.to_json()}
    out["preperiod_digits"] = [format_rational(a) for a in cert.preperiod]
    out["period_digits"] = [format_rational(a) for a in cert.period]
    out["reconstructs"] = cert.member and cert.value(sys_.q) == x
    out["orbit_states"] = [format_rational(s) for s in sorted(graph.states)]
    return EXIT_OK, out, None


def _cmd_intersect(cfg: RunConfig):
    p = cfg.parameters
    sys_ = make_system(_integer(p["q"]), _digits(p))
    if p.get("r") or p.get("alpha"):
        sys_ = affine_digit_transform(sys_, parse_rational(p.get("r") or "1"), parse_rational(p.get("alpha") or "0"))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = intersect_dp(sys_, _integer(p["p"]), _integer(p["max_level"]), _integer(p["window"]))
    out = report.to_json()
    out["warnings"] = [str(w.message) for w in caught]
    code = EXIT_OK if report.stabilized else EXIT_INCONCLUSIVE
    return code, out, report.csv_rows()


def _cmd_dimbound(cfg: RunConfig):
    p = cfg.parameters
    sys_ = make_system(_integer(p["q"]), _digits(p))
    bound, best_m = dimension_upper_bound(sys_, _integer(p["max_m"]))
    return EXIT_OK, {
        "system": sys_.to_json(),
        "bound": bound,
        "best_m": best_m,
        "certifies_dim_below_one": bound < 1,
        "margin": 1.0 - bound,
    }, None


def _sample_alphas(count: int, max_den: int, seed: int) -> list[Fraction]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        den = rng.randint(1, max_den)
        out.append(Fraction(rng.randint(-den, den), den))
    return out


def _cmd_uniformbound(cfg: RunConfig):
    p = cfg.parameters
    sys_ = make_system(_integer(p["q"]), _digits(p))
    if p.get("alphas"):
        alphas = parse_rational_list(p["alphas"])
    else:
        alphas = _sample_alphas(_integer(p["samples"]), _integer(p["max_den"]), cfg.seed)
    diff_level = _integer(p["diff_level"]) if p.get("diff_level") else None
    report = uniform_bound_experiment(
        sys_, _integer(p["p"]), alphas, _integer(p["level"]),
        window=_integer(p["window"]), difference_level=diff_level,
    )
    out = report.to_json()
    out["seed"] = cfg.seed
    unstable = report.difference_report is not None and not report.difference_report.stabilized
    return (EXIT_INCONCLUSIVE if unstable else EXIT_OK), out, report.csv_rows()


def _cmd_order(cfg: RunConfig):
    p = cfg.parameters
    a, m = _integer(p["a"]), _integer(p["m"])
    return EXIT_OK, {"a": str(a), "m": str(m), "order": multiplicative_order(a, m)}, None


def _cmd_bloshchitsyn(cfg: RunConfig):
    p = cfg.parameters
    params = bloshchitsyn_params(_integer(p["p"]), _integer(p["q"]))
    return EXIT_OK, {
        "prime": str(params.prime),
        "base": str(params.base),
        "m": params.m,
        "d": str(params.d),
        "plateau_from": params.plateau_from,
    }, None


def _cmd_hadamard(cfg: RunConfig):
    T = _triple(cfg.parameters)
    return EXIT_OK, {"triple": T.to_json(), **check_hadamard(T).to_json()}, None


def _cmd_spectrum(cfg: RunConfig):
    p = cfg.parameters
    T = normalize_triple(_triple(p))
    ladder = spectrum_ladder(T, _integer(p["depth"]))
    out = ladder.to_json()
    out["cycles"] = [c.to_json() for c in mB_cycles(T)]
    return EXIT_OK, out, None


def _parse_exponent_tuples(text: str | None) -> list[tuple[int, ...]] | None:
    if not text:
        return None
    return [tuple(_integer_list(chunk)) for chunk in text.split(";") if chunk.strip()]


def _cmd_eigenspectrum(cfg: RunConfig):
    p = cfg.parameters
    report = eigen_spectrum(
        _triple(p),
        _integer_list(p["factors"]),
        _integer(p["depth"]),
        max_n0_scan=_integer(p["max_n0_scan"]),
        window=_integer(p["window"]),
        exponent_tuples=_parse_exponent_tuples(p.get("exponents")),
    )
    return EXIT_OK, report.to_json(), None


def _cmd_verify(cfg: RunConfig):
    p = cfg.parameters
    T = normalize_triple(_triple(p))
    depth = _integer(p["depth"])
    scale = _integer(p["scale"])
    ladder = spectrum_ladder(T, depth)
    levels = ladder.scaled(scale) if scale != 1 else ladder.levels
    gram = gram_offdiag_exact(levels[depth], T.modulus, T.B)
    xi = np.linspace(float(parse_rational(p["xi_lo"])), float(parse_rational(p["xi_hi"])), _integer(p["grid_points"]))
    first = max(0, depth - _integer(p["sweep"]))
    tol = float(p["tolerance"]) if p.get("tolerance") is not None else None
    sweep = parseval_sweep(T.modulus, T.B, levels, list(range(first, depth + 1)), xi, _integer(p["product_depth"]), tol)
    final = sweep.reports[-1]
    out = {
        "triple": T.to_json(),
        "depth": depth,
        "scale": str(scale),
        "gram_offdiag_exact": {
            "valid": gram.valid,
            "witness": [str(v) for v in gram.witness] if gram.witness else None,
            "distinct_differences": gram.pairs_checked,
        },
        "parseval": final.to_json(),
        "sweep": {
            "depths": list(sweep.depths),
            "deviations": list(sweep.deviations),
            "monotone": sweep.monotone,
            "strictly_decreasing": sweep.strictly_decreasing,
        },
    }
    return EXIT_OK, out, final.csv_rows()


COMMANDS: dict[str, Callable[[RunConfig], tuple]] = {
    "member": _cmd_member,
    "coding": _cmd_coding,
    "intersect": _cmd_intersect,
    "dimbound": _cmd_dimbound,
    "uniformbound": _cmd_uniformbound,
    "order": _cmd_order,
    "bloshchitsyn": _cmd_bloshchitsyn,
    "hadamard": _cmd_hadamard,
    "spectrum": _cmd_spectrum,
    "eigenspectrum": _cmd_eigenspectrum,
    "verify": _cmd_verify,
}


def _render(payload: dict, rows: list[list[str]] | None, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is None:
            writer.writerow(["key", "value"])
            for key in sorted(payload):
                val = payload[key]
                writer.writerow([key, val if isinstance(val, str) else json.dumps(val, sort_keys=True)])
        else:
            writer.writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one configuration; returns ``(exit code, rendered report)``."""
    envelope = {"schema": SCHEMA, "version": __version__, "command": config.subcommand}
    try:
        if config.subcommand not in COMMANDS:
            raise CantorSpectraError(f"unknown subcommand {config.subcommand!r}")
        if config.output_format not in ("json", "csv"):
            raise CantorSpectraError(f"unknown output format {config.output_format!r}")
        params = {**_parameter_defaults(config.subcommand), **config.parameters}
        code, payload, rows = COMMANDS[config.subcommand](replace(config, parameters=params))
    except KeyError as exc:
        code, payload, rows = EXIT_INVALID, {"error": {"code": "E_INPUT", "message": f"missing parameter {exc}"}}, None
    except Inconclusive as exc:
        code, payload, rows = EXIT_INCONCLUSIVE, {"error": {"code": exc.code, "message": str(exc)}}, None
    except (CantorSpectraError, ValueError) as exc:
        err_code = getattr(exc, "code", "E_INPUT")
        code, payload, rows = EXIT_INVALID, {"error": {"code": err_code, "message": str(exc)}}, None
    fmt = config.output_format if config.output_format in ("json", "csv") else "json"
    if "error" in payload:
        fmt, rows = "json", None
    return code, _render({**envelope, **payload}, rows, fmt)


class _Parser(argparse.ArgumentParser):
    """Usage errors become invalid-input reports instead of argparse's exit 2."""

    def error(self, message):
        raise CantorSpectraError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"),
                        default=argparse.SUPPRESS, help=f"output format (default: ${FORMAT_ENV} or json)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled experiments")
    parser = _Parser(prog="cantor-spectra", description=__doc__.split("\n\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name):
        return sub.add_parser(name, parents=[common])

    def system_args(sp):
        sp.add_argument("--q", required=True)
        sp.add_argument("--digits", required=True, help="comma-separated rationals, e.g. 0,2 or 0,1/2")

    def triple_args(sp):
        sp.add_argument("--triple", help="JSON object {N, B, L} or a path to one")
        sp.add_argument("--N")
        sp.add_argument("--B")
        sp.add_argument("--L")

    for name in ("member", "coding"):
        sp = add(name)
        system_args(sp)
        sp.add_argument("--x", required=True)

    sp = add("intersect")
    system_args(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--max-level", dest="max_level", default="20")
    sp.add_argument("--window", default="6")
    sp.add_argument("--r", help="count (r D_p + alpha) ∩ K instead")
    sp.add_argument("--alpha")

    sp = add("dimbound")
    system_args(sp)
    sp.add_argument("--max-m", dest="max_m", default="3")

    sp = add("uniformbound")
    system_args(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--level", default="12")
    sp.add_argument("--alphas", help="comma-separated rationals; otherwise sampled")
    sp.add_argument("--samples", default="10")
    sp.add_argument("--max-den", dest="max_den", default="1000")
    sp.add_argument("--window", default="6")
    sp.add_argument("--diff-level", dest="diff_level")

    sp = add("order")
    sp.add_argument("--a", required=True)
    sp.add_argument("--m", required=True)

    sp = add("bloshchitsyn")
    sp.add_argument("--p", required=True)
    sp.add_argument("--q", required=True)

    sp = add("hadamard")
    triple_args(sp)

    sp = add("spectrum")
    triple_args(sp)
    sp.add_argument("--depth", default="3")

    sp = add("eigenspectrum")
    triple_args(sp)
    sp.add_argument("--factors", required=True, help="comma-separated p_1..p_k")
    sp.add_argument("--depth", default="3")
    sp.add_argument("--max-n0-scan", dest="max_n0_scan", default="10")
    sp.add_argument("--window", default="4")
    sp.add_argument("--exponents", help="semicolon-separated tuples, e.g. '0;1;2' or '0,1;1,0'")

    sp = add("verify")
    triple_args(sp)
    sp.add_argument("--depth", default="8")
    sp.add_argument("--scale", default="1", help="verify t*Λ instead of Λ")
    sp.add_argument("--product-depth", dest="product_depth", default="30")
    sp.add_argument("--grid-points", dest="grid_points", default="101")
    sp.add_argument("--xi-lo", dest="xi_lo", default="0")
    sp.add_argument("--xi-hi", dest="xi_hi", default="1")
    sp.add_argument("--sweep", default="2", help="also report this many shallower depths")
    sp.add_argument("--tolerance")
    return parser


def _parameter_defaults(subcommand: str) -> dict[str, Any]:
    """Flag defaults of one subcommand, so hand-built configs match the CLI."""
    parser = build_parser()
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return {
        a.dest: a.default
        for a in sub.choices[subcommand]._actions
        if a.default not in (None, argparse.SUPPRESS) and a.dest != "help"
    }


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    fmt = ns.pop("output_format", None) or os.environ.get(FORMAT_ENV, "json")
    seed = ns.pop("seed", 0)
    subcommand = ns.pop("subcommand")
    return RunConfig(subcommand=subcommand, parameters=ns, output_format=fmt, seed=seed)


def main(argv: list[str] | None = None) -> int:
    try:
        config = config_from_args(argv)
    except CantorSpectraError as exc:
        payload = {"schema": SCHEMA, "version": __version__, "error": {"code": exc.code, "message": str(exc)}}
        sys.stdout.write(_render(payload, None, "json"))
        return EXIT_INVALID
    code, text = run(config)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
