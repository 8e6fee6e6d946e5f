"""Command-line front end.

Every subcommand prints one JSON report on stdout.  Exit codes:
0 success, 1 a requested check failed, 2 usage or parse error,
3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import band as band_mod
from .errors import ConsistencyError, ResourceLimitError, TracewordsError
from .expansion import atom_free_expansion, genus_expansion, spherical_counts
from .limits import (
    clt_params,
    fc_moment_of_word,
    fuss_catalan,
    joint_trace_covariance,
    word_mixed_moment_limit,
)
from .montecarlo import (
    EnsembleKind,
    EnsembleSpec,
    MCConfig,
    centered_trace_covariance,
    estimate,
    squared_singular_moments,
    trace_samples,
    write_trace_csv,
)
from .oracle import brute_force_wick_oracle
from .pairings import DEFAULT_MAX_LENGTH
from .words import coperiod, is_balanced, is_star_free, is_star_stable, parse_word, render

SCHEMA_VERSION = "1"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "argv", "inputs", "exact", "monte_carlo", "verdicts", "timings", "ok"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["analyze", "expand", "limits", "band", "simulate"]},
        "argv": {"type": "array", "items": {"type": "string"}},
        "inputs": {"type": "object"},
        "exact": {"type": "object"},
        "monte_carlo": {"type": "object"},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "value": {"type": ["string", "number"]},
                    "target": {"type": ["string", "number"]},
                    "stderr": {"type": "number"},
                    "z": {"type": "number"},
                    "tolerance": {"type": "number"},
                },
            },
        },
        "timings": {
            "type": "object",
            "required": ["total_seconds"],
            "properties": {"total_seconds": {"type": "number", "minimum": 0}},
        },
        "ok": {"type": "boolean"},
    },
}


class UsageError(Exception):
    pass


def _words_arg(items: list[str]):
    words = []
    for item in items:
        for part in item.split(","):
            if part.strip():
                words.append(parse_word(part))
    if not words:
        raise UsageError("no words given")
    return words


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TRACEWORDS_WORKERS", "1")))
    except ValueError:
        return 1


def _z_verdict(name: str, value: float, target: float, stderr: float, tol: float) -> dict:
    z = abs(value - target) / stderr if stderr > 0 else (0.0 if value == target else float("inf"))
    return {
        "name": name,
        "value": float(value),
        "target": float(target),
        "stderr": float(stderr),
        "z": float(z) if np.isfinite(z) else 1e300,
        "tolerance": float(tol),
        "pass": bool(z <= tol),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args, report):
    w = parse_word(args.word)
    sc = spherical_counts(w, max_length=args.max_length)
    clt = clt_params(w)
    report["inputs"] = {"word": render(w)}
    report["exact"] = {
        "length": len(w),
        "coperiod": coperiod(w),
        "balanced": is_balanced(w),
        "star_free": is_star_free(w),
        "star_stable": is_star_stable(w),
        "spherical_counts": sc.as_dict(),
        "clt": clt.as_dict(),
    }


def cmd_expand(args, report):
    words = _words_arg(args.words)
    report["inputs"] = {"words": [render(w) for w in words], "centered": args.centered}
    if args.centered:
        poly = atom_free_expansion(words, max_length=args.max_length)
    else:
        poly = genus_expansion(words, workers=args.workers, max_length=args.max_length)
    report["exact"] = {"polynomial": str(poly), "coefficients": poly.to_json_dict()}
    if args.oracle is not None:
        report["inputs"]["oracle_N"] = args.oracle
        plain = genus_expansion(words, max_length=args.max_length) if args.centered else poly
        ours = plain.evaluate(args.oracle)
        theirs = brute_force_wick_oracle(words, args.oracle)
        report["exact"]["oracle"] = {"expansion_value": str(ours), "oracle_value": str(theirs)}
        report["verdicts"].append(
            {"name": "oracle", "value": str(ours), "target": str(theirs), "pass": ours == theirs}
        )


def cmd_limits(args, report):
    w = parse_word(args.word)
    report["inputs"] = {"word": render(w)}
    exact = {}
    star_free = is_star_free(w)
    if args.fc is not None:
        if star_free:
            exact["fc_moments"] = [fc_moment_of_word(w, k) for k in range(1, args.fc + 1)]
        exact["fuss_catalan"] = [fuss_catalan(len(w) + 1, k) for k in range(1, args.fc + 1)]
    if args.mixed is not None:
        idx = [int(x) for x in args.mixed.split(",")]
        report["inputs"]["mixed"] = idx
        exact["mixed_moment"] = word_mixed_moment_limit(w, idx)
    if star_free:
        exact["joint_variances"] = joint_trace_covariance(w, args.kmax)
    report["exact"] = exact


def cmd_band(args, report):
    exact = {}
    report["inputs"] = {}
    if args.alpha:
        if args.cycle is None:
            raise UsageError("--alpha needs --cycle m")
        m = args.cycle
        est = band_mod.alpha_estimate(band_mod.cycle_graph(m), args.lam)
        exact["alpha_cycle"] = band_mod.alpha_cycle(m)
        exact["alpha_graph"] = {"value": est.value, "error": est.error, "sizes": list(est.sizes)}
        report["inputs"].update({"cycle": m, "lambda": args.lam})
    if args.word:
        words = _words_arg([args.word])
        report["inputs"]["words"] = [render(w) for w in words]
        if args.clt:
            p = band_mod.band_clt_params(words[0], args.lam)
            report["inputs"]["lambda"] = args.lam
            exact["clt"] = {"a": p.a, "b": p.b, "c": p.c, "b_error": p.b_error, "c_error": p.c_error}
        if args.N is not None or args.b is not None:
            if args.N is None or args.b is None:
                raise UsageError("band expansion needs both --N and --b")
            cfg = band_mod.BandConfig(args.N, args.b)
            value = band_mod.band_genus_expansion(
                words, cfg, max_length=args.max_length, max_vertices=args.max_vertices
            )
            report["inputs"].update({"N": cfg.N, "b": cfg.b, "l": cfg.l})
            exact["expectation"] = str(value)
    if not exact:
        raise UsageError("nothing to compute: give a word with --N/--b or --clt, or --alpha --cycle m")
    report["exact"] = exact


def cmd_simulate(args, report):
    w = parse_word(args.word)
    spec = EnsembleSpec.parse(args.ensemble, args.N)
    cfg = MCConfig(args.samples, args.seed, args.workers)
    report["inputs"] = {
        "word": render(w),
        "ensemble": spec.to_json(),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "workers": cfg.workers,
    }
    mc = {}
    traces = trace_samples([w], spec, cfg)[:, 0]
    mc["trace"] = estimate(traces).to_json()
    if args.csv:
        write_trace_csv(args.csv, traces)
        report["inputs"]["csv"] = args.csv
    tol = args.tolerance
    if args.check:
        if spec.kind is EnsembleKind.BAND_COMPLEX:
            lam = 0.5 if spec.l == spec.N else spec.b / spec.N
            params = band_mod.band_clt_params(w, lam)
            shift = params.a
            t = traces - shift * spec.N
            scaled = (spec.l / spec.N) * np.abs(t) ** 2
            est = estimate(scaled)
            mc["scaled_variance"] = est.to_json()
            report["exact"]["band_b"] = params.b
            report["verdicts"].append(
                _z_verdict("scaled_variance", est.mean.real, params.b, est.stderr, tol)
            )
        else:
            clt = clt_params(w)
            cov = centered_trace_covariance(w, spec, cfg, shift=clt.shift)
            mc["centered_covariance"] = cov.to_json()
            report["exact"]["clt"] = clt.as_dict()
            target = [[float(clt.var_re), 0.0], [0.0, float(clt.var_im)]]
            names = [["re_re", "re_im"], ["im_re", "im_im"]]
            for i in range(2):
                for j in range(i, 2):
                    report["verdicts"].append(
                        _z_verdict(f"cov_{names[i][j]}", cov.cov[i, j], target[i][j], cov.stderr[i, j], tol)
                    )
    if args.check_fc is not None:
        ks = list(range(1, args.check_fc + 1))
        ests = squared_singular_moments(w, ks, spec, cfg)
        mc["squared_singular_moments"] = {str(k): e.to_json() for k, e in ests.items()}
        for k in ks:
            target = fuss_catalan(len(w) + 1, k)
            e = ests[k]
            report["verdicts"].append(_z_verdict(f"fc_{k}", e.mean.real, target, e.stderr, tol))
    report["monte_carlo"] = mc


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracewords", description="Genus expansions and Monte Carlo checks for Gaussian matrix words.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="word properties, sphere counts and CLT parameters")
    p.add_argument("word")
    p.add_argument("--max-length", type=int, default=64, help="cap on the total length searched")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("expand", help="exact genus expansion of a product of traces")
    p.add_argument("words", nargs="+", help="words, separated by commas or given as separate arguments")
    p.add_argument("--centered", action="store_true", help="atom-free (centered) expansion")
    p.add_argument("--oracle", type=int, metavar="N", help="cross-check against exhaustive summation at this N")
    p.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("limits", help="Fuss-Catalan moments, mixed moments, joint trace variances")
    p.add_argument("word")
    p.add_argument("--fc", type=int, metavar="K", help="moments 1..K of the squared singular values")
    p.add_argument("--mixed", metavar="A1,B1,...", help="exponent tuple for a mixed moment")
    p.add_argument("--kmax", type=int, default=3, help="number of powers for joint variances")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("band", help="band-matrix expansion and volume coefficients")
    p.add_argument("word", nargs="?")
    p.add_argument("--N", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--alpha", action="store_true")
    p.add_argument("--cycle", type=int)
    p.add_argument("--clt", action="store_true")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
    p.add_argument("--max-vertices", type=int, default=band_mod.MAX_COMPONENT_VERTICES)
    p.set_defaults(func=cmd_band)

    p = sub.add_parser("simulate", help="Monte Carlo estimates with optional checks")
    p.add_argument("word")
    p.add_argument("--ensemble", default="ginibre", help="ginibre, real, gue, goe, fourth, sparse:p=..., band:b=...")
    p.add_argument("--N", type=int, default=128)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--check", action="store_true", help="compare trace statistics with their limits")
    p.add_argument("--check-fc", type=int, metavar="K", help="compare squared singular moments 1..K with Fuss-Catalan numbers")
    p.add_argument("--tolerance", type=float, default=5.0, help="allowed distance in standard errors")
    p.add_argument("--csv", metavar="PATH", help="write per-sample traces (sample, re, im)")
    p.set_defaults(func=cmd_simulate)
    return parser


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "argv": argv,
        "inputs": {},
        "exact": {},
        "monte_carlo": {},
        "verdicts": [],
        "timings": {},
        "ok": True,
    }
    start = time.perf_counter()
    try:
        args.func(args, report)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, TracewordsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report["timings"]["total_seconds"] = time.perf_counter() - start
    report["ok"] = all(v["pass"] for v in report["verdicts"])
    json.dump(report, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
