"""Batch front end: generate problems, build transfer pairs, verify
orthogonality claims, sweep the norm/companion catalog, check the pairing
symmetry diagram, and run convergence studies, emitting JSON or CSV reports.

Exit codes: 0 all verifications passed, 1 a verification failed, 2 malformed
configuration or a construction failure. The COMPATAMG_THREADS environment
variable caps how many independent cases run in parallel (default 1); output
ordering is configuration order regardless.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import NormSpec, SingularMatrixError, partition, realize_norm
from .matio import load_matrix
from .problems import PROBLEM_KINDS, ProblemSpec, default_splitting, generate
from .projection import (
    build_pi,
    min_canonical_angle,
    nonorth_measure,
    orthogonality_checks,
    pi_m_norm,
    verify_compat_equation,
)
from .solver import (
    RelaxSpec,
    TwoGridSpec,
    conv_factor,
    iterate,
    observed_rate,
    two_grid_propagator,
)
from .transfer import (
    SINGLE_OPERATOR_PAIRS,
    catalog_pairs,
    ideal_pair,
    ideal_w,
    ideal_z,
    make_pair,
    realize_q,
    single_operator_pair,
)

__all__ = ["main", "entry", "ExperimentConfig", "FIGURE_EDGES"]


class ConfigError(ValueError):
    """Configuration problem; the message names the offending field."""


# The ten pairings of the ideal-operator symmetry diagram:
# (line style, norm the correction is orthogonal in, R companion, P companion).
FIGURE_EDGES = (
    ("solid", "identity", "identity", "AinvStar"),
    ("solid", "identity", "A", "identity"),
    ("solid", "identity", "AAstar", "A"),
    ("dotted", "A", "AinvStar", "AinvStar"),
    ("dotted", "A", "identity", "identity"),
    ("dotted", "A", "A", "A"),
    ("dotted", "A", "AAstar", "AstarA"),
    ("dashed", "AstarA", "AinvStar", "identity"),
    ("dashed", "AstarA", "identity", "A"),
    ("dashed", "AstarA", "A", "AstarA"),
)

_SINGLE_NAMES = tuple(rec["name"] for rec in SINGLE_OPERATOR_PAIRS)


@dataclass
class ExperimentConfig:
    command: str
    problem: ProblemSpec
    split: str = "alternate"
    cfrac: float = 0.5
    norms: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    pre: RelaxSpec = RelaxSpec("none")
    post: RelaxSpec = RelaxSpec("none")
    iters: int = 30
    tol: float = 1e-8
    expect_orthogonal: bool = False
    output: str | None = None
    fmt: str = "json"

    def to_dict(self):
        return {
            "command": self.command,
            "problem": self.problem.to_dict(),
            "split": self.split,
            "cfrac": self.cfrac,
            "norms": list(self.norms),
            "pairs": list(self.pairs),
            "pre": dict(vars(self.pre)),
            "post": dict(vars(self.post)),
            "iters": self.iters,
            "tol": self.tol,
            "expect_orthogonal": self.expect_orthogonal,
            "format": self.fmt,
        }


def _map_cases(fn, items):
    items = list(items)
    try:
        threads = int(os.environ.get("COMPATAMG_THREADS", "1") or "1")
    except ValueError:
        threads = 1
    if threads > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _canon_norm(tag):
    try:
        return NormSpec(tag).tag
    except ValueError as e:
        raise ConfigError(f"--norm: {e}") from e


def _problem_setup(cfg):
    A = generate(cfg.problem)
    part = default_splitting(
        A.shape[0], cfg.split, seed=cfg.problem.seed, cfrac=cfg.cfrac
    )
    return A, part


def _build_pair(A, part, recipe):
    """Resolve one --pair recipe to (name, pair_or_None, intrinsic_norm_or_None)."""
    r = recipe.strip()
    if r == "none":
        return r, None, None
    if r in _SINGLE_NAMES:
        pair, tag = single_operator_pair(A, part, r)
        return r, pair, tag
    if r.startswith(("t1:", "t2:")):
        bits = r.split(":")
        if len(bits) != 3:
            raise ConfigError(f"--pair: catalog recipe must be t1:<norm>:<q>, got {recipe!r}")
        anchor = "P" if bits[0] == "t1" else "R"
        try:
            pair = ideal_pair(A, part, bits[1], bits[2], anchor)
            tag = NormSpec(bits[1]).tag
        except ValueError as e:
            raise ConfigError(f"--pair {recipe!r}: {e}") from e
        return r, pair, tag
    if r.startswith("zw:"):
        paths = r[3:].split(",")
        if len(paths) != 2:
            raise ConfigError(f"--pair: file recipe must be zw:<zfile>,<wfile>, got {recipe!r}")
        for p in paths:
            if not Path(p).exists():
                raise ConfigError(f"--pair: file not found: {p}")
        Z, W = load_matrix(paths[0]), load_matrix(paths[1])
        return r, make_pair(part, Z, W), None
    if r.startswith("random:"):
        try:
            seed = int(r.split(":", 1)[1])
        except ValueError as e:
            raise ConfigError(f"--pair: random recipe needs an integer seed: {recipe!r}") from e
        rng = np.random.default_rng(seed)
        Z = rng.standard_normal((part.nf, part.nc))
        W = rng.standard_normal((part.nf, part.nc))
        return r, make_pair(part, Z, W), None
    raise ConfigError(f"--pair: unknown recipe {recipe!r}")


def _measure(A, pair, M, tol):
    pi, _ = build_pi(A, pair)
    checks = orthogonality_checks(pi, M, tol)
    return {
        "pi_norm": float(pi_m_norm(pi, M)),
        "nonorth_sup": float(nonorth_measure(pi, M)),
        "min_angle": float(min_canonical_angle(pi, M)),
        "compat_eq": bool(verify_compat_equation(A, M, pair)),
        "orthogonality_checks": checks.as_dict(),
    }


def cmd_verify_pairs(cfg):
    A, part = _problem_setup(cfg)
    if not cfg.pairs:
        raise ConfigError("--pair: at least one pair recipe is required")
    built = [_build_pair(A, part, r) for r in cfg.pairs]
    norms = [_canon_norm(t) for t in cfg.norms]

    cases = []
    for name, pair, intrinsic in built:
        if pair is None:
            raise ConfigError(f"--pair: recipe {name!r} builds no pair; not usable here")
        for tag in norms or [intrinsic or "identity"]:
            expected = cfg.expect_orthogonal or (intrinsic is not None and tag == intrinsic)
            cases.append((name, pair, tag, expected))

    def run(case):
        name, pair, tag, expected = case
        rec = {"pair": name, "norm": tag, "expected_orthogonal": expected}
        try:
            M = realize_norm(tag, A)
        except ValueError as e:
            rec.update(skipped=True, reason=str(e))
            if expected:
                rec["pass"] = False
            return rec
        rec.update(_measure(A, pair, M, cfg.tol))
        if expected:
            rec["pass"] = abs(rec["pi_norm"] - 1.0) <= cfg.tol
        return rec

    results = _map_cases(run, cases)
    failed = [r for r in results if r.get("pass") is False]
    return (1 if failed else 0), results, not failed


def cmd_figure1(cfg):
    A, part = _problem_setup(cfg)

    def run(edge):
        style, norm, r_q, p_q = edge
        rec = {
            "edge": f"R({r_q})-P({p_q})",
            "style": style,
            "r_q": r_q,
            "p_q": p_q,
            "norm": norm,
        }
        try:
            M = realize_norm(norm, A)
            Z = ideal_z(partition(realize_q(r_q, A), part))
            W = ideal_w(partition(realize_q(p_q, A), part))
            pair = make_pair(part, Z, W)
            pi, _ = build_pi(A, pair)
        except (ValueError, SingularMatrixError) as e:
            rec.update(skipped=True, reason=str(e))
            return rec
        rec["pi_norm"] = float(pi_m_norm(pi, M))
        rec["pass"] = abs(rec["pi_norm"] - 1.0) <= cfg.tol
        return rec

    results = _map_cases(run, FIGURE_EDGES)
    failed = [r for r in results if r.get("pass") is False]
    return (1 if failed else 0), results, not failed


def cmd_tables(cfg):
    A, part = _problem_setup(cfg)
    entries = catalog_pairs(A, part)

    def run(entry):
        rec = {
            "table": entry.table,
            "norm": entry.norm,
            "q": entry.q,
            "anchor": entry.anchor,
            "companion_expr": entry.companion_expr,
        }
        if entry.label:
            rec["label"] = entry.label
        if entry.skipped:
            rec.update(skipped=True, reason=entry.reason)
            return rec
        M = realize_norm(entry.norm, A)
        pi, _ = build_pi(A, entry.pair)
        rec["pi_norm"] = float(pi_m_norm(pi, M))
        rec["compat_eq"] = bool(verify_compat_equation(A, M, entry.pair))
        rec["pass"] = rec["compat_eq"] and abs(rec["pi_norm"] - 1.0) <= cfg.tol
        return rec

    results = _map_cases(run, entries)
    failed = [r for r in results if r.get("pass") is False]
    return (1 if failed else 0), results, not failed


def cmd_converge(cfg):
    A, part = _problem_setup(cfg)
    recipes = cfg.pairs or ["single1"]
    built = [_build_pair(A, part, r) for r in recipes]
    rng = np.random.default_rng(cfg.problem.seed)
    b = rng.standard_normal(A.shape[0])
    x0 = np.zeros(A.shape[0])

    def run(item):
        name, pair, _ = item
        spec = TwoGridSpec(pair=pair, pre=cfg.pre, post=cfg.post)
        E = two_grid_propagator(A, spec)
        rho = conv_factor(E)
        history = iterate(A, spec, b, x0, cfg.iters)
        return {
            "pair": name,
            "rho": float(rho),
            "observed_rate": float(observed_rate(history)),
            "divergent": bool(rho > 1.0),
            "history": [float(r) for r in history],
        }

    results = _map_cases(run, built)
    return 0, results, True


_COMMANDS = {
    "verify-pairs": cmd_verify_pairs,
    "figure1": cmd_figure1,
    "tables": cmd_tables,
    "converge": cmd_converge,
}


def _relax_from_recipe(text, flag):
    """Parse 'none' | '<kind>[:omega[:sweeps]]' into a RelaxSpec."""
    bits = str(text).split(":")
    kind = bits[0]
    try:
        omega = float(bits[1]) if len(bits) > 1 else 2.0 / 3.0
        sweeps = int(bits[2]) if len(bits) > 2 else 1
        return RelaxSpec(kind, omega=omega, sweeps=sweeps)
    except ValueError as e:
        raise ConfigError(f"{flag}: {e}") from e


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="compatamg",
        description="Construct, verify, and benchmark compatible transfer-operator pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("verify-pairs", "measure requested pairs in requested norms"),
        ("figure1", "verify the ten pairings of the ideal-operator symmetry diagram"),
        ("tables", "sweep and verify every computable catalog cell"),
        ("converge", "residual histories and convergence factors for two-grid methods"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--problem", default="advection1d", choices=PROBLEM_KINDS)
        p.add_argument("--n", type=int, default=32)
        p.add_argument("--nx", type=int, default=None)
        p.add_argument("--ny", type=int, default=None)
        p.add_argument("--epsilon", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--split", default="alternate", choices=("alternate", "firsthalf", "random"))
        p.add_argument("--cfrac", type=float, default=0.5)
        p.add_argument("--norm", action="append", default=[], metavar="TAG")
        p.add_argument("--pair", action="append", default=[], metavar="RECIPE")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--output", default=None, metavar="PATH")
        p.add_argument("--format", dest="fmt", default="json", choices=("json", "csv"))
        if name == "verify-pairs":
            p.add_argument("--expect-orthogonal", action="store_true")
        if name == "converge":
            p.add_argument("--pre", default="none", metavar="RECIPE")
            p.add_argument("--post", default="none", metavar="RECIPE")
            p.add_argument("--iters", type=int, default=30)
    return parser


def _config_from_args(args):
    kwargs = {"kind": args.problem, "epsilon": args.epsilon, "seed": args.seed}
    if args.problem == "advection2d":
        kwargs["nx"] = args.nx if args.nx is not None else args.n
        kwargs["ny"] = args.ny if args.ny is not None else args.n
    else:
        kwargs["n"] = args.n
    try:
        problem = ProblemSpec(**kwargs)
    except ValueError as e:
        raise ConfigError(f"--problem: {e}") from e
    return ExperimentConfig(
        command=args.command,
        problem=problem,
        split=args.split,
        cfrac=args.cfrac,
        norms=list(args.norm),
        pairs=list(args.pair),
        pre=_relax_from_recipe(getattr(args, "pre", "none"), "--pre"),
        post=_relax_from_recipe(getattr(args, "post", "none"), "--post"),
        iters=getattr(args, "iters", 30),
        tol=args.tol,
        expect_orthogonal=getattr(args, "expect_orthogonal", False),
        output=args.output,
        fmt=args.fmt,
    )


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _flatten(record):
    flat = {}
    for k, v in record.items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                flat[f"{k}.{kk}"] = vv
        elif isinstance(v, list):
            continue
        else:
            flat[k] = v
    return flat


def _report_csv(report):
    out = io.StringIO()
    if report["command"] == "converge":
        w = csv.writer(out)
        w.writerow(["pair", "iter", "residual"])
        for rec in report["results"]:
            for k, r in enumerate(rec["history"]):
                w.writerow([rec["pair"], k, f"{r:.17g}"])
        return out.getvalue()
    rows = [_flatten(rec) for rec in report["results"]]
    fields = []
    for row in rows:
        for k in row:
            if k not in fields:
                fields.append(k)
    w = csv.DictWriter(out, fieldnames=fields, restval="")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return out.getvalue()


def _write_report(report, cfg):
    if cfg.fmt == "json":
        text = json.dumps(report, indent=2, default=_json_default) + "\n"
    else:
        text = _report_csv(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code, results, passed = _COMMANDS[cfg.command](cfg)
    except ConfigError as e:
        print(f"compatamg: config error: {e}", file=sys.stderr)
        return 2
    except (SingularMatrixError, ValueError, FileNotFoundError) as e:
        print(f"compatamg: construction error: {e}", file=sys.stderr)
        return 2
    report = {
        "command": cfg.command,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "config": cfg.to_dict(),
        "passed": passed,
        "results": results,
    }
    _write_report(report, cfg)
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
