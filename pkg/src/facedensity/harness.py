"""Command line front end.

    facedensity thresholds --k-max 8
    facedensity estimate --d 20 --k 1 --c 0.5 --trials 20 --subsets 40
    facedensity sweep --d 20 --k 1 --grid 0.3,0.5,0.7 --out sweep.csv
    facedensity --from-manifest sweep.csv.manifest.json
    facedensity shallow --r 3 --m 1,2,4,8
    facedensity exact --instance cut-k4 --k 2

Exit codes: 0 ok, 1 manifest checksum mismatch, 2 bad arguments,
3 infeasible configuration, 4 limit exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

import mpmath

from . import __version__
from .cube import CubePoint
from .density import (
    EXACT_LIMIT,
    EventKind,
    estimate_event,
    estimate_spanning_event,
    face_list,
)
from .entropy import capital_h, threshold_table
from .errors import InfeasibleConfig, LimitExceeded
from .instances import NAMED, named
from .linalg import affine_rank
from .oracle import FaceLattice
from .sampler import SeededStream, sample_model1
from .shallowcut import (
    ENUM_LIMIT,
    build_instance,
    count_solutions,
    gradient_check,
    log2_count_rate,
)

SCHEMA_VERSION = 1
CSV_HEADER = "schema_version,d,k,n,c,event,trials,subsets,estimate,ci_low,ci_high,seed,status"
EXIT_MISMATCH, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_LIMIT = 1, 2, 3, 4


class UsageError(Exception):
    pass


def _num(x: float) -> str:
    return format(x, ".12g")


# ------------------------------------------------------------------ config


@dataclass
class SweepConfig:
    k: int = 1
    d: int = 20
    grid: list[float] = field(default_factory=list)
    trials: int = 20
    subsets: int = 40
    seed: int = 0
    events: list[str] = field(default_factory=lambda: [e.value for e in EventKind])
    out: str | None = None

    def validate(self) -> None:
        if self.k < 1 or self.d < 1:
            raise UsageError("k and d must be positive")
        if self.trials < 1 or self.subsets < 1:
            raise UsageError("trials and subsets must be positive")
        for e in self.events:
            if e not in EventKind.__members__:
                raise UsageError(f"unknown event {e!r}")


def _split(text) -> list[str]:
    if isinstance(text, list):
        return text
    return [t.strip() for t in str(text).split(",") if t.strip()]


def read_config(path: str) -> dict:
    """``key = value`` lines with ``#`` comments."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    parser.optionxform = str
    text = Path(path).read_text(encoding="utf-8")
    parser.read_string("[run]\n" + text)
    return dict(parser["run"])


def sweep_config(values: dict) -> SweepConfig:
    cfg = SweepConfig()
    conv = {
        "k": int,
        "d": int,
        "trials": int,
        "subsets": int,
        "seed": int,
        "out": str,
        "grid": lambda v: [float(x) for x in _split(v)],
        "events": lambda v: [x.upper() for x in _split(v)],
    }
    for key, value in values.items():
        if value is None:
            continue
        if key not in conv:
            raise UsageError(f"unknown config key {key!r}")
        try:
            setattr(cfg, key, conv[key](value))
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {value!r}") from exc
    cfg.validate()
    return cfg


def n_from_c(c: float, d: int, k: int) -> tuple[int, str]:
    """n = round(2^(c d)) clamped to [k+2, 2^d]; status records clamping."""
    if not 0 < c < 1:
        return 0, "SKIPPED"
    n = round(2 ** (c * d))
    lo, hi = k + 2, 2**d
    if n < lo:
        return lo, "CLAMPED"
    if n > hi:
        return hi, "CLAMPED"
    return n, "OK"


# ------------------------------------------------------------------ sweep


def _row(d, k, n, c, event, trials, subsets, est, seed, status) -> str:
    if est is None:
        vals = ["", "", ""]
    else:
        vals = [_num(est.estimate), _num(est.ci_low), _num(est.ci_high)]
    c_text = "" if c is None else _num(c)
    return ",".join(
        [str(SCHEMA_VERSION), str(d), str(k), str(n), c_text, event, str(trials), str(subsets)]
        + vals
        + [str(seed), status]
    )


def run_sweep(cfg: SweepConfig, workers: int) -> tuple[str, list[dict], list[tuple]]:
    """CSV text, per-cell stream ranges, and (event, c, estimate) points for plotting."""
    lines = [CSV_HEADER]
    cells, points = [], []
    for ci, c in enumerate(cfg.grid):
        n, status = n_from_c(c, cfg.d, cfg.k)
        # both events of one c share streams, so they see the same W and subsets
        first = ci * cfg.trials
        for event in cfg.events:
            cell = {"c": c, "event": event, "n": n, "streams": [first, first + cfg.trials - 1]}
            if status == "SKIPPED":
                lines.append(_row(cfg.d, cfg.k, n, c, event, cfg.trials, cfg.subsets, None, cfg.seed, status))
                cell["streams"] = []
                cells.append(cell)
                continue
            est = estimate_event(
                cfg.d, n, cfg.k, event, cfg.trials, cfg.subsets, cfg.seed, first_stream=first, workers=workers
            )
            lines.append(_row(cfg.d, cfg.k, n, c, event, cfg.trials, cfg.subsets, est, cfg.seed, status))
            cells.append(cell)
            points.append((event, c, est.estimate))
    return "\n".join(lines) + "\n", cells, points


def checksum(body: str) -> str:
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


def write_manifest(path: Path, cfg: SweepConfig, cells, body: str, seconds: float) -> None:
    manifest = {
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": asdict(cfg),
        "seed": cfg.seed,
        "cells": cells,
        "wall_clock_seconds": round(seconds, 3),
        "csv_sha256": checksum(body),
    }
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def svg_plot(points: list[tuple], path: Path) -> None:
    """Estimate against c, one polyline per event."""
    W, H, pad = 480, 320, 40
    colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
        f'<rect x="{pad}" y="{pad}" width="{W - 2 * pad}" height="{H - 2 * pad}" fill="none" stroke="#888"/>',
    ]
    events = sorted({p[0] for p in points})
    for i, event in enumerate(events):
        pts = sorted((c, e) for ev, c, e in points if ev == event)
        coords = " ".join(
            f"{pad + c * (W - 2 * pad):.1f},{H - pad - e * (H - 2 * pad):.1f}" for c, e in pts
        )
        colour = colours[i % len(colours)]
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{colour}" stroke-width="2"/>')
        parts.append(f'<text x="{pad + 5}" y="{pad + 15 * (i + 1)}" fill="{colour}" font-size="12">{event}</text>')
    parts.append(f'<text x="{W / 2}" y="{H - 10}" font-size="12" text-anchor="middle">c (n = 2^(c d))</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")


# ------------------------------------------------------------------ commands


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_thresholds(args) -> int:
    if args.k_max < 1:
        raise UsageError("--k-max must be at least 1")
    lines = ["k,H_k_plus_1,tau_k"]
    for row in threshold_table(args.k_max):
        lines.append(f"{row.k},{mpmath.nstr(row.H_r, 12)},{mpmath.nstr(row.tau_k, 12)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_estimate(args) -> int:
    if args.n is None and args.c is None:
        raise UsageError("give --n or --c")
    if args.branch is not None:
        n = args.n if args.n is not None else max(args.r + 1, round(2 ** (args.c * args.d)))
        est = estimate_spanning_event(
            args.d, n, args.r, args.branch, args.trials, args.seed, workers=args.workers
        )
        lines = [CSV_HEADER, _row(args.d, args.r - 1, n, args.c, est.event, args.trials, 1, est, args.seed, "OK")]
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    if args.n is not None:
        n, status = args.n, "OK"
    else:
        n, status = n_from_c(args.c, args.d, args.k)
        if status == "SKIPPED":
            raise InfeasibleConfig(f"c = {args.c} is outside (0, 1)")
    events = [e.value for e in EventKind] if args.event == "BOTH" else [args.event]
    lines = [CSV_HEADER]
    for event in events:
        est = estimate_event(
            args.d, n, args.k, event, args.trials, args.subsets, args.seed,
            workers=args.workers, exhaustive=args.exhaustive, bootstrap=args.bootstrap,
        )
        lines.append(_row(args.d, args.k, n, args.c, event, args.trials, est.subsets, est, args.seed, status))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _sweep_and_write(cfg: SweepConfig, workers: int, svg: str | None, manifest: str | None) -> str:
    start = time.perf_counter()
    body, cells, points = run_sweep(cfg, workers)
    _emit(body, cfg.out)
    target = manifest or (cfg.out + ".manifest.json" if cfg.out else None)
    if target:
        write_manifest(Path(target), cfg, cells, body, time.perf_counter() - start)
    if svg:
        svg_plot(points, Path(svg))
    return body


def cmd_sweep(args) -> int:
    values = read_config(args.config) if args.config else {}
    cli = {
        "k": args.k, "d": args.d, "grid": args.grid, "trials": args.trials,
        "subsets": args.subsets, "events": args.events, "out": args.out,
    }
    if args.seed_given:
        cli["seed"] = args.seed
    values.update({key: v for key, v in cli.items() if v is not None})
    cfg = sweep_config(values)
    _sweep_and_write(cfg, args.workers, args.svg, args.manifest)
    return 0


def cmd_from_manifest(args) -> int:
    try:
        manifest = json.loads(Path(args.from_manifest).read_text(encoding="utf-8"))
        values = dict(manifest["config"])
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read manifest: {exc}") from exc
    if args.out:
        values["out"] = args.out
    cfg = sweep_config(values)
    start = time.perf_counter()
    body, cells, points = run_sweep(cfg, args.workers)
    _emit(body, cfg.out)
    if args.svg:
        svg_plot(points, Path(args.svg))
    if checksum(body) != manifest.get("csv_sha256"):
        print("checksum mismatch: CSV body differs from the manifest", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"reproduced {len(cells)} cells in {time.perf_counter() - start:.1f}s, checksum ok", file=sys.stderr)
    return 0


def cmd_shallow(args) -> int:
    if args.r < 3:
        raise UsageError("shallow cuts need r >= 3")
    lines = ["r,m,M,count,log2_count_over_M,H_r,gradient_error"]
    H = mpmath.nstr(capital_h(args.r), 12)
    for m in args.m:
        if m < 1:
            raise UsageError("m must be positive")
        inst = build_instance(args.r, m)
        count = count_solutions(inst, limit=args.limit, workers=args.workers)
        err = gradient_check(inst)
        lines.append(f"{args.r},{m},{inst.M},{count},{_num(log2_count_rate(count, inst))},{H},{err:.3e}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def exact_report(W, k: int, limit: int = EXACT_LIMIT) -> dict:
    dim = affine_rank(W) - 1
    if not 1 <= k < dim:
        raise InfeasibleConfig(f"need 1 <= k < dim conv W = {dim}")
    if len(W) > limit:
        raise LimitExceeded(f"|W| = {len(W)} exceeds the exhaustive limit {limit}")
    n = len(W)
    f, phi, faces = {}, {}, {}
    for j in range(k + 1):
        fl = face_list(W, j, limit)
        f[j] = len(fl)
        phi[j] = Fraction(len(fl), comb(n, j + 1))
        faces[j] = [list(F) for F in fl]
    lattice = FaceLattice(W)
    agree = all(lattice.faces_of_dim(j) == [tuple(F) for F in faces[j]] for j in range(k + 1))
    return {
        "d": int(W.shape[1]),
        "n": n,
        "k": k,
        "dim": dim,
        "points": [CubePoint.from_coords(row.tolist()).to_hex() for row in W],
        "f": {str(j): f[j] for j in f},
        "phi": {str(j): f"{phi[j].numerator}/{phi[j].denominator}" for j in phi},
        "faces": {str(j): faces[j] for j in faces},
        "oracle": "agree" if agree else "DISAGREE",
    }


def cmd_exact(args) -> int:
    if args.instance:
        W = named(args.instance)
        source = {"instance": args.instance}
    else:
        if args.d is None or args.n is None:
            raise UsageError("give --instance or both --d and --n")
        if args.n > args.limit:
            raise LimitExceeded(f"n = {args.n} exceeds the exhaustive limit {args.limit}")
        if args.d < 63 and args.n > 2**args.d:
            raise InfeasibleConfig(f"n = {args.n} exceeds 2^{args.d}")
        W = sample_model1(args.d, args.n, SeededStream(args.seed, 0))
        source = {"seed": args.seed}
    report = {**source, **exact_report(W, args.k, args.limit)}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["oracle"] == "agree" else EXIT_MISMATCH


# ------------------------------------------------------------------ parser


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=_seed, default=default(None), help="master seed (default 0)")
    p.add_argument("--workers", type=int, default=default(1), help="worker processes")
    p.add_argument("--out", default=default(None), help="output file (default stdout)")
    p.add_argument("--config", default=default(None), help="key = value file for sweep")
    p.add_argument("--from-manifest", default=default(None), help="re-run a sweep from its manifest")
    p.add_argument("--svg", default=default(None), help="write an SVG plot of a sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facedensity", description="Face densities of random 0/1-polytopes.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("thresholds", help="table of H_{k+1} and tau_k")
    _global_options(p, suppress=True)
    p.add_argument("--k-max", type=int, default=8)

    p = sub.add_parser("estimate", help="one Monte Carlo estimate")
    _global_options(p, suppress=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--c", type=float)
    p.add_argument("--event", type=str.upper, default="BOTH", choices=["FACE_LOWER", "AFF_UPPER", "BOTH"])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--subsets", type=int, default=40)
    p.add_argument("--exhaustive", action="store_true", help="use every (k+1)-subset of W")
    p.add_argument("--bootstrap", action="store_true", help="block bootstrap interval over trials")
    p.add_argument("--branch", type=int, choices=[1, 2], help="spanning-case event instead")
    p.add_argument("--r", type=int, default=3, help="|S| for --branch")

    p = sub.add_parser("sweep", help="estimates over a grid of c with n = 2^(c d)")
    _global_options(p, suppress=True)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--grid", type=_float_list)
    p.add_argument("--trials", type=int)
    p.add_argument("--subsets", type=int)
    p.add_argument("--events", type=lambda s: [e.upper() for e in _split(s)])
    p.add_argument("--manifest", help="manifest path (default <out>.manifest.json)")

    p = sub.add_parser("shallow", help="exact shallow-cut counts")
    _global_options(p, suppress=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--m", type=_int_list, default=[1, 2, 4, 8])
    p.add_argument("--limit", type=int, default=ENUM_LIMIT)

    p = sub.add_parser("exact", help="exact f-vector of a small instance")
    _global_options(p, suppress=True)
    p.add_argument("--instance", choices=sorted(NAMED))
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--limit", type=int, default=EXACT_LIMIT)
    return parser


COMMANDS = {
    "thresholds": cmd_thresholds,
    "estimate": cmd_estimate,
    "sweep": cmd_sweep,
    "shallow": cmd_shallow,
    "exact": cmd_exact,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = 0
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        if args.from_manifest:
            return cmd_from_manifest(args)
        if args.command is None:
            parser.error("a subcommand is required")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"facedensity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleConfig as exc:
        print(f"facedensity: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except LimitExceeded as exc:
        print(f"facedensity: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
