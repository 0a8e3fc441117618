"""Command-line harness: ``estimate``, ``bench``, ``characterize``, ``compare``.

Input is raw I420 (``--input`` with ``--width``/``--height``) or a seeded
synthetic ten-frame sequence (``--synthetic noise|mixed|flat``).  Frame ``k``
is always predicted from frame ``k - 1``.

Counts and bits are JSON integers; PSNR, averages, fractions and costs are
fixed-precision strings so outputs diff cleanly.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .acbm import ALGORITHMS, AcbmParams, Path, estimate_sequence
from .characterize import (SynthSpec, characterize_run, flat_frame, gen_synthetic, mixed_frame,
                           noise_frame, records_to_csv, summary_to_json)
from .frame_model import FrameError, count_raw_frames, load_raw_y
from .metrics import psnr_from_sse

BLOCK_COLUMNS = ("frame", "row", "col", "mv_x", "mv_y", "sad", "candidates")
PATH_COLUMNS = ("frame", "row", "col", "path", "intra_sad", "sad_pbm")
BENCH_COLUMNS = ("qp", "avg_candidates", "fallback_pct", "psnr_db", "mv_bits")
DEFAULT_QP_LIST = tuple(range(16, 31, 2))


def _fmt(value, digits=2):
    if value is None:
        return None
    return f"{float(value):.{digits}f}"


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def synthetic_base(kind: str, width: int, height: int, seed: int):
    if kind == "noise":
        return noise_frame(width, height, seed)
    if kind == "mixed":
        return mixed_frame(width, height, seed)
    if kind == "flat":
        return flat_frame(width, height)
    raise ValueError(f"unknown synthetic base {kind!r}")


def load_frames(args) -> list:
    if args.input:
        total = count_raw_frames(args.input, args.width, args.height)
        if args.frames:
            total = min(total, args.frames)
        if total < 1:
            raise FrameError(f"{args.input}: no complete frame of {args.width}x{args.height}")
        return [load_raw_y(args.input, args.width, args.height, k) for k in range(total)]
    base = synthetic_base(args.synthetic, args.width, args.height, args.seed)
    frames, _ = gen_synthetic(SynthSpec(base))
    return frames[:args.frames] if args.frames else frames


def params_from_args(args, qp=None) -> AcbmParams:
    return AcbmParams(alpha=args.alpha, beta=args.beta,
                      gamma=Fraction(args.gamma_num, args.gamma_den),
                      qp=args.qp if qp is None else qp, p=args.range, n=args.block, m=args.block)


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------

def _stats_dict(stats_list, algorithm):
    blocks = sum(s.blocks for s in stats_list)
    cand = sum(s.candidates for s in stats_list)
    iblocks = sum(s.interior_blocks for s in stats_list)
    icand = sum(s.interior_candidates for s in stats_list)
    sse = sum(s.sse for s in stats_list)
    samples = sum(s.samples for s in stats_list)
    out = {
        "blocks": blocks,
        "candidates": cand,
        "avg_candidates": _fmt(Fraction(cand, blocks)) if blocks else None,
        "interior_blocks": iblocks,
        "avg_candidates_interior": _fmt(Fraction(icand, iblocks)) if iblocks else None,
        "psnr_db": _fmt(psnr_from_sse(sse, samples)) if samples else None,
        "mv_bits": sum(s.mv_bits for s in stats_list),
        "total_cost": _fmt(sum((s.total_cost for s in stats_list), Fraction(0))),
    }
    if algorithm == "acbm":
        fallbacks = sum(s.fallbacks for s in stats_list)
        out["fallbacks"] = fallbacks
        out["fallback_fraction"] = _fmt(Fraction(fallbacks, blocks), 4) if blocks else None
        out["paths"] = {str(p): sum(s.path_counts.get(str(p), 0) for s in stats_list)
                        for p in Path}
    return out


def run_summary(results, algorithm: str, params: AcbmParams) -> dict:
    frames = []
    for k, res in enumerate(results, start=1):
        entry = {"frame": k}
        entry.update(_stats_dict([res.stats], algorithm))
        frames.append(entry)
    return {
        "algorithm": algorithm,
        "params": {"alpha": params.alpha, "beta": params.beta,
                   "gamma": str(params.gamma), "qp": params.qp, "p": params.p,
                   "block": params.n},
        "frames": frames,
        "total": _stats_dict([r.stats for r in results], algorithm),
    }


def blocks_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BLOCK_COLUMNS)
    for k, res in enumerate(results, start=1):
        for b in res.blocks:
            o = b.outcome
            writer.writerow([k, b.row, b.col, o.mv.x, o.mv.y, o.sad, o.candidates_evaluated])
    return buf.getvalue()


def paths_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PATH_COLUMNS)
    for k, res in enumerate(results, start=1):
        for b in res.blocks:
            d = b.decision
            writer.writerow([k, b.row, b.col, str(d.path), d.intra_sad, d.sad_pbm])
    return buf.getvalue()


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_estimate(args) -> int:
    frames = load_frames(args)
    params = params_from_args(args)
    results = list(estimate_sequence(frames, params, args.algo))
    summary = run_summary(results, args.algo, params)
    if args.out_blocks:
        _write(args.out_blocks, blocks_csv(results))
    if args.out_paths:
        if args.algo != "acbm":
            raise ValueError("--out-paths requires --algo acbm")
        _write(args.out_paths, paths_csv(results))
    _write(args.out_summary or "-", _dump_json(summary))
    return 0


def bench_rows(frames, args, qp_list) -> list:
    rows = []
    for qp in qp_list:
        params = params_from_args(args, qp)
        total = run_summary(list(estimate_sequence(frames, params, "acbm")), "acbm", params)["total"]
        frac = Fraction(total["fallbacks"], total["blocks"])
        rows.append([qp, total["avg_candidates"], _fmt(100 * frac), total["psnr_db"],
                     total["mv_bits"]])
    return rows


def cmd_bench(args) -> int:
    frames = load_frames(args)
    qp_list = args.qp_list or list(DEFAULT_QP_LIST)
    rows = bench_rows(frames, args, qp_list)
    by_qp = sorted(rows, key=lambda r: r[0], reverse=True)
    avg = [float(r[1]) for r in by_qp]
    if any(b < a for a, b in zip(avg, avg[1:])):
        print("warning: average candidates not monotone in qp on this input", file=sys.stderr)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(rows)
    _write(args.out_summary or "-", buf.getvalue())
    return 0


def cmd_characterize(args) -> int:
    if args.input:
        base = load_raw_y(args.input, args.width, args.height, 0)
    else:
        base = synthetic_base(args.synthetic, args.width, args.height, args.seed)
    records, summary = characterize_run(SynthSpec(base), p=args.range, n=args.block, m=args.block)
    if args.out_blocks:
        _write(args.out_blocks, records_to_csv(records))
    _write(args.out_summary or "-", summary_to_json(summary))
    return 0


def compare_report(frames, params) -> dict:
    report = {}
    for algo in ALGORITHMS:
        total = run_summary(list(estimate_sequence(frames, params, algo)), algo, params)["total"]
        report[algo] = {k: total[k] for k in ("avg_candidates", "psnr_db", "mv_bits", "total_cost")}
    return report


def format_compare(report) -> str:
    cols = ("avg_candidates", "psnr_db", "mv_bits", "total_cost")
    lines = [f"{'algorithm':<10}" + "".join(f"{c:>16}" for c in cols)]
    for algo, vals in report.items():
        lines.append(f"{algo:<10}" + "".join(f"{str(vals[c]):>16}" for c in cols))
    return "\n".join(lines) + "\n"


def cmd_compare(args) -> int:
    frames = load_frames(args)
    report = compare_report(frames, params_from_args(args))
    if args.out_summary:
        _write(args.out_summary, _dump_json(report))
    sys.stdout.write(format_compare(report))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, with_algo=False) -> None:
    src = p.add_argument_group("input")
    src.add_argument("--input", help="raw I420 file")
    src.add_argument("--synthetic", choices=("noise", "mixed", "flat"), default="noise",
                     help="synthetic base used when --input is absent (default: noise)")
    src.add_argument("--width", type=int, default=176)
    src.add_argument("--height", type=int, default=144)
    src.add_argument("--frames", type=int, default=0, help="frame count limit (0: all)")
    src.add_argument("--seed", type=int, default=0)
    me = p.add_argument_group("estimation")
    if with_algo:
        me.add_argument("--algo", choices=ALGORITHMS, default="acbm")
    me.add_argument("--qp", type=int, default=30)
    me.add_argument("--alpha", type=int, default=1000)
    me.add_argument("--beta", type=int, default=8)
    me.add_argument("--gamma-num", type=int, default=1)
    me.add_argument("--gamma-den", type=int, default=4)
    me.add_argument("--range", type=int, default=15, help="search range p")
    me.add_argument("--block", type=int, default=16, help="block size n = m")
    out = p.add_argument_group("output")
    out.add_argument("--out-blocks", help="per-block CSV path")
    out.add_argument("--out-summary", help="summary path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockmatch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="run one algorithm and write per-block results")
    _add_common(p, with_algo=True)
    p.add_argument("--out-paths", help="ACBM per-block gating path CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="ACBM cost per macroblock over a list of qp values")
    _add_common(p)
    p.add_argument("--qp-list", type=lambda s: [int(v) for v in s.split(",") if v],
                   help="comma-separated qp values (default: 16,18,...,30)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("characterize", help="known-motion FSBM characterization")
    _add_common(p)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("compare", help="FSBM, PBM and ACBM side by side")
    _add_common(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.gamma_den <= 0:
        parser.error("--gamma-den must be positive")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"blockmatch: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
