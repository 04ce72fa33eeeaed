"""Command-line surface.

    zetagap compute --tmax 1000 --out runs/demo
    zetagap stats   --tmax 1000 --out runs/demo --k 0 --k 1 --k 2
    zetagap bounds  --tmax 1000 --out runs/demo --format json
    zetagap gue     --tmax 1000 --out runs/demo --quad-order 64

compute scans, refines and certifies a zero table and persists it;
the other commands consume the persisted table.  Reports are CSV or JSON
plus rendered figures.  Exit codes: 0 ok, 1 a verdict-bearing bound
failed, 2 certification failed, 3 configuration or I/O trouble.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, counting, gue, plots, store, zeros
from .gaps import (extremes, extremes_checks, gaps as gap_sequence,
                   large_gap_checks, moment_bound_checks, moment_sum,
                   reciprocal_checks, reciprocal_sum, telescoping_check)
from .counting import REPORT_ONLY, BoundCheck
from .errors import CertificationError, ConfigError, ZetaGapError
from .report import BoundReportFile, format_float, write_rows_csv, write_rows_json

__all__ = ["RunConfig", "main", "cmd_compute", "cmd_stats", "cmd_bounds", "cmd_gue"]

_SCAN_MARGIN = 6.0       # scan past t_max so certification always has cover
_DEFAULT_K = (0.0, 1.0, 2.0, 3.0, 4.0)
_DEFAULT_C = (1.0, math.pi, 2.0 * math.pi, 4.0 * math.pi)


@dataclass
class RunConfig:
    t_max: float = 1000.0
    tol: float = zeros.DEFAULT_TOL
    k_list: tuple = _DEFAULT_K
    c_list: tuple = _DEFAULT_C
    assume_rh: bool = True
    source: store.TableSource | None = None
    output_dir: Path = Path("zetagap-out")
    format: str = "csv"
    quad_order: int = gue.DEFAULT_ORDER
    bins: int = 30
    index_offset: int = 0
    cache_dir: Path = Path(".zetagap-cache")
    explicit_gap_min_height: float | None = None
    n_heights: int = 10
    _extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t_max < 100:
            raise ConfigError("t_max must be >= 100")
        if not (1e-12 <= self.tol <= 1e-6):
            raise ConfigError("tol must lie in [1e-12, 1e-6]")
        if any(c <= 0 for c in self.c_list):
            raise ConfigError("every C must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.bins < 20:
            raise ConfigError("bins must be >= 20")
        if self.quad_order < gue.MIN_ORDER:
            raise ConfigError(f"quad_order must be >= {gue.MIN_ORDER}")
        env_cache = os.environ.get("ZETAGAP_CACHE_DIR")
        if env_cache:
            self.cache_dir = Path(env_cache)
        self.output_dir = Path(self.output_dir)

    def config_hash(self) -> str:
        payload = {
            "t_max": self.t_max, "tol": self.tol,
            "k_list": list(self.k_list), "c_list": list(self.c_list),
            "assume_rh": self.assume_rh, "format": self.format,
            "quad_order": self.quad_order, "bins": self.bins,
            "index_offset": self.index_offset,
            "explicit_gap_min_height": self.explicit_gap_min_height,
            "source": None if self.source is None else
                [self.source.kind, self.source.location, self.source.format],
        }
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def compute_key(self) -> str:
        blob = json.dumps({"t_max": self.t_max, "tol": self.tol}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    @property
    def zeros_path(self) -> Path:
        return self.output_dir / f"zeros_t{self.t_max:g}.csv"


# ---------------------------------------------------------------------------
# compute

def compute_table(t_max: float, tol: float = zeros.DEFAULT_TOL) -> zeros.ZeroTable:
    """Scan, refine and certify [0, t_max]; one re-scan on a failed window."""
    brackets = zeros.scan_zeros(10.0, t_max + _SCAN_MARGIN)
    table = zeros.build_table(brackets, tol)
    try:
        zeros.turing_certify(table, t_max)
    except CertificationError as exc:
        if exc.window is None:
            raise
        lo = max(10.0, exc.window[0] - 2.0)
        hi = min(t_max + _SCAN_MARGIN, exc.window[1] + 2.0)
        extra = zeros.scan_zeros(lo, hi, base_subdiv=32)
        merged = _merge_brackets(brackets, extra)
        table = zeros.build_table(merged, tol)
        zeros.turing_certify(table, t_max)
    return table


def _merge_brackets(base, extra):
    keep = [b for b in base]
    for e in extra:
        if not any(not (e.hi <= b.lo or e.lo >= b.hi) for b in keep):
            keep.append(e)
    # replace coarse brackets fully covered by finer ones from the re-scan
    out = []
    for b in keep:
        finer = [e for e in extra if e.lo >= b.lo and e.hi <= b.hi]
        out.extend(finer if finer else [b])
    return sorted(set(out), key=lambda br: br.lo)


def load_table(config: RunConfig) -> zeros.ZeroTable:
    """The table named by the config: explicit source, else the computed file."""
    if config.source is not None:
        return store.import_zeros(config.source, config.index_offset,
                                  config.cache_dir)
    path = config.zeros_path
    if not path.exists():
        raise ConfigError(f"no zero table at {path}; run 'zetagap compute' first")
    return store.import_zeros(
        store.TableSource("local_file", str(path), "internal_csv"))


def cmd_compute(config: RunConfig) -> zeros.ZeroTable:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    path = config.zeros_path
    meta_path = path.with_suffix(".csv.meta")
    if path.exists() and meta_path.exists():
        meta = json.loads(meta_path.read_text())
        if meta.get("compute_key") == config.compute_key():
            table = store.import_zeros(
                store.TableSource("local_file", str(path), "internal_csv"))
            if table.t_cert >= config.t_max:
                return table        # warm cache: identical file, no recompute
    table = compute_table(config.t_max, config.tol)
    store.export_table(table, path)
    meta_path.write_text(json.dumps(
        {"compute_key": config.compute_key(), "t_max": config.t_max,
         "tol": config.tol, "count": len(table)}, sort_keys=True) + "\n")
    return table


# ---------------------------------------------------------------------------
# stats

def cmd_stats(config: RunConfig) -> dict:
    table = load_table(config)
    T = min(config.t_max, table.t_cert)
    if T < config.t_max:
        raise ConfigError(f"table certified only to {table.t_cert:g}, "
                          f"below requested t_max {config.t_max:g}")
    moment_rows = []
    for k in config.k_list:
        rep = moment_sum(table, float(k), T)
        window = rep.fujii_window or (None, None)
        moment_rows.append({
            "k": float(k), "T": T, "s_k": rep.s_k,
            "normalized_ratio": rep.normalized_ratio,
            "gue_prediction": rep.gue_prediction,
            "fujii_c1_emp": window[0], "fujii_c2_emp": window[1],
        })
    rec = reciprocal_sum(table, T)
    proxy, ext = extremes(table, T)
    reciprocal_row = {
        "T": T, "h_value": rec.h_value, "r_value": rec.r_value,
        "bound_6_4": rec.bound_6_4, "max_reciprocal": rec.max_reciprocal,
        "min_gap": rec.min_gap,
    }
    extremes_row = {
        "T": T, "mu_emp": proxy.mu_emp, "lambda_emp": proxy.lambda_emp,
        "argmin_index": proxy.argmin_index, "argmax_index": proxy.argmax_index,
        "max_gap": ext.max_gap, "min_gap": ext.min_gap,
        "max_gap_index": ext.argmax_index, "min_gap_index": ext.argmin_index,
    }
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    if config.format == "csv":
        write_rows_csv(out / "stats_moments.csv",
                       list(moment_rows[0]), [list(r.values()) for r in moment_rows])
        write_rows_csv(out / "stats_reciprocal.csv",
                       list(reciprocal_row), [list(reciprocal_row.values())])
        write_rows_csv(out / "stats_extremes.csv",
                       list(extremes_row), [list(extremes_row.values())])
    else:
        write_rows_json(out / "stats_moments.json", moment_rows)
        write_rows_json(out / "stats_reciprocal.json", [reciprocal_row])
        write_rows_json(out / "stats_extremes.json", [extremes_row])
    return {"moments": moment_rows, "reciprocal": reciprocal_row,
            "extremes": extremes_row}


# ---------------------------------------------------------------------------
# bounds

def _skipped(bound_id: str, T: float) -> BoundCheck:
    return BoundCheck(bound_id, T, 0.0, None, REPORT_ONLY,
                      {"skipped": "conditional-on-RH"})


def collect_bound_checks(table: zeros.ZeroTable, config: RunConfig,
                         heights: np.ndarray | None = None) -> list[BoundCheck]:
    if heights is None:
        heights = np.geomspace(100.0, config.t_max, config.n_heights)
        heights[-1] = config.t_max
    # GUE constants feed the report-only lower-bound form at every height
    c1_2 = gue.c1_cached(2.0, config.quad_order)
    c1_4 = gue.c1_cached(4.0, config.quad_order)
    checks: list[BoundCheck] = []
    for T in heights:
        T = float(T)
        # count consistency: a table missing (or inventing) a zero fails here
        s_val = counting.s_of_T(T)
        located = float(table.count_upto(T))
        raw = counting.n_main(T) + s_val
        checks.append(BoundCheck.decide(
            "1.3-count", T, abs(located - raw), 0.5,
            located=located, formula=raw))
        checks.extend(counting.check_S_bounds(T, config.assume_rh,
                                              s_value=s_val))
        if not config.assume_rh:
            checks.extend([_skipped("2.2", T), _skipped("4.8", T)])
        checks.append(telescoping_check(table, T))
        checks.extend(moment_bound_checks(table, T, config.assume_rh))
        checks.extend(reciprocal_checks(table, T))
        checks.extend(extremes_checks(
            table, T, config.explicit_gap_min_height))
        for C in config.c_list:
            checks.extend(large_gap_checks(
                table, float(C), T, config.assume_rh,
                gue_c1_2=c1_2, gue_c1_4=c1_4))
            if not config.assume_rh:
                checks.append(_skipped("4.9", T))
    return checks


def cmd_bounds(config: RunConfig) -> BoundReportFile:
    table = load_table(config)
    if table.t_cert < config.t_max:
        raise ConfigError(f"table certified only to {table.t_cert:g}, "
                          f"below requested t_max {config.t_max:g}")
    checks = collect_bound_checks(table, config)
    rep = BoundReportFile(version=__version__,
                          config_hash=config.config_hash(),
                          t_cert=table.t_cert, entries=checks)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    if config.format == "csv":
        rep.write_csv(out / "bounds.csv")
    else:
        rep.write_json(out / "bounds.json")
    plots.render_bound_margins(checks, out / "bounds_margins.png")
    return rep


# ---------------------------------------------------------------------------
# gue

def cmd_gue(config: RunConfig) -> dict:
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    order = config.quad_order

    gaudin = gue.build_gaudin_table(order=order)
    write_rows_csv(out / "gue_gaudin.csv", ["u", "E", "p"],
                   [[float(u), float(e), float(p)] for u, e, p in
                    zip(gaudin.u_grid, gaudin.e_values, gaudin.p_values)])
    plots.render_gaudin_figure(gaudin, out / "gue_gaudin.png")

    c1_rows = []
    for k in sorted({float(k) for k in (*config.k_list, 0.0, 1.0, 2.0, 4.0)}):
        if k <= -1:
            continue
        c1_rows.append({"k": k, "c1": gue.c1(k, tol=1e-4, order=order)})
    write_rows_csv(out / "gue_c1.csv", ["k", "c1"],
                   [[r["k"], r["c1"]] for r in c1_rows])

    result = {"c1": c1_rows, "comparison": None}

    # comparison half needs a certified table; pure-GUE half already done
    try:
        table = load_table(config)
    except ConfigError:
        table = None
    if table is not None and table.t_cert >= config.t_max:
        T = config.t_max
        n_of_t = float(table.count_upto(T))
        pred_rows = []
        for k in config.k_list:
            if k < 0:
                continue
            p = gue.predicted_moment(float(k), T, n_of_t=n_of_t, order=order)
            measured = moment_sum(table, float(k), T,
                                       with_prediction=False,
                                       window_samples=0).s_k
            pred_rows.append({
                "k": float(k), "T": T, "c1_k": p.c1_k,
                "predicted_direct": p.predicted_s_k,
                "predicted_count_form": p.predicted_s_k_count_form,
                "measured": measured,
                "measured_over_predicted": measured / p.predicted_s_k,
                "max_gap_prediction": p.max_gap_prediction,
                "dm_shape": p.dm_shape,
            })
        seq = gap_sequence(table, T)
        comparison = gue.compare_histogram(seq.normalized, config.bins, order)
        hist_rows = [
            {"bin_lo": float(comparison.bin_edges[i]),
             "bin_hi": float(comparison.bin_edges[i + 1]),
             "empirical": float(comparison.empirical[i]),
             "predicted": float(comparison.predicted[i])}
            for i in range(len(comparison.empirical))
        ]
        summary = {
            "T": T, "n_samples": comparison.n_samples,
            "ks_distance": comparison.ks_distance,
            "chi_square": comparison.chi_square,
            **comparison.small_u_ratio,
        }
        if config.format == "csv":
            write_rows_csv(out / "gue_predictions.csv", list(pred_rows[0]),
                           [list(r.values()) for r in pred_rows])
            write_rows_csv(out / "gue_histogram.csv", list(hist_rows[0]),
                           [list(r.values()) for r in hist_rows])
            write_rows_csv(out / "gue_comparison.csv", list(summary),
                           [list(summary.values())])
        else:
            write_rows_json(out / "gue_predictions.json", pred_rows)
            write_rows_json(out / "gue_histogram.json", hist_rows)
            write_rows_json(out / "gue_comparison.json", [summary])
        plots.render_spacing_histogram(comparison, out / "gue_spacings.png")
        result["comparison"] = summary
        result["predictions"] = pred_rows
    return result


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--tmax", type=float, default=1000.0)
    p.add_argument("--tol", type=float, default=zeros.DEFAULT_TOL)
    p.add_argument("--k", type=float, action="append", default=None,
                   help="moment exponent; repeatable")
    p.add_argument("--C", type=float, action="append", default=None, dest="C",
                   help="large-gap constant; repeatable")
    p.add_argument("--assume-rh", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--source", type=str, default=None,
                   help="zero table: path or http(s) url")
    p.add_argument("--source-format", type=str, default="auto",
                   choices=("auto", "plain_ordinates", "internal_csv"))
    p.add_argument("--index-offset", type=int, default=0)
    p.add_argument("--out", type=str, default="zetagap-out")
    p.add_argument("--format", type=str, default="csv", choices=("csv", "json"))
    p.add_argument("--quad-order", type=int, default=gue.DEFAULT_ORDER)
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--cache-dir", type=str, default=".zetagap-cache")
    p.add_argument("--explicit-gap-min-height", type=float, default=None,
                   help="assert the 1.414 gap bound above this height "
                        "(default: report only)")


def _source_from_args(args) -> store.TableSource | None:
    if args.source is None:
        return None
    kind = "remote_url" if args.source.startswith(("http://", "https://")) \
        else "local_file"
    fmt = args.source_format
    if fmt == "auto":
        fmt = "internal_csv" if args.source.endswith(".csv") else "plain_ordinates"
    return store.TableSource(kind, args.source, fmt)


def config_from_args(args) -> RunConfig:
    return RunConfig(
        t_max=args.tmax,
        tol=args.tol,
        k_list=tuple(args.k) if args.k else _DEFAULT_K,
        c_list=tuple(args.C) if args.C else _DEFAULT_C,
        assume_rh=args.assume_rh,
        source=_source_from_args(args),
        output_dir=Path(args.out),
        format=args.format,
        quad_order=args.quad_order,
        bins=args.bins,
        index_offset=args.index_offset,
        cache_dir=Path(args.cache_dir),
        explicit_gap_min_height=args.explicit_gap_min_height,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetagap",
        description="zeta-zero gaps: computation, statistics, bound checks, "
                    "GUE comparison")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("compute", "scan, refine and certify a zero table"),
        ("stats", "gap moment / reciprocal / extreme statistics"),
        ("bounds", "evaluate every explicit inequality; exit 1 on failure"),
        ("gue", "Gaudin density, moments, spacing comparison"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.command == "compute":
            table = cmd_compute(config)
            print(f"computed {len(table)} zeros, certified to "
                  f"{format_float(table.t_cert)} -> {config.zeros_path}")
            return 0
        if args.command == "stats":
            cmd_stats(config)
            print(f"stats written to {config.output_dir}")
            return 0
        if args.command == "bounds":
            rep = cmd_bounds(config)
            n_fail = sum(e.verdict == "fails" for e in rep.entries)
            print(f"{len(rep.entries)} checks, {n_fail} failures "
                  f"-> {config.output_dir}")
            return 1 if rep.any_failures else 0
        if args.command == "gue":
            cmd_gue(config)
            print(f"gue outputs written to {config.output_dir}")
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ZetaGapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
