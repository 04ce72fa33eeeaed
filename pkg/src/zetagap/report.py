"""Serialization of bound-check reports and statistics tables.

CSV is one row per check; JSON is a flat list of objects.  Field order and
float formatting are fixed so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .counting import FAILS, BoundCheck

__all__ = ["BoundReportFile", "format_float", "write_rows_csv", "write_rows_json"]

_CSV_COLUMNS = ("bound_id", "T", "lhs", "rhs", "verdict", "margin", "params")


def format_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _params_str(params: dict) -> str:
    return ";".join(f"{k}={format_float(v)}" for k, v in sorted(params.items()))


@dataclass
class BoundReportFile:
    version: str
    config_hash: str
    t_cert: float
    entries: list[BoundCheck]

    @property
    def any_failures(self) -> bool:
        return any(e.verdict == FAILS for e in self.entries)

    def sorted_entries(self) -> list[BoundCheck]:
        return sorted(self.entries,
                      key=lambda e: (e.bound_id, e.T, _params_str(e.params)))

    def write_csv(self, path: str | Path) -> None:
        lines = [
            f"# zetagap {self.version}",
            f"# config_hash={self.config_hash}",
            f"# t_cert={format_float(self.t_cert)}",
            ",".join(_CSV_COLUMNS),
        ]
        for e in self.sorted_entries():
            lines.append(",".join([
                e.bound_id,
                format_float(e.T),
                format_float(e.lhs),
                format_float(e.rhs),
                e.verdict,
                format_float(e.margin),
                _params_str(e.params),
            ]))
        Path(path).write_text("\n".join(lines) + "\n")

    def write_json(self, path: str | Path) -> None:
        payload = {
            "version": self.version,
            "config_hash": self.config_hash,
            "t_cert": self.t_cert,
            "entries": [
                {
                    "bound_id": e.bound_id,
                    "T": e.T,
                    "lhs": _json_num(e.lhs),
                    "rhs": _json_num(e.rhs),
                    "verdict": e.verdict,
                    "margin": _json_num(e.margin),
                    "params": {k: _json_num(v) for k, v in sorted(e.params.items())},
                }
                for e in self.sorted_entries()
            ],
        }
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True,
                                         allow_nan=False) + "\n")


def _json_num(x):
    if x is None:
        return None
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            return repr(x)
        return x
    return x


def write_rows_csv(path: str | Path, header: list[str],
                   rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, (float, type(None)))
                              else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_rows_json(path: str | Path, rows: list[dict]) -> None:
    safe = [{k: _json_num(v) for k, v in sorted(r.items())} for r in rows]
    Path(path).write_text(json.dumps(safe, indent=2, sort_keys=True,
                                     allow_nan=False) + "\n")
