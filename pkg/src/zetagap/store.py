"""Zero-table persistence: plain published ordinate lists, our own CSV
format, and cached HTTP fetch of remote tables.

plain_ordinates: one decimal ordinate per line, strictly ascending, '#'
lines ignored.  Each record's error radius is 10^-(d-1) for d digits after
the decimal point on its line (published tables round their last digit, so
the true value sits within one ulp of the printed one; a full extra digit
of slack keeps the radius honest).

internal_csv: header comments carrying t_cert and the certification
discrepancy, then index,ordinate,err_radius,source,sign_change_verified
with ordinates at 17 significant digits so the round trip is bit exact.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyTableError, TableFormatError
from .zeros import ZeroRecord, ZeroTable

__all__ = ["TableSource", "import_zeros", "export_table", "fetch_to_cache"]

_FETCH_ATTEMPTS = 3


@dataclass(frozen=True)
class TableSource:
    kind: str                    # local_file | remote_url | computed
    location: str
    format: str = "plain_ordinates"   # plain_ordinates | internal_csv

    def __post_init__(self):
        if self.kind not in ("local_file", "remote_url", "computed"):
            raise TableFormatError(f"unknown source kind {self.kind!r}")
        if self.format not in ("plain_ordinates", "internal_csv"):
            raise TableFormatError(f"unknown table format {self.format!r}")
        if self.kind in ("local_file", "remote_url") and not self.location:
            raise TableFormatError("file/url sources need a non-empty location")


def fetch_to_cache(url: str, cache_dir: str | Path) -> Path:
    """Download url into cache_dir (keyed by URL hash); at most 3 attempts."""
    import requests  # local import: only the remote path needs it

    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    name = hashlib.sha256(url.encode()).hexdigest()[:16] + ".zeros"
    target = cache_dir / name
    if target.exists():
        return target
    last_exc = None
    for attempt in range(_FETCH_ATTEMPTS):
        try:
            resp = requests.get(url, timeout=60)
            resp.raise_for_status()
            target.write_bytes(resp.content)
            return target
        except Exception as exc:          # noqa: BLE001 - retried, then surfaced
            last_exc = exc
            time.sleep(0.5 * 2 ** attempt)
    raise TableFormatError(f"failed to fetch {url!r} after "
                           f"{_FETCH_ATTEMPTS} attempts: {last_exc}")


def import_zeros(src: TableSource, index_offset: int = 0,
                 cache_dir: str | Path = ".zetagap-cache") -> ZeroTable:
    """Parse a zero table; indices start at 1 + index_offset.

    plain_ordinates files are assumed to begin at the first zero unless
    index_offset says otherwise.
    """
    if src.kind == "remote_url":
        path = fetch_to_cache(src.location, cache_dir)
    elif src.kind == "local_file":
        path = Path(src.location)
    else:
        raise TableFormatError("import_zeros cannot read a 'computed' source")
    text = path.read_text()
    if src.format == "plain_ordinates":
        return _parse_plain(text, index_offset)
    return _parse_internal(text, index_offset)


def _parse_plain(text: str, index_offset: int) -> ZeroTable:
    records = []
    prev = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError as exc:
            raise TableFormatError(f"line {line_no}: not a decimal ordinate: "
                                   f"{line!r}", line_no=line_no) from exc
        if prev is not None and value <= prev:
            raise TableFormatError(
                f"line {line_no}: ordinates not strictly ascending",
                line_no=line_no)
        digits = len(line.split(".", 1)[1]) if "." in line else 0
        err = 10.0 ** -(digits - 1) if digits >= 1 else 1.0
        records.append(ZeroRecord(index=len(records) + 1 + index_offset,
                                  ordinate=value, err_radius=err,
                                  source="imported",
                                  sign_change_verified=False))
        prev = value
    if not records:
        raise EmptyTableError("no data rows in zero table")
    return ZeroTable(records=records)


def _parse_internal(text: str, index_offset: int) -> ZeroTable:
    t_cert = 0.0
    check = None
    records = []
    saw_header = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("t_cert="):
                t_cert = float(body.split("=", 1)[1])
            elif body.startswith("count_formula_check="):
                val = body.split("=", 1)[1]
                check = None if val == "none" else int(val)
            continue
        if line.startswith("index,"):
            saw_header = True
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise TableFormatError(f"line {line_no}: expected 5 columns",
                                   line_no=line_no)
        try:
            records.append(ZeroRecord(
                index=int(parts[0]) + index_offset,
                ordinate=float(parts[1]),
                err_radius=float(parts[2]),
                source=parts[3],
                sign_change_verified=parts[4] == "true",
            ))
        except ValueError as exc:
            raise TableFormatError(f"line {line_no}: {exc}",
                                   line_no=line_no) from exc
    if not records:
        if saw_header:
            raise EmptyTableError("internal_csv has a header but no data rows")
        raise EmptyTableError("no data rows in zero table")
    return ZeroTable(records=records, t_cert=t_cert, count_formula_check=check)


def export_table(table: ZeroTable, path: str | Path) -> None:
    """Write internal_csv; import_zeros restores every field bit-exactly."""
    lines = ["# zetagap zero table"]
    lines.append(f"# t_cert={table.t_cert!r}")
    check = "none" if table.count_formula_check is None \
        else str(table.count_formula_check)
    lines.append(f"# count_formula_check={check}")
    lines.append("index,ordinate,err_radius,source,sign_change_verified")
    for rec in table.records:
        lines.append(
            f"{rec.index},{rec.ordinate:.17g},{rec.err_radius:.17g},"
            f"{rec.source},{'true' if rec.sign_change_verified else 'false'}")
    Path(path).write_text("\n".join(lines) + "\n")
