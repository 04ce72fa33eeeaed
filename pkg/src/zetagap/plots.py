"""Figure rendering for the report path.

Figures are written next to the delimited output.  PNG metadata is
stripped so repeated runs stay byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["render_gaudin_figure", "render_spacing_histogram", "render_bound_margins"]

_SAVE_KW = dict(dpi=130, metadata={"Software": None})


def _save(fig, path: Path):
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_gaudin_figure(table, out_path: str | Path) -> Path:
    """E(u) and p(0,u) over the grid."""
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    ax.plot(table.u_grid, table.e_values, label="E(u) = det(I - K)", color="tab:blue")
    ax.plot(table.u_grid, table.p_values, label="p(0,u) = E''(u)", color="tab:red")
    ax.set_xlabel("u")
    ax.set_title("Sine-kernel gap probability and spacing density")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    out = Path(out_path)
    _save(fig, out)
    return out


def render_spacing_histogram(comparison, out_path: str | Path) -> Path:
    """Empirical normalized-spacing histogram with the Gaudin density overlay."""
    edges = comparison.bin_edges
    widths = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    ax.bar(centers, comparison.empirical / widths, width=widths,
           color="tab:gray", alpha=0.6, label="normalized spacings")
    ax.plot(centers, comparison.predicted / widths, color="tab:red",
            lw=1.8, label="Gaudin density mass / bin")
    ax.set_xlabel("normalized spacing")
    ax.set_ylabel("density")
    ax.set_title(f"KS distance {comparison.ks_distance:.4f} "
                 f"(n = {comparison.n_samples})")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    out = Path(out_path)
    _save(fig, out)
    return out


def render_bound_margins(entries, out_path: str | Path) -> Path:
    """Margin (rhs - lhs) against height for every verdict-bearing bound."""
    by_id: dict[str, list] = {}
    for e in entries:
        if e.verdict in ("holds", "fails") and e.margin is not None:
            by_id.setdefault(e.bound_id, []).append((e.T, e.margin))
    fig, ax = plt.subplots(figsize=(7.5, 4.6))
    for bound_id in sorted(by_id):
        pts = sorted(by_id[bound_id])
        ts = [p[0] for p in pts]
        ms = [max(p[1], 1e-12) for p in pts]
        ax.plot(ts, ms, marker="o", ms=3, lw=1.0, label=bound_id)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel("margin (rhs - lhs)")
    ax.set_title("Verdict-bearing bounds: margin by height")
    ax.legend(frameon=False, fontsize=8, ncol=2)
    ax.grid(alpha=0.3, which="both")
    out = Path(out_path)
    _save(fig, out)
    return out
