"""CSV and SVG emission for sweep results."""

from __future__ import annotations

import csv
from pathlib import Path

from .sim import PointResult, SweepResult

CSV_HEADER = ("scheme", "num_signals", "snr_db", "trials", "errors", "error_rate", "ci_low", "ci_high")

SCHEME_LABELS = {"sts": "STS", "walsh": "Walsh", "gold": "Gold", "zc": "Zadoff-Chu"}
SCHEME_STYLES = {"sts": ("tab:red", "o"), "walsh": ("tab:blue", "s"),
                 "gold": ("tab:green", "^"), "zc": ("tab:purple", "D")}


class OutputError(OSError):
    pass


def _fmt(x: float) -> str:
    # shortest round-tripping form
    return repr(float(x))


def csv_rows(result: SweepResult) -> list[tuple[str, ...]]:
    rows = []
    for p in result.sorted_points():
        lo, hi = p.ci
        rows.append((p.scheme, str(p.num_signals), _fmt(p.snr_db), str(p.trials), str(p.errors),
                     _fmt(p.error_rate), _fmt(lo), _fmt(hi)))
    return rows


def emit_csv(result: SweepResult, path) -> Path:
    """Write one row per point, ordered by scheme, signal count and ascending SNR."""
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            w.writerows(csv_rows(result))
    except OSError as e:
        raise OutputError(f"cannot write CSV to {path}: {e}") from e
    return path


def read_csv(path) -> SweepResult:
    """Inverse of :func:`emit_csv` (derived columns are recomputed)."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return SweepResult([
        PointResult(r["scheme"], int(r["num_signals"]), float(r["snr_db"]), int(r["trials"]), int(r["errors"]))
        for r in rows
    ])


def plotted_rate(p: PointResult) -> tuple[float, bool]:
    """Error rate for a log axis; zero counts become ``1/(2*trials)``. Second item flags clamping."""
    if p.errors == 0:
        return 1.0 / (2 * p.trials), True
    return p.error_rate, False


def emit_plot(results, path, title: str | None = None) -> Path:
    """
    Error rate against SNR, one line per (scheme, signal count).

    Single-signal curves are solid and two-signal curves dashed. Clamped
    zero-error points are drawn hollow and noted in the legend.
    """
    if isinstance(results, SweepResult):
        results = [results]
    results = list(results)
    if not results:
        raise ValueError("emit_plot needs at least one result")
    merged = results[0].merge(*results[1:])

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "otasig", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        any_clamped = False
        for (scheme, L), pts in merged.curves().items():
            color, marker = SCHEME_STYLES.get(scheme, ("black", "x"))
            x = [p.snr_db for p in pts]
            y, clamped = zip(*(plotted_rate(p) for p in pts))
            label = f"{SCHEME_LABELS.get(scheme, scheme)}, {L} signal{'s' if L > 1 else ''}"
            line, = ax.semilogy(x, y, color=color, marker=marker, linestyle="-" if L == 1 else "--",
                                label=label)
            line.set_gid(f"curve-{scheme}-{L}")
            cx = [xi for xi, c in zip(x, clamped) if c]
            if cx:
                any_clamped = True
                cy = [yi for yi, c in zip(y, clamped) if c]
                hollow = ax.semilogy(cx, cy, linestyle="none", marker=marker, markersize=9,
                                     markerfacecolor="white", markeredgecolor=color)[0]
                hollow.set_gid(f"clamped-{scheme}-{L}")
        if any_clamped:
            ax.plot([], [], linestyle="none", marker="o", markerfacecolor="white",
                    markeredgecolor="black", label="no errors (plotted at 1/(2 trials))")
        ax.set_xlabel("SNR per OFDM symbol (dB)")
        ax.set_ylabel("Detection error rate")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(f"cannot write plot to {path}: {e}") from e
        finally:
            plt.close(fig)
    return path
