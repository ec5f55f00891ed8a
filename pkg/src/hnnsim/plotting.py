"""Figures written next to the CSV/JSON reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

COMPONENTS = ("pe_j", "mem_j", "router_j", "emio_j")
COMPONENT_LABELS = {"pe_j": "PE", "mem_j": "MEM", "router_j": "Router", "emio_j": "EMIO"}
MODE_COLORS = {"ann": "#4c72b0", "snn": "#dd8452", "hnn": "#55a868"}

_STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.frameon": False,
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    # no Software/date metadata, so reruns give identical files
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_layer_report(report, out_dir: Path) -> list[Path]:
    """Per-layer cycles and stacked energy breakdown for one run."""
    rows = report.rows
    idx = [r.layer for r in rows]
    with plt.rc_context(_STYLE):
        fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 5.5), sharex=True)
        ax1.bar(idx, [r.compute_cycles for r in rows], label="compute", color="#4c72b0")
        ax1.bar(idx, [r.emio_cycles for r in rows],
                bottom=[r.compute_cycles for r in rows], label="EMIO", color="#c44e52")
        ax1.set_ylabel("cycles")
        ax1.set_title(f"{report.workload} ({report.mode})")
        ax1.legend()
        bottom = [0.0] * len(rows)
        for comp in COMPONENTS:
            vals = [getattr(r, comp) for r in rows]
            ax2.bar(idx, vals, bottom=bottom, label=COMPONENT_LABELS[comp])
            bottom = [b + v for b, v in zip(bottom, vals)]
        for r in rows:
            if r.domain == "snn":
                ax2.axvspan(r.layer - 0.5, r.layer + 0.5, color="0.85", zorder=0)
        ax2.set_ylabel("energy (J)")
        ax2.set_xlabel("layer (shaded: spiking)")
        ax2.legend(ncol=4)
        return [_save(fig, out_dir / f"{report.workload}_{report.mode}_layers.png")]


def plot_comparison(comparison, out_dir: Path) -> list[Path]:
    """Speedup and component energy per mode, ANN as the baseline."""
    modes = list(comparison.reports)
    name = comparison.baseline.workload
    with plt.rc_context(_STYLE):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
        speed = [comparison.speedup(m) for m in modes]
        ax1.bar(modes, speed, color=[MODE_COLORS[m] for m in modes])
        ax1.axhline(1.0, color="k", lw=0.8)
        ax1.set_ylabel("latency speedup vs ANN (x)")
        for i, s in enumerate(speed):
            ax1.annotate(f"{s:.2f}", (i, s), ha="center", va="bottom")
        bottom = [0.0] * len(modes)
        for comp in COMPONENTS:
            vals = [comparison.reports[m].total(comp) for m in modes]
            ax2.bar(modes, vals, bottom=bottom, label=COMPONENT_LABELS[comp])
            bottom = [b + v for b, v in zip(bottom, vals)]
        ax2.set_ylabel("energy per inference (J)")
        ax2.legend(ncol=2)
        fig.suptitle(name)
        return [_save(fig, out_dir / f"{name}_compare.png")]


def plot_sweep(rows: list[dict], axes: list[str], out_dir: Path, name: str) -> list[Path]:
    """One panel pair per swept axis: latency and normalized speedup/efficiency."""
    ok = [r for r in rows if r["status"] == "ok"]
    paths = []
    for axis in axes:
        others = [a for a in axes if a != axis]
        groups: dict[tuple, list[dict]] = {}
        for r in ok:
            groups.setdefault(tuple(str(r[a]) for a in others), []).append(r)
        with plt.rc_context(_STYLE):
            fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
            for key, grp in groups.items():
                label = ", ".join(f"{a}={v}" for a, v in zip(others, key)) or None
                xs = [str(r[axis]) for r in grp]
                ax1.plot(xs, [r["wall_us"] for r in grp], marker="o", label=label)
                ax2.plot(xs, [r["speedup_vs_ann"] for r in grp], marker="o", ls="-",
                         label=f"speedup {label or ''}".strip())
                ax2.plot(xs, [r["energy_eff_vs_ann"] for r in grp], marker="s", ls="--",
                         label=f"energy eff. {label or ''}".strip())
            ax1.set_xlabel(axis)
            ax1.set_ylabel("latency (us)")
            ax2.set_xlabel(axis)
            ax2.set_ylabel("normalized to ANN (x)")
            ax2.axhline(1.0, color="k", lw=0.8)
            if len(groups) > 1 or others:
                ax1.legend(fontsize=6)
            ax2.legend(fontsize=6)
            fig.suptitle(f"{name}: sweep over {axis}")
            paths.append(_save(fig, out_dir / f"{name}_sweep_{axis}.png"))
    return paths
