"""Static SVG figures from command output tables.

Figures are written with a fixed SVG hash salt and no date metadata so that
identical tables give byte-identical files.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .report import Table  # noqa: E402

__all__ = ["FigureError", "FIGURE_COLUMNS", "emit_figure"]


class FigureError(ValueError):
    pass


FIGURE_COLUMNS = {
    "stack-scan": ("k_over_k0", "delta_theta", "delta_phi", "T"),
    "magic": ("k_over_k0", "delta_theta", "delta_phi", "T"),
    "discriminate": ("k_over_k0", "delta_theta", "delta_phi_A", "delta_phi_B", "T_A", "T_B"),
    "fdt-corr": ("z1_over_w0", "z2_over_w0", "C", "N_diag"),
    "fdt-q": ("z1_over_w0", "z2_over_w0", "Q_scaled"),
    "noise-ratio": ("curve", "z2_over_w0", "F"),
    "psd": ("f_hz", "S_q"),
}

_RC = {
    "svg.hashsalt": "thermnoise",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "figure.dpi": 100,
}


def _groups(table: Table, key: str):
    keys = table.column(key)
    order = list(dict.fromkeys(keys))
    return [(g, [i for i, k in enumerate(keys) if k == g]) for g in order]


def _col(table, name, idx=None):
    values = np.asarray(table.column(name), dtype=float)
    return values if idx is None else values[idx]


def _phase_panels(table, fig, phi_cols, t_cols, labels):
    ax1, ax2 = fig.subplots(2, 1, sharex=True)
    x = _col(table, "k_over_k0")
    for col, label in zip(phi_cols, labels):
        ax1.plot(x, _col(table, col), label=label)
    ax1.plot(x, _col(table, "delta_theta"), "k--", label=r"$\delta\theta$")
    ax1.axhline(0.0, color="0.6", lw=0.6)
    ax1.set_ylabel(r"$\delta\Phi(k)/|\delta\theta(k_0)|$")
    ax1.legend(loc="best")
    for col, label in zip(t_cols, labels):
        ax2.semilogy(x, _col(table, col), label=label)
    ax2.set_ylabel(r"$T(k)$")
    ax2.set_xlabel(r"$k/k_0$")


def _draw(table: Table, kind: str, fig):
    if kind in ("stack-scan", "magic"):
        _phase_panels(table, fig, ["delta_phi"], ["T"], [r"$\delta\Phi$"])
    elif kind == "discriminate":
        _phase_panels(table, fig, ["delta_phi_A", "delta_phi_B"], ["T_A", "T_B"], ["A", "B"])
    elif kind == "fdt-corr":
        ax = fig.subplots()
        for z1, idx in _groups(table, "z1_over_w0"):
            ax.plot(_col(table, "z2_over_w0", idx), _col(table, "C", idx), label=f"$z_1/w_0={z1:g}$")
        _, idx = _groups(table, "z1_over_w0")[0]
        ax.plot(_col(table, "z2_over_w0", idx), _col(table, "N_diag", idx), "k--", label=r"$N(z_2,z_2)$")
        ax.set_xlabel(r"$z_2/w_0$")
        ax.set_ylabel(r"$C(z_1,z_2)$")
        ax.legend(loc="best")
    elif kind == "fdt-q":
        ax = fig.subplots()
        for z1, idx in _groups(table, "z1_over_w0"):
            ax.plot(_col(table, "z2_over_w0", idx), _col(table, "Q_scaled", idx), label=f"$z_1/w_0={z1:g}$")
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_xlabel(r"$z_2/w_0$")
        ax.set_ylabel(r"$Q/\sqrt{\Delta z_2/w_0}$")
        ax.legend(loc="best")
    elif kind == "noise-ratio":
        ax = fig.subplots()
        for curve, idx in _groups(table, "curve"):
            label = r"$\alpha_{min}$" if curve == "min" else rf"$\alpha={curve}$"
            ax.plot(_col(table, "z2_over_w0", idx), _col(table, "F", idx), label=label)
            if "F_transverse" in table.columns:
                ax.plot(_col(table, "z2_over_w0", idx), _col(table, "F_transverse", idx), "--", color="0.4")
        ax.set_xlabel(r"$z_2/w_0$")
        ax.set_ylabel(r"$F(z_2)$")
        ax.legend(loc="best")
    elif kind == "psd":
        ax = fig.subplots()
        ax.loglog(_col(table, "f_hz"), np.sqrt(_col(table, "S_q")))
        ax.set_xlabel("frequency (Hz)")
        ax.set_ylabel(r"$\sqrt{S_q}$ (m/$\sqrt{\mathrm{rad/s}}$)")


def emit_figure(table: Table, kind: str, path) -> Path:
    """Render ``table`` as the figure panel for command ``kind`` into an SVG file."""
    if kind not in FIGURE_COLUMNS:
        raise FigureError(f"no figure for {kind!r}")
    missing = [c for c in FIGURE_COLUMNS[kind] if c not in table.columns]
    if missing:
        raise FigureError(f"{kind} figure needs columns {missing}")
    if len(table) == 0:
        raise FigureError("empty scan, nothing to plot")
    path = Path(path)
    with plt.rc_context(_RC):
        fig = plt.figure(figsize=(4.5, 5.0 if kind in ("stack-scan", "magic", "discriminate") else 3.4))
        try:
            _draw(table, kind, fig)
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return path
