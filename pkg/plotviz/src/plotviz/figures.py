"""Render the five sweep figures from persisted CSV/JSON outputs.

This package deliberately has no in-process coupling to the numerical
library: it consumes only the sweep CSV schema and the Arnoldi sequence-dump
JSON files.  Every renderer returns the plotted data series keyed by name so
tests can compare them against the input columns without decoding images.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from matplotlib.figure import Figure

from .errors import MissingColumn, SchemaMismatch

SWEEP_HEADER = [
    "param",
    "eta_mean",
    "eta_sem",
    "dks_mean",
    "dks_sem",
    "erginv_mean",
    "erginv_sem",
    "dunif_mean",
    "dunif_sem",
    "kdim_mean",
    "erg_norm",
    "dks_norm",
    "n_ok",
    "n_fail",
]

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5")

# marker conventions shared by every figure
STYLE = {
    "eta": dict(marker="o", color="black", label=r"$\eta$"),
    "dks": dict(marker="s", color="tab:blue", label=r"$\Delta_{KS}$"),
    "erg": dict(marker="^", color="tab:orange", label="Erg"),
    "dunif": dict(marker="D", color="tab:blue", label=r"$\Delta_{unif}$"),
    "erginv": dict(marker="^", color="tab:orange", label=r"Erg$^{-1}$"),
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: its id, input files, and output image path."""

    figure_id: str
    inputs: tuple[str, ...]
    output: str
    labels: tuple[str, ...] = ()
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise SchemaMismatch(f"unknown figure id {self.figure_id!r}")
        if not self.inputs:
            raise SchemaMismatch("figure spec needs at least one input file")


def read_sweep_csv(path) -> dict[str, np.ndarray]:
    """Load a sweep CSV; enforces the exact column schema.

    Returns float arrays per column with NaN for empty cells.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file") from None
        if header != SWEEP_HEADER:
            raise SchemaMismatch(f"{path}: header does not match the sweep schema")
        rows = [row for row in reader if row]
    for row in rows:
        if len(row) != len(SWEEP_HEADER):
            raise SchemaMismatch(f"{path}: row width {len(row)} != {len(SWEEP_HEADER)}")
    cols: dict[str, np.ndarray] = {}
    for j, name in enumerate(SWEEP_HEADER):
        cols[name] = np.array(
            [float(row[j]) if row[j] != "" else np.nan for row in rows], dtype=float
        )
    return cols


def read_sequence_dump(path) -> dict:
    """Load an Arnoldi sequence dump: {dim, m, a, b, c, ...}."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    missing = {"m", "a", "b", "c"} - set(payload)
    if missing:
        raise SchemaMismatch(f"{path}: sequence dump missing keys {sorted(missing)}")
    return payload


def _column(cols: dict[str, np.ndarray], name: str, path) -> np.ndarray:
    values = cols[name]
    if values.size and np.all(np.isnan(values)):
        raise MissingColumn(f"{path}: column {name!r} carries no values")
    return values


def _warn_if_empty(cols, path) -> bool:
    if cols["param"].size == 0:
        warnings.warn(f"{path}: no data rows, rendering empty axes", stacklevel=3)
        return True
    return False


def _series(store: dict, name: str, x, y) -> None:
    store[name] = {"x": np.asarray(x, dtype=float), "y": np.asarray(y, dtype=float)}


def _abs_pairs(pairs) -> np.ndarray:
    return np.abs(np.array([complex(re, im) for re, im in pairs]))


def _render_fig1(spec: FigureSpec) -> tuple[Figure, dict]:
    """Time-step scan: measures vs tau/tau* plus stacked sequence panels."""
    cols = read_sweep_csv(spec.inputs[0])
    dumps = [read_sequence_dump(p) for p in spec.inputs[1:]]
    series: dict = {}

    n_rows = max(len(dumps), 1)
    fig = Figure(figsize=(10, 2.2 * n_rows + 2))
    grid = fig.add_gridspec(n_rows, 2, width_ratios=[3, 2])
    ax_left = fig.add_subplot(grid[:, 0])
    if not _warn_if_empty(cols, spec.inputs[0]):
        x = cols["param"]
        erginv = _column(cols, "erginv_mean", spec.inputs[0])
        dunif = _column(cols, "dunif_mean", spec.inputs[0])
        ax_left.plot(x, erginv, linestyle="-", **STYLE["erginv"])
        ax_left.plot(x, dunif, linestyle="-", **STYLE["dunif"])
        _series(series, "erg_inverse", x, erginv)
        _series(series, "delta_unif", x, dunif)
        ax_left.set_xscale("log")
    ax_left.set_xlabel(r"$\tau/\tau^*$")
    ax_left.legend(loc="best")

    for j, dump in enumerate(dumps):
        ax = fig.add_subplot(grid[j, 1])
        n = np.arange(dump["m"])
        abs_a = _abs_pairs(dump["a"])
        b = np.asarray(dump["b"], dtype=float)
        abs_c = _abs_pairs(dump["c"])
        ax.plot(n, abs_a, ",", color="black", label=r"$|a_n|$")
        ax.plot(n[1:], b, ",", color="tab:orange", label=r"$b_n$")
        ax.plot(n, abs_c, ",", color="tab:blue", label=r"$|c_n|$")
        ax.set_ylim(-0.05, 1.25)
        if j == 0:
            ax.legend(loc="upper right", fontsize=7)
        if j == len(dumps) - 1:
            ax.set_xlabel("$n$")
        _series(series, f"seq{j}_abs_a", n, abs_a)
        _series(series, f"seq{j}_b", n[1:], b)
        _series(series, f"seq{j}_abs_c", n, abs_c)
    return fig, series


def _render_fig2(spec: FigureSpec) -> tuple[Figure, dict]:
    """Transition sweep on a log axis: eta plus one rescaled-Erg curve per CSV."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    series: dict = {}
    erg_markers = ("x", "^", "v", "*")
    erg_colors = ("chocolate", "tab:orange", "goldenrod", "peru")
    for i, path in enumerate(spec.inputs):
        cols = read_sweep_csv(path)
        if _warn_if_empty(cols, path):
            continue
        x = cols["param"]
        label = spec.labels[i] if i < len(spec.labels) else f"series {i}"
        if i == 0:
            eta = _column(cols, "eta_mean", path)
            ax.plot(x, eta, linestyle="-", **STYLE["eta"])
            _series(series, "eta", x, eta)
        erg_norm = _column(cols, "erg_norm", path)
        ax.plot(
            x,
            erg_norm,
            linestyle="--",
            marker=erg_markers[i % len(erg_markers)],
            color=erg_colors[i % len(erg_colors)],
            label=f"Erg ({label})",
        )
        _series(series, f"erg_norm_{i}", x, erg_norm)
    ax.set_xscale("log")
    ax.set_xlabel(r"$\Lambda$")
    ax.legend(loc="best")
    return fig, series


def _render_transition(spec: FigureSpec) -> tuple[Figure, dict]:
    """Chain or kicked-chain transition: eta, rescaled eigenvector statistic,
    rescaled Erg against the field parameter."""
    cols = read_sweep_csv(spec.inputs[0])
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    series: dict = {}
    if not _warn_if_empty(cols, spec.inputs[0]):
        x = cols["param"]
        eta = _column(cols, "eta_mean", spec.inputs[0])
        dks_norm = _column(cols, "dks_norm", spec.inputs[0])
        erg_norm = _column(cols, "erg_norm", spec.inputs[0])
        ax.plot(x, eta, linestyle="-", **STYLE["eta"])
        ax.plot(x, dks_norm, linestyle="--", **STYLE["dks"])
        ax.plot(x, erg_norm, linestyle=":", **STYLE["erg"])
        _series(series, "eta", x, eta)
        _series(series, "dks_norm", x, dks_norm)
        _series(series, "erg_norm", x, erg_norm)
    ax.set_xlabel(r"$h_z$")
    ax.legend(loc="best")
    return fig, series


def _render_fig5(spec: FigureSpec) -> tuple[Figure, dict]:
    """Non-rescaled eigenvector statistic and Erg, one panel per input CSV.

    The sweep CSV stores the inverse measure, so Erg is its reciprocal.
    """
    n_panels = len(spec.inputs)
    fig = Figure(figsize=(6, 3 * n_panels))
    series: dict = {}
    for i, path in enumerate(spec.inputs):
        cols = read_sweep_csv(path)
        ax = fig.add_subplot(n_panels, 1, i + 1)
        label = spec.labels[i] if i < len(spec.labels) else f"({chr(97 + i)})"
        ax.set_title(label, loc="left", fontsize=9)
        if _warn_if_empty(cols, path):
            continue
        x = cols["param"]
        dks = _column(cols, "dks_mean", path)
        erg = 1.0 / _column(cols, "erginv_mean", path)
        ax.plot(x, dks, linestyle="--", **STYLE["dks"])
        ax.set_ylabel(STYLE["dks"]["label"])
        twin = ax.twinx()
        twin.plot(x, erg, linestyle=":", **STYLE["erg"])
        twin.set_ylabel("Erg")
        if i == n_panels - 1:
            ax.set_xlabel(r"$h_z$")
        _series(series, f"panel{i}_delta_ks", x, dks)
        _series(series, f"panel{i}_erg", x, erg)
    return fig, series


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig3": _render_transition,
    "fig4": _render_transition,
    "fig5": _render_fig5,
}


def render(spec: FigureSpec) -> dict:
    """Render a figure spec to its output image; returns the plotted series.

    Identical inputs produce identical series; image bytes are a matplotlib
    implementation detail and not part of the contract.
    """
    fig, series = _RENDERERS[spec.figure_id](spec)
    fig.savefig(spec.output, dpi=150, bbox_inches="tight")
    return series
