"""Family renderers and the public render entry points.

Rendering is read-only over the CSVs and deterministic: timestamps are
stripped from the image metadata, so re-rendering a deleted image reproduces
it byte for byte.  No physics is computed here; the only transformations are
axis scaling and a display floor for log-scale residuals.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import RECIPES, FigureRecipe, get_recipe
from .tables import TableError

# Track classes in the spectrum CSVs; draw order keeps the singled-out track
# visible on top of its degenerate cluster.
CLASS_ORDER = ("black", "red", "blue")
CLASS_WIDTH = {"black": 0.6, "red": 0.9, "blue": 1.6}

RESIDUAL_FLOOR = 1e-18


def _fan_colors(n: int):
    return plt.cm.viridis(np.linspace(0.0, 0.9, max(n, 2)))


def _file_budgets(pattern: str, tables) -> list:
    """(value, label, table) triples for per-budget trace files.

    The budget is whatever the pattern's wildcard matched, e.g. 1e-1 out of
    fig3-dissipative-T1e-1.csv, so exponents with signs survive.
    """
    prefix = pattern.split("*", 1)[0]
    triples = []
    for table in tables:
        token = table.path.name[len(prefix) : -len(".csv")]
        triples.append((float(token), f"{prefix[-1]}={token}", table))
    return sorted(triples, key=lambda item: item[0])


def _spectrum_panel(ax, table, title):
    has_classes = "color" in table.columns
    tracks = np.unique(table["track"]).astype(int)
    by_class = {}
    for t in tracks:
        sub = table.where("track", float(t))
        color = sub["color"][0] if has_classes else "black"
        by_class.setdefault(color, []).append(sub)
    for color in CLASS_ORDER if has_classes else ("black",):
        for sub in by_class.get(color, []):
            order = np.argsort(sub["theta"])
            ax.plot(
                sub["theta"][order],
                sub["eigenvalue"][order],
                color=color,
                linewidth=CLASS_WIDTH[color],
            )
    ax.set_xlabel(r"$\theta$")
    ax.set_title(title, fontsize=10)


def _render_spectrum(recipe, loaded) -> plt.Figure:
    (tables,) = loaded.values()
    (table,) = tables
    panel_column = recipe.options.get("panel")
    panels = table.unique(panel_column) if panel_column else [None]
    fig, axes = plt.subplots(
        1, len(panels), figsize=(4.2 * len(panels), 3.4), sharey=True, squeeze=False
    )
    for ax, panel in zip(axes[0], panels):
        sub = table.where(panel_column, panel) if panel_column else table
        label = "" if panel is None else f"{panel_column} = {panel}"
        _spectrum_panel(ax, sub, label)
    axes[0][0].set_ylabel("eigenvalue")
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


def _fan_curves(ax, table, label, color):
    order = np.argsort(table["theta"])
    thetas = table["theta"][order]
    if "survival" in table.columns:
        ax.plot(thetas, table["survival"][order], color=color, label=label)
        ax.plot(thetas, table["success"][order], color=color, linestyle="--")
    else:
        ax.plot(thetas, table["success"][order], color=color, label=label)


def _render_trajectory_fan(recipe, loaded) -> plt.Figure:
    ((pattern, tables),) = loaded.items()
    group = recipe.options.get("group")
    panel_column = recipe.options.get("panel")
    if group is None:
        # one file per budget, budget encoded in the file name
        triples = _file_budgets(pattern, tables)
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        colors = _fan_colors(len(triples))
        for (_, label, table), color in zip(triples, colors):
            _fan_curves(ax, table, label, color)
        axes = [ax]
    else:
        (table,) = tables
        panels = table.unique(panel_column) if panel_column else [None]
        fig, axs = plt.subplots(
            1, len(panels), figsize=(5.2 * len(panels), 3.6), sharey=True,
            squeeze=False,
        )
        axes = list(axs[0])
        for ax, panel in zip(axes, panels):
            sub = table.where(panel_column, panel) if panel_column else table
            budgets = sub.unique(group)
            colors = _fan_colors(len(budgets))
            for budget, color in zip(budgets, colors):
                _fan_curves(ax, sub.where(group, budget), f"{group}={budget:g}", color)
            if panel is not None:
                ax.set_title(f"{panel_column} = {panel}", fontsize=10)
    for ax in axes:
        ax.set_xlabel(r"$\theta$")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(fontsize=7)
    axes[0].set_ylabel("probability")
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


def _render_success_vs_resource(recipe, loaded) -> plt.Figure:
    (tables,) = loaded.values()
    (table,) = tables
    x_column = recipe.options["x"]
    series_column = recipe.options.get("series")
    value_columns = [
        c for c in table.columns if c not in (x_column, series_column)
    ]
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    groups = table.unique(series_column) if series_column else [None]
    for value in groups:
        sub = table.where(series_column, value) if series_column else table
        order = np.argsort(sub[x_column])
        for column, marker in zip(value_columns, "os^d"):
            label = column if value is None else f"{column}, {series_column}={value:g}"
            ax.plot(
                sub[x_column][order], sub[column][order],
                marker=marker, label=label,
            )
    ax.set_xscale("log")
    ax.set_xlabel(x_column)
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


def _render_strength_scan(recipe, loaded) -> plt.Figure:
    (scan,) = loaded["fig7-scan.csv"]
    (projected,) = loaded["fig7-projected.csv"]
    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 3.6), sharey=True)
    times = scan.unique("total_time")
    colors = _fan_colors(len(times))
    for total_time, color in zip(times, colors):
        sub = scan.where("total_time", total_time)
        order = np.argsort(sub["strength"])
        strengths = sub["strength"][order]
        label = f"T={total_time:g}"
        left.plot(strengths, sub["success_three_state"][order], "o-",
                  color=color, label=label)
        right.plot(strengths, sub["success_tf"][order], "o-",
                   color=color, label=label)
        reference = projected.where("total_time", total_time)
        if len(reference["success_projected"]):
            for ax in (left, right):
                ax.axhline(reference["success_projected"][0], color=color,
                           linestyle=":", linewidth=0.9)
    left.set_title("three-state units", fontsize=10)
    right.set_title("transverse-field penalty", fontsize=10)
    for ax in (left, right):
        ax.set_xscale("log")
        ax.set_xlabel("constraint strength")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(fontsize=7)
    left.set_ylabel("final success")
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


def _render_pulse_cartoon(recipe, loaded) -> plt.Figure:
    (tables,) = loaded.values()
    (table,) = tables
    fig, ax = plt.subplots(figsize=(5.0, 3.2))
    ax.plot(table["tau"], table["pulse_a"], label="pulse A")
    ax.plot(table["tau"], table["pulse_b"], label="pulse B")
    ax.set_xlabel(r"$\tau$")
    ax.set_ylabel("envelope")
    twin = ax.twinx()
    twin.plot(table["tau"], table["mixing_angle"], "k--", linewidth=0.9,
              label="mixing angle")
    twin.set_ylabel("mixing angle")
    handles, labels = ax.get_legend_handles_labels()
    more, more_labels = twin.get_legend_handles_labels()
    ax.legend(handles + more, labels + more_labels, fontsize=7)
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


def _render_residual_summary(recipe, loaded) -> plt.Figure:
    (tables,) = loaded.values()
    (table,) = tables
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    for identity, marker in zip(table.unique("identity"), "osd^vx+"):
        sub = table.where("identity", identity)
        # display floor keeps exact zeros visible on the log axis
        residuals = np.maximum(sub["residual"], RESIDUAL_FLOOR)
        ax.plot(sub["theta"], residuals, marker, label=identity, markersize=4)
    ax.set_yscale("log")
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("max abs residual")
    ax.legend(fontsize=7)
    fig.suptitle(recipe.options.get("title", recipe.name))
    fig.tight_layout()
    return fig


_FAMILY_RENDERERS = {
    "spectrum": _render_spectrum,
    "trajectory-fan": _render_trajectory_fan,
    "success-vs-resource": _render_success_vs_resource,
    "strength-scan": _render_strength_scan,
    "pulse-cartoon": _render_pulse_cartoon,
    "residual-summary": _render_residual_summary,
}


def build_figure(recipe: FigureRecipe, data_dir) -> plt.Figure:
    """Validate the recipe's inputs and build its matplotlib figure."""
    loaded = recipe.load(data_dir)
    return _FAMILY_RENDERERS[recipe.family](recipe, loaded)


def render(recipe, data_dir, out_dir, fmt: str = "png") -> Path:
    """Render one recipe (or recipe name) to `out_dir`; returns the path."""
    if isinstance(recipe, str):
        recipe = get_recipe(recipe)
    if fmt not in ("png", "svg"):
        raise ValueError(f"unsupported format {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig = build_figure(recipe, data_dir)
    path = out_dir / f"{recipe.name}.{fmt}"
    try:
        with plt.rc_context({"svg.hashsalt": recipe.name}):
            fig.savefig(path, dpi=150, metadata={"Date": None})
    finally:
        plt.close(fig)
    return path


def render_all(data_dir, out_dir, names=None, fmt: str = "png") -> list:
    """Render every recipe (or the named subset) from one data directory."""
    recipes = RECIPES if names is None else [get_recipe(n) for n in names]
    return [render(recipe, data_dir, out_dir, fmt=fmt) for recipe in recipes]


def covered_inputs() -> set:
    """Every CSV pattern any recipe consumes; used to audit catalog coverage."""
    patterns = set()
    for recipe in RECIPES:
        patterns.update(recipe.inputs)
    return patterns
