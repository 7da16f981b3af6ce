"""Rendering: every recipe draws, the colour classes survive, and
re-rendering is byte-stable."""

from __future__ import annotations

import pytest

from zenopt_plots.cli import main
from zenopt_plots.recipes import RECIPES, get_recipe
from zenopt_plots.render import build_figure, render, render_all
from zenopt_plots.tables import TableError

import matplotlib.pyplot as plt


def line_color_counts(ax):
    counts = {}
    for line in ax.get_lines():
        counts[line.get_color()] = counts.get(line.get_color(), 0) + 1
    return counts


def test_every_recipe_renders(catalog_dir, tmp_path):
    paths = render_all(catalog_dir, tmp_path / "figures")
    assert len(paths) == len(RECIPES)
    for path in paths:
        assert path.exists()
        assert path.stat().st_size > 0
        assert path.suffix == ".png"


def test_fig2_colour_class_split(catalog_dir):
    fig = build_figure(get_recipe("fig2-spectrum"), catalog_dir)
    try:
        assert len(fig.axes) == 2
        for ax in fig.axes:
            counts = line_color_counts(ax)
            assert counts == {"black": 227, "red": 15, "blue": 1}
    finally:
        plt.close(fig)


def test_rerender_is_byte_identical(catalog_dir, tmp_path):
    out = tmp_path / "figures"
    names = ["fig2-spectrum", "fig3-trajectories", "fig7-comparison"]
    first = render_all(catalog_dir, out, names=names)
    before = {p.name: p.read_bytes() for p in first}
    for p in first:
        p.unlink()
    second = render_all(catalog_dir, out, names=names)
    for p in second:
        assert p.read_bytes() == before[p.name]


def test_svg_rendering(catalog_dir, tmp_path):
    path = render("stirap-pulses", catalog_dir, tmp_path, fmt="svg")
    assert path.suffix == ".svg"
    text = path.read_text()
    assert "<svg" in text
    with pytest.raises(ValueError):
        render("stirap-pulses", catalog_dir, tmp_path, fmt="gif")


def test_missing_and_invalid_inputs(tmp_path):
    with pytest.raises(TableError):
        render("fig2-spectrum", tmp_path, tmp_path)
    empty = tmp_path / "stirap-check.csv"
    empty.write_text("tau,pulse_a,pulse_b,mixing_angle\n")
    with pytest.raises(TableError):
        render("stirap-pulses", tmp_path, tmp_path)


def test_cli_renders_subset(catalog_dir, tmp_path, capsys):
    rc = main(
        [
            str(catalog_dir),
            "--out",
            str(tmp_path / "img"),
            "--only",
            "stirap-pulses",
            "--only",
            "appxA-residuals",
        ]
    )
    assert rc == 0
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 2
    assert (tmp_path / "img" / "stirap-pulses.png").exists()
    assert (tmp_path / "img" / "appxA-residuals.png").exists()


def test_cli_list_and_usage_errors(tmp_path, capsys):
    assert main(["--list"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == len(RECIPES)
    assert main([]) == 2
    assert main([str(tmp_path / "nowhere")]) == 2
    assert main([str(tmp_path), "--only", "fig99-hologram"]) == 2
    # empty data dir: inputs missing -> contract error, usage exit
    assert main([str(tmp_path)]) == 2
    capsys.readouterr()
