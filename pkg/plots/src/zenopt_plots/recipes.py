"""Figure recipes: which CSVs feed which figure family, and how.

One recipe per output image.  Each input is pinned to the exact header the
simulator writes, so a drifting CSV contract fails loudly instead of
rendering nonsense.  Families:

  spectrum            eigenvalue tracks against theta, optional colour classes
  trajectory-fan      survival/success traces, one curve per resource budget
  success-vs-resource final probabilities against a log-scaled budget
  strength-scan       two-panel constraint-strength comparison
  pulse-cartoon       STIRAP pulse envelopes and mixing angle
  residual-summary    identity-check residuals on a log axis

The first five follow the published figure families; residual-summary exists
so the identity-check table renders like everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .tables import TableError, read_table

FAMILIES = (
    "spectrum",
    "trajectory-fan",
    "success-vs-resource",
    "strength-scan",
    "pulse-cartoon",
    "residual-summary",
)

SPECTRUM_COLUMNS = ("theta", "track", "eigenvalue", "color", "kernel_count")
TRACE_COLUMNS = ("theta", "survival", "success")
FINAL_COLUMNS = ("total_time", "final_survival", "final_success")


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs and styling for one image.

    `inputs` maps a file name or glob pattern to the expected header; every
    matching file must carry exactly that header.  `options` hold the
    family-specific styling knobs (panel/group columns, log axes, labels).
    """

    name: str
    family: str
    inputs: dict
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown figure family {self.family!r}")
        if not self.inputs:
            raise ValueError(f"recipe {self.name} has no inputs")

    def load(self, data_dir) -> dict:
        """Read and validate every input; returns pattern -> list of Tables."""
        data_dir = Path(data_dir)
        loaded = {}
        for pattern, columns in self.inputs.items():
            paths = sorted(data_dir.glob(pattern)) if _is_glob(pattern) else [
                data_dir / pattern
            ]
            paths = [p for p in paths if p.exists()]
            if not paths:
                raise TableError(
                    f"recipe {self.name}: no file matches {pattern!r} in {data_dir}"
                )
            loaded[pattern] = [read_table(p, expect_columns=columns) for p in paths]
        return loaded


def _is_glob(pattern: str) -> bool:
    return any(ch in pattern for ch in "*?[")


def _projected_figure_recipes(stem: str, title: str) -> list:
    final_columns = FINAL_COLUMNS
    return [
        FigureRecipe(
            f"{stem}-trajectories",
            "trajectory-fan",
            {f"{stem}.csv": ("total_time", "theta", "survival", "success")},
            {"group": "total_time", "title": title},
        ),
        FigureRecipe(
            f"{stem}-success",
            "success-vs-resource",
            {f"{stem}-final.csv": final_columns},
            {"x": "total_time", "title": f"{title}, final probabilities"},
        ),
        FigureRecipe(
            f"{stem}-spectrum",
            "spectrum",
            {f"{stem}-spectrum.csv": ("theta", "track", "eigenvalue")},
            {"title": f"{title}, restricted spectrum"},
        ),
    ]


RECIPES = tuple(
    [
        FigureRecipe(
            "fig2-spectrum",
            "spectrum",
            {"fig2-spectrum.csv": ("panel",) + SPECTRUM_COLUMNS},
            {"panel": "panel", "title": "Decay spectrum, satisfiable vs not"},
        ),
        FigureRecipe(
            "fig3-trajectories",
            "trajectory-fan",
            {"fig3-dissipative-T*.csv": TRACE_COLUMNS},
            {"title": "Dissipative sweeps"},
        ),
        FigureRecipe(
            "fig3-success",
            "success-vs-resource",
            {"fig3-dissipative-final.csv": FINAL_COLUMNS},
            {"x": "total_time", "title": "Dissipative protocol, final probabilities"},
        ),
        FigureRecipe(
            "fig4-trajectories",
            "trajectory-fan",
            {"fig4-measurement-N*.csv": TRACE_COLUMNS},
            {"title": "Measurement sweeps"},
        ),
        FigureRecipe(
            "fig4-success",
            "success-vs-resource",
            {
                "fig4-measurement-final.csv": (
                    "n_measurements",
                    "final_survival",
                    "final_success",
                )
            },
            {
                "x": "n_measurements",
                "title": "Measurement protocol, final probabilities",
            },
        ),
        FigureRecipe(
            "fig5-spectra",
            "spectrum",
            {"fig5-spectra.csv": ("offset_alpha",) + SPECTRUM_COLUMNS},
            {"panel": "offset_alpha", "title": "Adiabatic spectrum without/with offset"},
        ),
        FigureRecipe(
            "fig6-trajectories",
            "trajectory-fan",
            {"fig6-adiabatic.csv": ("offset_alpha", "total_time", "theta", "success")},
            {
                "panel": "offset_alpha",
                "group": "total_time",
                "title": "Adiabatic sweeps without/with offset",
            },
        ),
        FigureRecipe(
            "fig6-success",
            "success-vs-resource",
            {"fig6-adiabatic-final.csv": ("offset_alpha", "total_time", "final_success")},
            {
                "x": "total_time",
                "series": "offset_alpha",
                "title": "Adiabatic protocol, final success",
            },
        ),
        FigureRecipe(
            "fig7-comparison",
            "strength-scan",
            {
                "fig7-scan.csv": (
                    "strength",
                    "total_time",
                    "success_three_state",
                    "success_tf",
                    "ground_state_ok",
                ),
                "fig7-projected.csv": ("total_time", "success_projected"),
            },
            {"title": "Constraint strength, three-state vs transverse field"},
        ),
        FigureRecipe(
            "stirap-pulses",
            "pulse-cartoon",
            {"stirap-check.csv": ("tau", "pulse_a", "pulse_b", "mixing_angle")},
            {"title": "Counter-intuitive pulse ordering"},
        ),
        FigureRecipe(
            "appxA-residuals",
            "residual-summary",
            {"appxA-identities.csv": ("identity", "levels", "phi", "theta", "residual")},
            {"title": "Identity-check residuals"},
        ),
    ]
    + _projected_figure_recipes("figE-dw4", "Domain-wall unit, perfect projection")
    + _projected_figure_recipes("figE-oh5", "One-hot unit, perfect projection")
    + _projected_figure_recipes("figE-g2", "Three-hot fields, perfect projection")
)

RECIPE_INDEX = {recipe.name: recipe for recipe in RECIPES}


def get_recipe(name: str) -> FigureRecipe:
    try:
        return RECIPE_INDEX[name]
    except KeyError:
        raise KeyError(
            f"unknown recipe {name!r}; known: {sorted(RECIPE_INDEX)}"
        ) from None
