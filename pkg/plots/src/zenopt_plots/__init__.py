"""Figure rendering for the simulator's experiment CSVs."""

from .recipes import FAMILIES, RECIPE_INDEX, RECIPES, FigureRecipe, get_recipe
from .render import build_figure, covered_inputs, render, render_all
from .tables import HeaderMismatch, Table, TableError, read_metadata, read_table

__all__ = [
    "FAMILIES",
    "FigureRecipe",
    "HeaderMismatch",
    "RECIPES",
    "RECIPE_INDEX",
    "Table",
    "TableError",
    "build_figure",
    "covered_inputs",
    "get_recipe",
    "read_metadata",
    "read_table",
    "render",
    "render_all",
]

__version__ = "0.1.0"
