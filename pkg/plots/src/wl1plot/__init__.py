"""Figure generation for weighted-l1 projection benchmark CSVs."""

from .render import EmptyData, FigureSpec, MissingColumn, PlotDataError, build_figure, render

__version__ = "0.1.0"

__all__ = [
    "EmptyData",
    "FigureSpec",
    "MissingColumn",
    "PlotDataError",
    "build_figure",
    "render",
]
