"""Figure rendering for residue-cycled discovery experiment CSVs."""

from .figures import (
    FIGURES,
    REQUIRED_COLUMNS,
    FigureError,
    FigureSpec,
    load_aggregate,
    relative_grid,
    render,
)

__all__ = [
    "FIGURES",
    "REQUIRED_COLUMNS",
    "FigureError",
    "FigureSpec",
    "load_aggregate",
    "relative_grid",
    "render",
]
