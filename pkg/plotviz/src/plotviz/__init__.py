"""Figure rendering for Krylov-ergodicity sweep outputs."""

__version__ = "0.1.0"

from .errors import MissingColumn, PlotvizError, SchemaMismatch
from .figures import (
    FIGURE_IDS,
    SWEEP_HEADER,
    FigureSpec,
    read_sequence_dump,
    read_sweep_csv,
    render,
)

__all__ = [
    "FIGURE_IDS",
    "SWEEP_HEADER",
    "FigureSpec",
    "MissingColumn",
    "PlotvizError",
    "SchemaMismatch",
    "read_sequence_dump",
    "read_sweep_csv",
    "render",
]
