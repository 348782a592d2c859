"""Publication-style figures from the waveguide-chain simulator's CSV output.

This package reads only the documented CSV schemas (time traces and sweep
tables); it has no dependency on the simulator itself.
"""

from .csvio import CsvFormatError, read_sweep, read_trace
from .figures import FIGURE_IDS, FigureSpec, RenderResult, render

__version__ = "0.1.0"

__all__ = [
    "CsvFormatError",
    "FIGURE_IDS",
    "FigureSpec",
    "RenderResult",
    "read_sweep",
    "read_trace",
    "render",
]
