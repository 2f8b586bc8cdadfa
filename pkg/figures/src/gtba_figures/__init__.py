"""Figure rendering for beam-alignment experiment results.

Consumes the experiment CSV schema (one row per algorithm/sweep point) plus a
JSON figure spec, and renders one curve per algorithm. Pure post-processing:
no numbers are recomputed here, the CSV is the single source of truth.
"""

from .render import RenderResult, render
from .spec import FigureSpec, load_spec

__version__ = "0.1.0"

__all__ = ["FigureSpec", "RenderResult", "load_spec", "render", "__version__"]
