"""Batch figure rendering for the experiment harness's CSV artifacts.

Read-only consumers: figures are built from the delimited files exactly
as written, with no recomputation, so they can never disagree with the
summary tables.
"""

from .figures import (FIGURE_KINDS, FigureSpec, ParseError, read_errors,
                      read_residuals, read_solution, read_stages, render)

__all__ = ["FIGURE_KINDS", "FigureSpec", "ParseError", "read_errors",
           "read_residuals", "read_solution", "read_stages", "render"]
__version__ = "0.1.0"
