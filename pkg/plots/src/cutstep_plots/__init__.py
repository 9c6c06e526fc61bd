"""Figure rendering for cutstep CSV outputs."""

from .figures import KINDS, FigureSpec, read_csv, render

__version__ = "0.1.0"
