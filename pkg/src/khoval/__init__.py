"""Khovanov homology of PD-coded link diagrams, with checks of the
two-line support of alternating links and the surrounding combinatorics."""

from khoval.diagram import LinkDiagram, parse_pd
from khoval.errors import KhovalError

__all__ = ["LinkDiagram", "parse_pd", "KhovalError"]
__version__ = "0.1.0"
