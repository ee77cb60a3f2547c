"""Büchi non-emptiness for timed automata over zone graphs."""

from .model import TBA, Atom, ModelError, Transition, max_constant, product, snz_transform
from .syntax import ParseError, parse_tba, render

__all__ = [
    "TBA",
    "Atom",
    "Transition",
    "ModelError",
    "ParseError",
    "max_constant",
    "parse_tba",
    "product",
    "render",
    "snz_transform",
]
