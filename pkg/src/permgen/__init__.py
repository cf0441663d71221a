"""Smallest generating sets of permutation groups."""

from .bsgs import Group, GenTestStats, StabilizerChain, generates
from .constructions import build, parse_spec
from .mingen import SolveOptions, smallest_generating_set
from .perm import Permutation, parse_cycles, print_cycles
from .structure import ChiefSeries, chief_series

__all__ = [
    "Group",
    "GenTestStats",
    "StabilizerChain",
    "generates",
    "build",
    "parse_spec",
    "SolveOptions",
    "smallest_generating_set",
    "Permutation",
    "parse_cycles",
    "print_cycles",
    "ChiefSeries",
    "chief_series",
]
