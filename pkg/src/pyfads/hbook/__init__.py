"""Histograms and n-tuples with deterministic merge semantics."""

from .hist import Axis, BinningMismatch, EmptyHistogram, Hist1D, Hist2D, HistError
from .ntuple import NTuple, SchemaMismatch, ntuple_append

__all__ = [
    "Axis",
    "BinningMismatch",
    "EmptyHistogram",
    "Hist1D",
    "Hist2D",
    "HistError",
    "NTuple",
    "SchemaMismatch",
    "ntuple_append",
]
