"""Uniform-binning 1D and 2D histograms."""

from __future__ import annotations

import math

import numpy as np


class HistError(Exception):
    pass


class BinningMismatch(HistError):
    pass


class EmptyHistogram(HistError):
    pass


class Axis:
    """Uniform axis with half-open bins ``[edge_k, edge_k+1)``."""

    __slots__ = ("n_bins", "lo", "hi", "_scale")

    def __init__(self, n_bins, lo, hi):
        n_bins = int(n_bins)
        lo, hi = float(lo), float(hi)
        if n_bins < 1:
            raise ValueError("n_bins must be >= 1")
        if not lo < hi:
            raise ValueError(f"axis needs lo < hi, got [{lo}, {hi}]")
        self.n_bins, self.lo, self.hi = n_bins, lo, hi
        self._scale = n_bins / (hi - lo)

    def index(self, x):
        """Bin index in ``[0, n_bins)``, ``-1`` for underflow, ``n_bins`` for
        overflow, ``None`` for NaN."""
        if x != x:
            return None
        if x < self.lo:
            return -1
        if x >= self.hi:
            return self.n_bins
        k = int(math.floor((x - self.lo) * self._scale))
        # rounding can push x just below hi into bin n_bins
        return min(k, self.n_bins - 1)

    def edges(self):
        return np.linspace(self.lo, self.hi, self.n_bins + 1)

    def __eq__(self, other):
        return (
            isinstance(other, Axis)
            and (self.n_bins, self.lo, self.hi) == (other.n_bins, other.lo, other.hi)
        )

    def __repr__(self):
        return f"Axis({self.n_bins}, {self.lo}, {self.hi})"


class Hist1D:
    """Fixed-bin 1D histogram with weighted moments per bin.

    Storage slot 0 is the underflow bin and slot ``n_bins + 1`` the overflow
    bin. NaN fills only bump ``nan_entries``.
    """

    def __init__(self, n_bins, lo, hi):
        self.axis = Axis(n_bins, lo, hi)
        size = self.axis.n_bins + 2
        self.entries = np.zeros(size, dtype=np.uint64)
        self.sum_w = np.zeros(size)
        self.sum_w2 = np.zeros(size)
        self.sum_wx = np.zeros(size)
        self.sum_wx2 = np.zeros(size)
        self.nan_entries = 0

    @property
    def n_bins(self):
        return self.axis.n_bins

    @property
    def lo(self):
        return self.axis.lo

    @property
    def hi(self):
        return self.axis.hi

    def bin_index(self, x):
        return self.axis.index(x)

    def fill(self, x, w=1.0):
        k = self.axis.index(x)
        if k is None:
            self.nan_entries += 1
            return
        k += 1
        wx = w * x
        self.entries[k] += 1
        self.sum_w[k] += w
        self.sum_w2[k] += w * w
        self.sum_wx[k] += wx
        self.sum_wx2[k] += wx * x

    def merge(self, other: Hist1D) -> Hist1D:
        if self.axis != other.axis:
            raise BinningMismatch(f"{self.axis} vs {other.axis}")
        out = Hist1D(self.n_bins, self.lo, self.hi)
        out.entries = self.entries + other.entries
        out.sum_w = self.sum_w + other.sum_w
        out.sum_w2 = self.sum_w2 + other.sum_w2
        out.sum_wx = self.sum_wx + other.sum_wx
        out.sum_wx2 = self.sum_wx2 + other.sum_wx2
        out.nan_entries = self.nan_entries + other.nan_entries
        return out

    __add__ = merge

    def total_entries(self):
        """All fill calls, including under/overflow and NaN."""
        return int(self.entries.sum()) + self.nan_entries

    def _in_range(self):
        s = slice(1, self.n_bins + 1)
        sw = float(self.sum_w[s].sum())
        if not sw > 0.0:
            raise EmptyHistogram("no positive in-range weight")
        return sw, float(self.sum_wx[s].sum()), float(self.sum_wx2[s].sum())

    def mean(self):
        sw, swx, _ = self._in_range()
        return swx / sw

    def stddev(self):
        sw, swx, swx2 = self._in_range()
        m = swx / sw
        return math.sqrt(max(0.0, swx2 / sw - m * m))

    def __eq__(self, other):
        return (
            isinstance(other, Hist1D)
            and self.axis == other.axis
            and self.nan_entries == other.nan_entries
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("entries", "sum_w", "sum_w2", "sum_wx", "sum_wx2")
            )
        )

    def __repr__(self):
        return f"Hist1D({self.n_bins}, {self.lo}, {self.hi}, entries={self.total_entries()})"


class Hist2D:
    """Fixed-bin 2D histogram. Cells are stored in an ``(nx+2, ny+2)`` grid
    with under/overflow rows and columns at both ends."""

    def __init__(self, nx, xlo, xhi, ny, ylo, yhi):
        self.xaxis = Axis(nx, xlo, xhi)
        self.yaxis = Axis(ny, ylo, yhi)
        shape = (self.xaxis.n_bins + 2, self.yaxis.n_bins + 2)
        self.entries = np.zeros(shape, dtype=np.uint64)
        self.sum_w = np.zeros(shape)
        self.sum_w2 = np.zeros(shape)
        self.nan_entries = 0

    def fill(self, x, y, w=1.0):
        i = self.xaxis.index(x)
        j = self.yaxis.index(y)
        if i is None or j is None:
            self.nan_entries += 1
            return
        cell = (i + 1, j + 1)
        self.entries[cell] += 1
        self.sum_w[cell] += w
        self.sum_w2[cell] += w * w

    def merge(self, other: Hist2D) -> Hist2D:
        if self.xaxis != other.xaxis or self.yaxis != other.yaxis:
            raise BinningMismatch("2D binning differs")
        x, y = self.xaxis, self.yaxis
        out = Hist2D(x.n_bins, x.lo, x.hi, y.n_bins, y.lo, y.hi)
        out.entries = self.entries + other.entries
        out.sum_w = self.sum_w + other.sum_w
        out.sum_w2 = self.sum_w2 + other.sum_w2
        out.nan_entries = self.nan_entries + other.nan_entries
        return out

    __add__ = merge

    def total_entries(self):
        return int(self.entries.sum()) + self.nan_entries

    def __eq__(self, other):
        return (
            isinstance(other, Hist2D)
            and self.xaxis == other.xaxis
            and self.yaxis == other.yaxis
            and self.nan_entries == other.nan_entries
            and all(
                np.array_equal(getattr(self, f), getattr(other, f))
                for f in ("entries", "sum_w", "sum_w2")
            )
        )

    def __repr__(self):
        return f"Hist2D({self.xaxis}, {self.yaxis}, entries={self.total_entries()})"
