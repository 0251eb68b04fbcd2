"""Information content of state traces at two description scales.

A StateTrace is a time-by-node matrix of discrete symbols. Information
is plug-in Shannon entropy (base 2) of the empirical distributions:
node_scale_info sums each node's marginal entropy, network_scale_info
takes the joint entropy of whole rows, and interaction_excess is their
difference, the share of node-scale description length that joint
structure makes redundant. Continuous traces are discretized per node
into equal-width bins over that node's observed range.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import RunRecord
from .errors import ConfigurationError

DEFAULT_BINS = 16


@dataclass(frozen=True)
class StateTrace:
    """Rows are time steps, columns are nodes, entries are symbols."""

    states: tuple[tuple[int, ...], ...]
    bins: int

    def __post_init__(self):
        if not self.states:
            raise ConfigurationError("trace needs at least one time step")
        width = len(self.states[0])
        if width == 0:
            raise ConfigurationError("trace rows must be non-empty")
        for row in self.states:
            if len(row) != width:
                raise ConfigurationError("ragged trace rows")
            for v in row:
                if not 0 <= v < self.bins:
                    raise ConfigurationError(
                        f"symbol {v} outside [0, {self.bins}) alphabet"
                    )

    @property
    def steps(self) -> int:
        return len(self.states)

    @property
    def node_count(self) -> int:
        return len(self.states[0])

    def column(self, node: int) -> tuple[int, ...]:
        return tuple(row[node] for row in self.states)


def trace_from_discrete(rows: Sequence[Sequence[int]], bins: int | None = None) -> StateTrace:
    """Wrap already-discrete states; the alphabet defaults to the observed max."""
    states = tuple(tuple(int(v) for v in row) for row in rows)
    if not states or not states[0]:
        raise ConfigurationError("trace needs at least one non-empty row")
    observed = max(max(row) for row in states)
    if bins is None:
        bins = observed + 1
    return StateTrace(states=states, bins=bins)


def trace_from_continuous(
    rows: Sequence[Sequence[float]], bins: int = DEFAULT_BINS
) -> StateTrace:
    """Discretize each node into equal-width bins over its observed range.

    A node whose value never changes gets the single symbol 0.
    """
    if bins < 1:
        raise ConfigurationError(f"need >= 1 bin, got {bins}")
    matrix = np.asarray(rows, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ConfigurationError("trace needs a non-empty 2-d matrix")
    if not np.all(np.isfinite(matrix)):
        raise ConfigurationError("trace contains non-finite values")
    lo = matrix.min(axis=0)
    hi = matrix.max(axis=0)
    span = hi - lo
    symbols = np.zeros(matrix.shape, dtype=int)
    varying = span > 0
    scaled = np.zeros_like(matrix)
    scaled[:, varying] = (matrix[:, varying] - lo[varying]) / span[varying]
    symbols[:, varying] = np.minimum((scaled[:, varying] * bins).astype(int), bins - 1)
    return StateTrace(
        states=tuple(tuple(int(v) for v in row) for row in symbols), bins=bins
    )


def trace_from_records(
    records: Iterable[RunRecord], bins: int = DEFAULT_BINS
) -> StateTrace:
    """Build a trace from the network_output column of run records."""
    rows = [record.network_output for record in records]
    if not rows:
        raise ConfigurationError("no records to build a trace from")
    return trace_from_continuous(rows, bins=bins)


def _entropy(counts: Iterable[int]) -> float:
    total = sum(counts)
    if total == 0:
        raise ConfigurationError("cannot take entropy of an empty sample")
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def node_scale_info(trace: StateTrace) -> float:
    """Total description length treating every node independently (bits)."""
    return sum(
        _entropy(Counter(trace.column(node)).values())
        for node in range(trace.node_count)
    )


def network_scale_info(trace: StateTrace) -> float:
    """Joint entropy of whole network states (bits)."""
    return _entropy(Counter(trace.states).values())


def interaction_excess(trace: StateTrace) -> float:
    """Bits the node-scale description wastes relative to the joint one.

    Non-negative by subadditivity; zero exactly when nodes are
    empirically independent.
    """
    return node_scale_info(trace) - network_scale_info(trace)
