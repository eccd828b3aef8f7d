"""Shortest-path distances, shortest-path counts and SPI/GSPI feature vectors.

Path counts come out of the same BFS that computes distances: when ``v`` is
first discovered from ``u`` at level ``d(u) + 1`` it inherits ``sigma[u]``,
and every later predecessor at that level adds its own count.

Whole-graph vectors count unordered pairs of distinct nodes; pairs in
different components contribute nothing.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _backend
from .graph import Graph, _map

UNREACHABLE = -1
SIGMA_SATURATED = int(_backend._pycore.SATURATED)


class PathCountOverflow(ArithmeticError):
    """A shortest-path count exceeded the 64-bit counter."""


@dataclass(frozen=True)
class BinningScheme:
    """Fixed-width bins for path counts: ``bin(x) = ceil(x / width)``."""

    width: int = 1

    def __post_init__(self):
        if int(self.width) != self.width or self.width < 1:
            raise ValueError("bin width must be a positive integer")

    def bin(self, x: int) -> int:
        return -(-int(x) // self.width)

    def bin_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.uint64)
        w = np.uint64(self.width)
        return (x // w + (x % w != 0)).astype(np.int64)


NO_BINNING = BinningScheme(1)


def _as_binning(binning) -> BinningScheme:
    if binning is None:
        return NO_BINNING
    if isinstance(binning, BinningScheme):
        return binning
    return BinningScheme(int(binning))


@dataclass(frozen=True)
class SsspResult:
    source: int
    dist: np.ndarray
    sigma: np.ndarray

    @property
    def overflow(self) -> bool:
        return bool(np.any(self.sigma == SIGMA_SATURATED))

    def reachable(self) -> np.ndarray:
        return self.dist != UNREACHABLE


@dataclass(frozen=True)
class SpiVector:
    """Number of unordered node pairs at each distance ``d >= 1``."""

    counts: Mapping[int, int]

    kind = "spi"

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> str:
        entries = [[d, c] for d, c in sorted(self.counts.items())]
        return json.dumps({"type": "spi", "binning": 1, "entries": entries})


@dataclass(frozen=True)
class GspiVector:
    """Number of unordered node pairs keyed by (distance, binned path count)."""

    counts: Mapping[tuple[int, int], int]
    binning: BinningScheme = NO_BINNING

    kind = "gspi"

    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self) -> dict[int, int]:
        """Fold out the path-count axis; equals the SPI counts of the same graph."""
        out: dict[int, int] = {}
        for (d, _), c in self.counts.items():
            out[d] = out.get(d, 0) + c
        return out

    def to_json(self) -> str:
        entries = [[d, b, c] for (d, b), c in sorted(self.counts.items())]
        return json.dumps({"type": "gspi", "binning": self.binning.width, "entries": entries})


def vector_from_json(text: str) -> SpiVector | GspiVector:
    obj = json.loads(text)
    if obj["type"] == "spi":
        return SpiVector({int(d): int(c) for d, c in obj["entries"]})
    if obj["type"] == "gspi":
        return GspiVector({(int(d), int(b)): int(c) for d, b, c in obj["entries"]},
                          BinningScheme(int(obj["binning"])))
    raise ValueError(f"unknown vector type {obj['type']!r}")


@dataclass(frozen=True)
class SourceProfile:
    """Per-source histograms; real-valued when averaged over sources."""

    d_focus: int
    spi: Mapping[int, float]
    gspi_d: Mapping[int, float]
    binning: BinningScheme = NO_BINNING


# --- extraction -------------------------------------------------------------

def sssp_count(g: Graph, source: int, backend=None) -> SsspResult:
    """BFS distances and exact shortest-path counts from ``source``.

    Counts that would not fit in 64 bits are stored as ``SIGMA_SATURATED`` and
    flagged by ``SsspResult.overflow``.
    """
    if not 0 <= source < g.node_count:
        raise IndexError(f"source {source} out of range for n={g.node_count}")
    core = _backend.get_backend(backend)
    dist, sigma = core.sssp(g.indptr, g.indices, int(source))
    return SsspResult(int(source), dist, sigma)


def pair_table(g: Graph, backend=None) -> tuple[np.ndarray, np.ndarray]:
    """(dist, sigma) for all unordered pairs, row-major over ``u < v``."""
    core = _backend.get_backend(backend)
    return core.all_pairs(g.indptr, g.indices)


def _pair_from_index(k: int, n: int) -> tuple[int, int]:
    u = 0
    while k >= n - 1 - u:
        k -= n - 1 - u
        u += 1
    return u, u + 1 + k


def _count_keys(keys: np.ndarray) -> dict:
    if keys.size == 0:
        return {}
    if keys.ndim == 1:
        uniq, counts = np.unique(keys, return_counts=True)
        return {int(k): int(c) for k, c in zip(uniq, counts)}
    # pack (d, b) into one int64 so a 1-D sort does the grouping
    stride = int(keys[:, 1].max()) + 1
    if int(keys[:, 0].max()) < np.iinfo(np.int64).max // stride:
        packed = keys[:, 0] * stride + keys[:, 1]
        uniq, counts = np.unique(packed, return_counts=True)
        return {(int(k // stride), int(k % stride)): int(c) for k, c in zip(uniq, counts)}
    uniq, counts = np.unique(keys, axis=0, return_counts=True)
    return {tuple(int(x) for x in k): int(c) for k, c in zip(uniq, counts)}


def spi_vector(g: Graph, backend=None) -> SpiVector:
    dist, _ = pair_table(g, backend)
    d = dist[dist > 0]
    counts = np.bincount(d) if d.size else np.zeros(0, dtype=np.int64)
    return SpiVector({k: int(c) for k, c in enumerate(counts) if c})


def gspi_vector(g: Graph, binning=None, backend=None) -> GspiVector:
    binning = _as_binning(binning)
    dist, sigma = pair_table(g, backend)
    return _gspi_from_pairs(dist, sigma, binning, g.node_count)


def _gspi_from_pairs(dist, sigma, binning: BinningScheme, n: int) -> GspiVector:
    mask = dist > 0
    if np.any(sigma[mask] == SIGMA_SATURATED):
        # locate in the unmasked layout so the message names real nodes
        bad = np.flatnonzero(mask & (sigma == SIGMA_SATURATED))
        u, v = _pair_from_index(int(bad[0]), n)
        raise PathCountOverflow(f"shortest-path count between nodes {u} and {v} exceeds 64 bits")
    keys = np.stack([dist[mask], binning.bin_array(sigma[mask])], axis=1)
    return GspiVector(_count_keys(keys), binning)


def both_vectors(g: Graph, binning=None, backend=None) -> tuple[SpiVector, GspiVector]:
    """SPI and GSPI vectors from a single all-pairs pass."""
    binning = _as_binning(binning)
    dist, sigma = pair_table(g, backend)
    gspi = _gspi_from_pairs(dist, sigma, binning, g.node_count)
    return SpiVector(gspi.marginal()), gspi


def extract_all(graphs: Sequence[Graph], binning=None, jobs: int = 1,
                backend=None) -> tuple[list[SpiVector], list[GspiVector]]:
    pairs = _map(lambda g: both_vectors(g, binning, backend), graphs, jobs)
    return [p[0] for p in pairs], [p[1] for p in pairs]


def source_profile(g: Graph, source: int, d_focus: int, binning=None, backend=None) -> SourceProfile:
    if d_focus < 1:
        raise ValueError("d_focus must be >= 1")
    binning = _as_binning(binning)
    res = sssp_count(g, source, backend)
    d = res.dist[res.dist > 0]
    spi = {int(k): int(c) for k, c in zip(*np.unique(d, return_counts=True))}
    at_focus = res.sigma[res.dist == d_focus]
    gspi_d = _count_keys(binning.bin_array(at_focus)) if at_focus.size else {}
    return SourceProfile(d_focus, spi, gspi_d, binning)


def average_profiles(dataset: Sequence[Graph], d_focus: int, binning=None,
                     jobs: int = 1, backend=None) -> SourceProfile:
    """Mean per-source profile over every (graph, source) pair in ``dataset``.

    Summing a source histogram over all sources counts every unordered pair
    twice, so the mean is ``2 * sum(pair counts) / sum(n)``.
    """
    if not dataset:
        raise ValueError("dataset must be nonempty")
    if d_focus < 1:
        raise ValueError("d_focus must be >= 1")
    binning = _as_binning(binning)
    vectors = _map(lambda g: both_vectors(g, binning, backend), dataset, jobs)
    sources = sum(g.node_count for g in dataset)
    spi: dict[int, float] = {}
    gspi_d: dict[int, float] = {}
    for s, gs in vectors:
        for d, c in s.counts.items():
            spi[d] = spi.get(d, 0) + c
        for (d, b), c in gs.counts.items():
            if d == d_focus:
                gspi_d[b] = gspi_d.get(b, 0) + c
    return SourceProfile(
        d_focus,
        {d: 2.0 * c / sources for d, c in sorted(spi.items())},
        {b: 2.0 * c / sources for b, c in sorted(gspi_d.items())},
        binning,
    )


def normalize(v: SpiVector | GspiVector | Mapping) -> dict:
    """Scale a feature vector to unit Euclidean norm; keys with zero count stay absent."""
    counts = v.counts if hasattr(v, "counts") else v
    items = {k: c for k, c in counts.items() if c}
    norm = math.sqrt(math.fsum(float(c) * float(c) for c in items.values()))
    if norm == 0.0:
        raise ValueError("cannot normalize an all-zero feature vector")
    return {k: c / norm for k, c in items.items()}
