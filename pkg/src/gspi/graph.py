"""Graphs, seeded random-graph models and the edge-list file format.

Two random models are provided:

* ``erdos_renyi(n, p1)`` -- every pair is an edge with probability ``p1``;
* ``planted_partition(n, p2, q2)`` -- nodes ``0 .. n/2-1`` form block V+,
  the rest block V-; intra-block pairs are wired with ``p2``, cross-block
  pairs with ``q2``.

``derive_q2`` balances the two so that both have the same expected number
of edges.

Randomness comes from numpy's Philox counter-based bit generator. Each graph
is seeded from ``(master_seed, n, factor, class, index)`` through
``numpy.random.SeedSequence``; datasets are therefore independent of the
order in which graphs are generated.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphLabel(enum.IntEnum):
    ONE_CLUSTER = 1
    TWO_CLUSTER = -1

    @property
    def clusters(self) -> int:
        return 1 if self is GraphLabel.ONE_CLUSTER else 2

    @classmethod
    def from_clusters(cls, clusters: int) -> "GraphLabel":
        if clusters == 1:
            return cls.ONE_CLUSTER
        if clusters == 2:
            return cls.TWO_CLUSTER
        raise ValueError(f"cluster count must be 1 or 2, got {clusters}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph in CSR form.

    ``indptr``/``indices`` hold sorted neighbor lists; ``two_cluster`` marks
    graphs drawn from the planted partition model, whose blocks are
    V+ = {0..n//2-1} and V- = {n//2..n-1}.
    """

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray
    two_cluster: bool = False
    _edges: np.ndarray = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges, two_cluster: bool = False) -> "Graph":
        if n < 1:
            raise ValueError("node_count must be positive")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0) if len(e) else e
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indices = np.ascontiguousarray(dst[order], dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        for arr in (indices, indptr, e):
            arr.setflags(write=False)
        return cls(n, indptr, indices, two_cluster, e)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def label(self) -> GraphLabel:
        return GraphLabel.TWO_CLUSTER if self.two_cluster else GraphLabel.ONE_CLUSTER

    @property
    def partition(self) -> np.ndarray | None:
        """Block id per node (0 for V+, 1 for V-), or None for one-cluster graphs."""
        if not self.two_cluster:
            return None
        return (np.arange(self.node_count) >= self.node_count // 2).astype(np.int8)

    def edges(self) -> np.ndarray:
        """Edges as an (m, 2) array with ``u < v``, sorted lexicographically."""
        return self._edges

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.node_count)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.two_cluster == other.two_cluster
                and np.array_equal(self._edges, other._edges))

    def __hash__(self):
        return hash((self.node_count, self.two_cluster, self._edges.tobytes()))


def validate(g: Graph) -> None:
    """Raise ``ValueError`` unless ``g`` is a simple, symmetric, in-range graph."""
    n = g.node_count
    if len(g.indptr) != n + 1 or g.indptr[0] != 0 or g.indptr[-1] != len(g.indices):
        raise ValueError("malformed indptr")
    seen = set()
    for u in range(n):
        nbrs = g.neighbors(u)
        if len(nbrs) and (nbrs.min() < 0 or nbrs.max() >= n):
            raise ValueError(f"neighbor of {u} out of range")
        if np.any(np.diff(nbrs) <= 0):
            raise ValueError(f"neighbors of {u} unsorted or duplicated")
        if u in nbrs:
            raise ValueError(f"self-loop at {u}")
        for v in nbrs.tolist():
            seen.add((u, v))
    for u, v in seen:
        if (v, u) not in seen:
            raise ValueError(f"asymmetric adjacency between {u} and {v}")
    if g.two_cluster and n % 2:
        raise ValueError("two-cluster graph must have an even node count")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, u + 1) for u in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, (u + 1) % n) for u in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and ``leaves`` leaves."""
    return Graph.from_edges(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


# --- model parameters -------------------------------------------------------

def derive_q2(n: int, p1: float, p2: float) -> float:
    """Cross-block probability giving the planted partition model the same
    expected edge count as G(n, p1) when the intra-block probability is p2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    q2 = 2.0 * p1 - p2 - 2.0 * (p1 - p2) / n
    if not 0.0 < q2 < 1.0:
        raise ValueError(f"derived q2={q2:.6g} is not a probability in (0, 1) "
                         f"for n={n}, p1={p1:.6g}, p2={p2:.6g}")
    return q2


@dataclass(frozen=True)
class ModelParams:
    """Edge densities for one (n, c0, factor) dataset cell.

    ``p1 = c0 / n`` is kept at full precision; ``p2 = (1 + alpha0) p1``.
    """

    n: int
    c0: float
    alpha0: float
    p1: float
    p2: float
    q2: float

    def __post_init__(self):
        for name in ("p1", "p2", "q2"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name}={getattr(self, name)} outside (0, 1)")
        if self.alpha0 > 0 and not self.q2 < self.p2:
            raise ValueError("need q2 < p2")

    @classmethod
    def from_factor(cls, n: int, c0: float, factor: float) -> "ModelParams":
        p1 = c0 / n
        p2 = factor * p1
        return cls(n=n, c0=c0, alpha0=factor - 1.0, p1=p1, p2=p2, q2=derive_q2(n, p1, p2))

    @property
    def factor(self) -> float:
        return 1.0 + self.alpha0


def expected_edges_er(n: int, p1: float) -> float:
    return n * (n - 1) / 2 * p1


def expected_edges_planted(n: int, p2: float, q2: float) -> float:
    h = n // 2
    return 2 * (h * (h - 1) / 2) * p2 + h * h * q2


# --- generators -------------------------------------------------------------

def graph_seed(master_seed: int, n: int, factor: float, label: GraphLabel, index: int) -> np.random.SeedSequence:
    """Per-graph seed: a hash of the master seed, the dataset cell, the class and the index."""
    cell = int(round(factor * 1_000_000))
    return np.random.SeedSequence([int(master_seed), int(n), cell, int(label.clusters), int(index)])


def make_rng(seed) -> np.random.Generator:
    """Philox generator from an int, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def _sample_pairs(n: int, prob, rng: np.random.Generator, two_cluster: bool) -> Graph:
    # one uniform per unordered pair, row-major over (u < v)
    iu, iv = np.triu_indices(n, 1)
    draws = rng.random(len(iu))
    keep = draws < prob
    return Graph.from_edges(n, np.stack([iu[keep], iv[keep]], axis=1), two_cluster=two_cluster)


def erdos_renyi(n: int, p1: float, seed) -> Graph:
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < p1 < 1.0:
        raise ValueError("p1 must lie in (0, 1)")
    return _sample_pairs(n, p1, make_rng(seed), two_cluster=False)


def planted_partition(n: int, p2: float, q2: float, seed) -> Graph:
    if n % 2 or n < 2:
        raise ValueError(f"planted partition needs an even n >= 2, got {n}")
    if not 0.0 < q2 <= p2 < 1.0:
        raise ValueError("need 0 < q2 <= p2 < 1")
    half = n // 2
    iu, iv = np.triu_indices(n, 1)
    same = (iu < half) == (iv < half)
    prob = np.where(same, p2, q2)
    return _sample_pairs(n, prob, make_rng(seed), two_cluster=True)


def generate_graph(params: ModelParams, label: GraphLabel, index: int, master_seed: int) -> Graph:
    seed = graph_seed(master_seed, params.n, params.factor, label, index)
    if label is GraphLabel.ONE_CLUSTER:
        return erdos_renyi(params.n, params.p1, seed)
    return planted_partition(params.n, params.p2, params.q2, seed)


def generate_dataset(params: ModelParams, graphs_per_class: int, master_seed: int,
                     jobs: int = 1) -> tuple[list[Graph], np.ndarray]:
    """``graphs_per_class`` one-cluster graphs followed by as many two-cluster graphs."""
    tasks = [(label, i) for label in (GraphLabel.ONE_CLUSTER, GraphLabel.TWO_CLUSTER)
             for i in range(graphs_per_class)]
    graphs = _map(lambda t: generate_graph(params, t[0], t[1], master_seed), tasks, jobs)
    labels = np.array([int(label) for label, _ in tasks], dtype=np.int64)
    return graphs, labels


def _map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- edge-list files --------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.node_count} {g.edge_count} {g.label.clusters}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = text.splitlines()
    if not rows:
        raise ValueError("empty edge-list file")
    try:
        n, m, clusters = (int(tok) for tok in rows[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {rows[0]!r}") from exc
    body = [r for r in rows[1:] if r.strip()]
    if len(body) != m:
        raise ValueError(f"header announces {m} edges, found {len(body)}")
    edges = np.array([[int(t) for t in r.split()] for r in body], dtype=np.int64).reshape(-1, 2)
    if len(edges) and np.any(edges[:, 0] >= edges[:, 1]):
        raise ValueError("edges must be written with u < v")
    g = Graph.from_edges(n, edges, two_cluster=GraphLabel.from_clusters(clusters) is GraphLabel.TWO_CLUSTER)
    if g.edge_count != m:
        raise ValueError("duplicate edges in file")
    return g


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_bytes(format_edge_list(g).encode("ascii"))


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_bytes().decode("ascii"))


def read_graphs(paths: Iterable) -> list[Graph]:
    return [read_edge_list(p) for p in paths]
