"""SPI/GSPI kernels as explicit inner products, feature indexing and Gram matrices.

Both kernels are inner products of sparse count vectors: the SPI kernel
scores node pairs with equal shortest distance, the GSPI kernel additionally
requires equal (binned) shortest-path counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from .features import GspiVector, SpiVector, normalize


def _sparse_dot(a, b) -> float:
    if len(a) > len(b):
        a, b = b, a
    return sum(c * b[k] for k, c in a.items() if k in b)


def k_spi(a: SpiVector, b: SpiVector):
    return _sparse_dot(a.counts, b.counts)


def k_gspi(a: GspiVector, b: GspiVector):
    if a.binning != b.binning:
        raise ValueError(f"binning mismatch: width {a.binning.width} vs {b.binning.width}")
    return _sparse_dot(a.counts, b.counts)


def kernel(a, b):
    if isinstance(a, GspiVector) and isinstance(b, GspiVector):
        return k_gspi(a, b)
    if isinstance(a, SpiVector) and isinstance(b, SpiVector):
        return k_spi(a, b)
    raise TypeError("both arguments must be SpiVector or both GspiVector")


def _key_json(key):
    return list(key) if isinstance(key, tuple) else key


def _key_from_json(key):
    return tuple(key) if isinstance(key, list) else key


@dataclass(frozen=True)
class FeatureIndex:
    """Dataset-wide map from feature keys to dense column ids (keys sorted)."""

    keys: tuple

    @classmethod
    def from_vectors(cls, vectors: Sequence) -> "FeatureIndex":
        union: set[Hashable] = set()
        for v in vectors:
            union.update(v.counts.keys())
        return cls(tuple(sorted(union)))

    @property
    def dim(self) -> int:
        return len(self.keys)

    def position(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def transform(self, vectors: Sequence, normalized: bool = True) -> np.ndarray:
        """Dense (len(vectors), dim) matrix; keys outside the index are dropped.

        With ``normalized`` each row is the unit vector of the *full* feature
        vector, so test vectors are scaled the same way as training vectors.
        """
        pos = self.position()
        X = np.zeros((len(vectors), self.dim), dtype=np.float64)
        for r, v in enumerate(vectors):
            entries = normalize(v) if normalized else v.counts
            for k, c in entries.items():
                j = pos.get(k)
                if j is not None:
                    X[r, j] = c
        return X

    def to_json(self):
        return [_key_json(k) for k in self.keys]

    @classmethod
    def from_json(cls, obj) -> "FeatureIndex":
        return cls(tuple(_key_from_json(k) for k in obj))


@dataclass(frozen=True)
class GramMatrix:
    values: np.ndarray
    normalized: bool

    def check(self, tol_diag: float = 1e-9, tol_eig: float = 1e-8) -> None:
        """Raise ``AssertionError`` if symmetry, PSD or unit-diagonal fails."""
        G = self.values
        assert G.shape[0] == G.shape[1], "not square"
        assert np.array_equal(G, G.T), "not symmetric"
        trace = float(np.trace(G))
        lo = float(np.linalg.eigvalsh(G).min()) if len(G) else 0.0
        assert lo >= -tol_eig * max(trace, 1.0), f"min eigenvalue {lo} below -{tol_eig}*trace"
        if self.normalized:
            assert np.all(np.abs(np.diag(G) - 1.0) <= tol_diag), "diagonal not 1"

    def to_csv(self, path=None) -> str:
        rows = ["i,j,value"]
        n = len(self.values)
        for i in range(n):
            for j in range(i, n):
                rows.append(f"{i},{j},{float(self.values[i, j]):.12g}")
        text = "\n".join(rows) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text


def gram(vectors: Sequence, normalize_vectors: bool = True) -> GramMatrix:
    """Gram matrix of a homogeneous list of SPI or GSPI vectors."""
    if not vectors:
        return GramMatrix(np.zeros((0, 0)), normalize_vectors)
    kinds = {type(v) for v in vectors}
    if len(kinds) != 1:
        raise TypeError("mixed SPI/GSPI vectors")
    if isinstance(vectors[0], GspiVector) and len({v.binning for v in vectors}) != 1:
        raise ValueError("vectors use different binning schemes")
    index = FeatureIndex.from_vectors(vectors)
    if normalize_vectors:
        X = index.transform(vectors, normalized=True)
        G = X @ X.T
    else:
        # integer counts: exact
        X = index.transform(vectors, normalized=False).astype(np.int64)
        G = (X @ X.T).astype(np.float64)
    G = (G + G.T) / 2.0
    return GramMatrix(G, normalize_vectors)


def cosine(a, b) -> float:
    """Normalized kernel value k(a,b) / sqrt(k(a,a) k(b,b))."""
    return kernel(a, b) / math.sqrt(kernel(a, a) * kernel(b, b))

