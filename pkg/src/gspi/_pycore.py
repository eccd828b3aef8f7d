"""Pure-Python implementations of the hot loops in ``_core.pyx``.

Same signatures and outputs as the compiled module. Path counts are Python
ints internally and saturate at 2**64 - 1 when stored, mirroring the
uint64 counters of the compiled version.
"""
from collections import deque

import numpy as np

UNREACHED = -1
SATURATED = np.uint64(0xFFFFFFFFFFFFFFFF)
_SAT = (1 << 64) - 1


def _neighbor_lists(indptr, indices):
    ip = indptr.tolist()
    ix = indices.tolist()
    return [ix[ip[u]:ip[u + 1]] for u in range(len(ip) - 1)]


def _bfs(adj, src, n):
    dist = [UNREACHED] * n
    sigma = [0] * n
    dist[src] = 0
    sigma[src] = 1
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u]
        su = sigma[u]
        for v in adj[u]:
            if dist[v] == UNREACHED:
                dist[v] = du + 1
                queue.append(v)
            if dist[v] == du + 1:
                sigma[v] += su
    return dist, sigma


def _clip(values):
    return np.array([min(s, _SAT) for s in values], dtype=np.uint64)


def sssp(indptr, indices, source):
    adj = _neighbor_lists(indptr, indices)
    dist, sigma = _bfs(adj, int(source), len(adj))
    return np.asarray(dist, dtype=np.int64), _clip(sigma)


def all_pairs(indptr, indices):
    adj = _neighbor_lists(indptr, indices)
    n = len(adj)
    pair_dist = []
    pair_sigma = []
    for src in range(n):
        dist, sigma = _bfs(adj, src, n)
        pair_dist.extend(dist[src + 1:])
        pair_sigma.extend(sigma[src + 1:])
    return np.asarray(pair_dist, dtype=np.int64), _clip(pair_sigma)


def pegasos(X, y, order, lam, project):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.zeros(X.shape[1])
    radius = 1.0 / np.sqrt(lam)
    for t, i in enumerate(order.tolist(), start=1):
        eta = 1.0 / (lam * t)
        margin = y[i] * float(w @ X[i])
        w *= 1.0 - eta * lam
        if margin < 1.0:
            w += eta * y[i] * X[i]
        if project:
            norm_sq = float(w @ w)
            if norm_sq > radius * radius:
                w *= radius / np.sqrt(norm_sq)
    return w
