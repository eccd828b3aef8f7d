# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: BFS shortest-path counting and the Pegasos step loop.

Every function here has a line-for-line counterpart in ``_pycore`` with the
same signature and output; ``gspi._backend`` picks one at import.
"""
import numpy as np

from libc.math cimport sqrt
from libc.stdint cimport int64_t, uint64_t

DEF UNREACHED = -1

SATURATED = np.uint64(0xFFFFFFFFFFFFFFFF)
cdef uint64_t _SAT = 0xFFFFFFFFFFFFFFFFULL


cdef inline uint64_t _sat_add(uint64_t a, uint64_t b) noexcept nogil:
    cdef uint64_t s = a + b
    if s < a or a == _SAT or b == _SAT:
        return _SAT
    return s


cdef Py_ssize_t _bfs(const int64_t[::1] indptr, const int64_t[::1] indices,
                     Py_ssize_t src, int64_t[::1] dist, uint64_t[::1] sigma,
                     int64_t[::1] queue) noexcept nogil:
    """Single-source BFS; fills dist/sigma, returns the number of nodes reached."""
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t head = 0, tail = 0, k, u, v
    cdef int64_t du
    for k in range(n):
        dist[k] = UNREACHED
        sigma[k] = 0
    dist[src] = 0
    sigma[src] = 1
    queue[tail] = src
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] == UNREACHED:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
            if dist[v] == du + 1:
                sigma[v] = _sat_add(sigma[v], sigma[u])
    return tail


def sssp(const int64_t[::1] indptr, const int64_t[::1] indices, Py_ssize_t source):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.uint64)
    queue = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] d = dist
    cdef uint64_t[::1] s = sigma
    cdef int64_t[::1] q = queue
    with nogil:
        _bfs(indptr, indices, source, d, s, q)
    return dist, sigma


def all_pairs(const int64_t[::1] indptr, const int64_t[::1] indices):
    """Distances and path counts for every unordered pair ``s < v``.

    Pairs are laid out row-major: (0,1), (0,2), ..., (0,n-1), (1,2), ...
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t npairs = n * (n - 1) // 2
    pair_dist = np.empty(npairs, dtype=np.int64)
    pair_sigma = np.empty(npairs, dtype=np.uint64)
    cdef int64_t[::1] pd = pair_dist
    cdef uint64_t[::1] ps = pair_sigma
    cdef int64_t[::1] d = np.empty(n, dtype=np.int64)
    cdef uint64_t[::1] s = np.empty(n, dtype=np.uint64)
    cdef int64_t[::1] q = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t src, v, pos = 0
    with nogil:
        for src in range(n):
            _bfs(indptr, indices, src, d, s, q)
            for v in range(src + 1, n):
                pd[pos] = d[v]
                ps[pos] = s[v]
                pos += 1
    return pair_dist, pair_sigma


def pegasos(const double[:, ::1] X, const double[::1] y, const int64_t[::1] order,
            double lam, bint project):
    """Run ``len(order)`` Pegasos steps from w = 0 and return the weights."""
    cdef Py_ssize_t dim = X.shape[1]
    cdef Py_ssize_t steps = order.shape[0]
    w_arr = np.zeros(dim, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef Py_ssize_t t, j, i
    cdef double eta, shrink, margin, norm_sq, radius, scale
    radius = 1.0 / sqrt(lam)
    with nogil:
        for t in range(1, steps + 1):
            i = order[t - 1]
            eta = 1.0 / (lam * t)
            margin = 0.0
            for j in range(dim):
                margin += w[j] * X[i, j]
            margin *= y[i]
            shrink = 1.0 - eta * lam
            for j in range(dim):
                w[j] *= shrink
            if margin < 1.0:
                for j in range(dim):
                    w[j] += eta * y[i] * X[i, j]
            if project:
                norm_sq = 0.0
                for j in range(dim):
                    norm_sq += w[j] * w[j]
                if norm_sq > radius * radius:
                    scale = radius / sqrt(norm_sq)
                    for j in range(dim):
                        w[j] *= scale
    return w_arr
