"""Time the compiled core against the pure-Python fallback.

Usage: ``python3 benchmarks/bench_core.py [--n 200,600] [--repeat 3]``

Both backends run the same inputs; results are also checked for equality so
a speedup never hides a wrong answer.
"""
import argparse
import timeit

import numpy as np

from gspi._backend import available_backends, get_backend
from gspi.graph import erdos_renyi


def bench_all_pairs(n, repeat):
    g = erdos_renyi(n, 40 / n, seed=(n, 0))
    out, ref = {}, None
    for name in available_backends():
        core = get_backend(name)
        res = core.all_pairs(g.indptr, g.indices)
        if ref is None:
            ref = res
        assert all(np.array_equal(a, b) for a, b in zip(res, ref)), name
        out[name] = min(timeit.repeat(lambda: core.all_pairs(g.indptr, g.indices),
                                      number=1, repeat=repeat))
    return out


def bench_pegasos(samples, dim, steps, repeat):
    rng = np.random.default_rng(0)
    X = np.ascontiguousarray(rng.normal(size=(samples, dim)))
    y = np.where(X[:, 0] > 0, 1.0, -1.0)
    order = rng.integers(0, samples, size=steps, dtype=np.int64)
    out, ref = {}, None
    for name in available_backends():
        core = get_backend(name)
        w = core.pegasos(X, y, order, 1e-4, True)
        if ref is None:
            ref = w
        assert np.allclose(w, ref, rtol=1e-9, atol=1e-12), name
        out[name] = min(timeit.repeat(lambda: core.pegasos(X, y, order, 1e-4, True),
                                      number=1, repeat=repeat))
    return out


def _row(label, times):
    cells = [f"{times.get(b, float('nan')):10.4f}" for b in ("cython", "python")]
    speedup = times["python"] / times["cython"] if "cython" in times else float("nan")
    print(f"{label:<28}{cells[0]}{cells[1]}{speedup:9.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", default="200,600", help="comma-separated node counts")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if "cython" not in available_backends():
        print("compiled core not built; only the fallback is available")
    print(f"{'kernel':<28}{'cython s':>10}{'python s':>10}{'speedup':>10}")
    for n in (int(tok) for tok in args.n.split(",")):
        _row(f"all_pairs n={n}", bench_all_pairs(n, args.repeat))
    _row("pegasos 180x60, 18000 steps", bench_pegasos(180, 60, 18_000, args.repeat))


if __name__ == "__main__":
    main()
