import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gspi import available_backends  # noqa: E402
from gspi.graph import Graph  # noqa: E402


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def random_small_graph(rng, n_max=10, probs=(0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)):
    n = int(rng.integers(1, n_max + 1))
    p = float(rng.choice(probs))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges), edges


@pytest.fixture
def small_graphs():
    """200 seeded random graphs with n <= 10."""
    rng = np.random.default_rng(20240601)
    return [random_small_graph(rng) for _ in range(200)]
