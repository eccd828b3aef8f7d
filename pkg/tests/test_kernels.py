import math

import numpy as np
import pytest

from gspi.features import GspiVector, SpiVector, both_vectors, gspi_vector, spi_vector
from gspi.graph import complete_graph, cycle_graph, erdos_renyi, path_graph
from gspi.kernels import FeatureIndex, GramMatrix, cosine, gram, k_gspi, k_spi, kernel
from oracles import gspi_double_sum, pair_multisets, random_small_graph_pairs, spi_double_sum


def test_k_spi_examples():
    p3, k4 = spi_vector(path_graph(3)), spi_vector(complete_graph(4))
    assert k_spi(p3, p3) == 5
    assert k_spi(p3, k4) == 12


def test_k_gspi_examples():
    c4, k4 = gspi_vector(cycle_graph(4)), gspi_vector(complete_graph(4))
    assert k_gspi(c4, c4) == 20
    assert k_gspi(c4, k4) == 24


def test_k_gspi_rejects_mismatched_binning():
    with pytest.raises(ValueError):
        k_gspi(gspi_vector(cycle_graph(4), 1), gspi_vector(cycle_graph(4), 2))


def test_kernel_type_dispatch():
    with pytest.raises(TypeError):
        kernel(spi_vector(cycle_graph(4)), gspi_vector(cycle_graph(4)))


@pytest.mark.parametrize("width", [1, 2, 10])
def test_explicit_kernels_equal_indicator_sums(width):
    graphs = random_small_graph_pairs(seed=5, count=40, n_max=8)
    for (ga, ea), (gb, eb) in graphs:
        pa = pair_multisets(ga.node_count, ea)
        pb = pair_multisets(gb.node_count, eb)
        sa, gsa = both_vectors(ga, width)
        sb, gsb = both_vectors(gb, width)
        assert k_spi(sa, sb) == spi_double_sum(pa, pb)
        assert k_gspi(gsa, gsb) == gspi_double_sum(pa, pb, width)


def test_cauchy_schwarz_and_normalized_range():
    vecs = [both_vectors(erdos_renyi(20, p, seed=s)) for s in range(10) for p in (0.1, 0.3)]
    for a_s, a_g in vecs:
        for b_s, b_g in vecs:
            for a, b in ((a_s, b_s), (a_g, b_g)):
                assert kernel(a, b) ** 2 <= kernel(a, a) * kernel(b, b)
                assert 0.0 <= cosine(a, b) <= 1.0 + 1e-12


def test_equal_gspi_implies_equal_spi():
    graphs = [g for g, _ in (pair[0] for pair in random_small_graph_pairs(seed=9, count=150, n_max=6))]
    vecs = [both_vectors(g) for g in graphs]
    for sa, ga in vecs:
        for sb, gb in vecs:
            if ga == gb:
                assert sa == sb


def test_feature_index_is_sorted_and_order_independent():
    vs = [gspi_vector(cycle_graph(5)), gspi_vector(path_graph(4)), gspi_vector(complete_graph(3))]
    a = FeatureIndex.from_vectors(vs)
    b = FeatureIndex.from_vectors(vs[::-1])
    assert a == b
    assert list(a.keys) == sorted(a.keys)
    assert len(set(a.keys)) == a.dim
    assert FeatureIndex.from_json(a.to_json()) == a


def test_feature_index_transform_drops_unknown_keys():
    index = FeatureIndex.from_vectors([spi_vector(path_graph(3))])
    X = index.transform([SpiVector({1: 3, 2: 4, 5: 12})], normalized=True)
    # normalized against the full vector (norm 13), unknown key dropped
    assert X.tolist() == [[3 / 13, 4 / 13]]


def test_gram_copies_of_path():
    G = gram([spi_vector(path_graph(3))] * 2, normalize_vectors=True)
    assert np.allclose(G.values, [[1, 1], [1, 1]], atol=1e-12)
    G.check()


def test_gram_path_vs_complete():
    G = gram([spi_vector(path_graph(3)), spi_vector(complete_graph(4))], normalize_vectors=True)
    assert G.values[0, 1] == pytest.approx(12 / (math.sqrt(5) * 6), abs=1e-12)
    assert G.values[0, 1] == pytest.approx(0.8944, abs=1e-4)


def test_gram_unnormalized_is_exact():
    vs = [spi_vector(path_graph(3)), spi_vector(complete_graph(4))]
    G = gram(vs, normalize_vectors=False)
    assert G.values.tolist() == [[5, 12], [12, 36]]
    G.check()


def test_gram_propagates_zero_vector_error():
    with pytest.raises(ValueError):
        gram([SpiVector({}), spi_vector(path_graph(3))], normalize_vectors=True)


def test_gram_rejects_mixed_binning():
    with pytest.raises(ValueError):
        gram([gspi_vector(cycle_graph(4), 1), gspi_vector(cycle_graph(4), 2)])


def test_gram_invariants_on_random_datasets():
    rng = np.random.default_rng(3)
    for _ in range(10):
        graphs = [erdos_renyi(int(rng.integers(5, 40)), float(rng.uniform(0.1, 0.6)), seed=rng)
                  for _ in range(12)]
        graphs = [g for g in graphs if g.edge_count]
        spi, gspi = zip(*(both_vectors(g) for g in graphs))
        for vs in (list(spi), list(gspi)):
            G = gram(vs, normalize_vectors=True)
            G.check()
            assert np.all(G.values >= -1e-12) and np.all(G.values <= 1 + 1e-12)


def test_gram_csv(tmp_path):
    vs = [spi_vector(path_graph(3)), spi_vector(complete_graph(4))]
    text = gram(vs, normalize_vectors=True).to_csv(tmp_path / "g.csv")
    assert text.splitlines() == ["i,j,value", "0,0,1", "0,1,0.894427191", "1,1,1"]
    assert (tmp_path / "g.csv").read_text() == text


def test_gram_check_detects_violations():
    with pytest.raises(AssertionError):
        GramMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]), True).check()  # indefinite
    with pytest.raises(AssertionError):
        GramMatrix(np.array([[1.0, 0.5], [0.4, 1.0]]), True).check()


def test_gspi_vector_type():
    assert isinstance(gspi_vector(cycle_graph(4)), GspiVector)
