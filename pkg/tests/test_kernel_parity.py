"""The compiled kernels and the pure-Python fallback must agree bit for bit."""

import random

import numpy as np
import pytest

from citenet._kern import BACKEND, _fallback

try:
    from citenet._kern import _speedups
except ImportError:
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None, reason="compiled kernels not built")


def random_csr(rng, n, p, symmetric=False):
    rows = [[] for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                rows[u].append(v)
                if symmetric:
                    rows[v].append(u)
    rows = [sorted(set(r)) for r in rows]
    indptr = np.zeros(n + 1, dtype=np.int32)
    for i, r in enumerate(rows):
        indptr[i + 1] = indptr[i] + len(r)
    indices = np.array([v for r in rows for v in r], dtype=np.int32)
    weights = np.ones(len(indices), dtype=np.float64)
    return indptr, indices, weights


@needs_ext
def test_backend_is_compiled_by_default():
    assert BACKEND == "compiled"


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_betweenness_bit_equal(seed):
    rng = random.Random(seed)
    indptr, indices, _ = random_csr(rng, rng.randint(2, 30), 0.2)
    a = _fallback.brandes_betweenness(indptr, indices)
    b = _speedups.brandes_betweenness(indptr, indices)
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_edge_betweenness_bit_equal(seed):
    rng = random.Random(seed + 100)
    indptr, indices, _ = random_csr(rng, rng.randint(2, 25), 0.3, symmetric=True)
    a = _fallback.brandes_edge_betweenness(indptr, indices)
    b = _speedups.brandes_edge_betweenness(indptr, indices)
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_closeness_bit_equal(seed):
    rng = random.Random(seed + 200)
    indptr, indices, _ = random_csr(rng, rng.randint(2, 30), 0.2)
    sums_a, reach_a = _fallback.closeness_sums(indptr, indices)
    sums_b, reach_b = _speedups.closeness_sums(indptr, indices)
    assert np.array_equal(sums_a, sums_b)
    assert np.array_equal(reach_a, reach_b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_pagerank_bit_equal(seed):
    rng = random.Random(seed + 300)
    n = rng.randint(2, 30)
    out_indptr, out_indices, _ = random_csr(rng, n, 0.2)
    # rebuild the in-CSR from the out-CSR
    rows = [[] for _ in range(n)]
    for u in range(n):
        for k in range(out_indptr[u], out_indptr[u + 1]):
            rows[int(out_indices[k])].append(u)
    in_indptr = np.zeros(n + 1, dtype=np.int32)
    for i, r in enumerate(rows):
        r.sort()
        in_indptr[i + 1] = in_indptr[i] + len(r)
    in_indices = np.array([v for r in rows for v in r] or [], dtype=np.int32)
    out_degree = np.diff(out_indptr).astype(np.int32)
    a, it_a, conv_a = _fallback.pagerank_power(in_indptr, in_indices, out_degree, 0.85, 1e-9, 1000)
    b, it_b, conv_b = _speedups.pagerank_power(in_indptr, in_indices, out_degree, 0.85, 1e-9, 1000)
    assert np.array_equal(a, b)
    assert (it_a, conv_a) == (it_b, conv_b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_eigenvector_bit_equal(seed):
    rng = random.Random(seed + 400)
    indptr, indices, _ = random_csr(rng, rng.randint(2, 20), 0.4, symmetric=True)
    a, conv_a = _fallback.eigenvector_power(indptr, indices, 1e-9, 1000)
    b, conv_b = _speedups.eigenvector_power(indptr, indices, 1e-9, 1000)
    assert conv_a == conv_b
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_louvain_pass_bit_equal(seed):
    rng = random.Random(seed + 500)
    n = rng.randint(3, 25)
    indptr, indices, weights = random_csr(rng, n, 0.3, symmetric=True)
    strength = np.array(
        [weights[indptr[v]: indptr[v + 1]].sum() for v in range(n)], dtype=np.float64
    )
    two_m = float(strength.sum())
    if two_m == 0.0:
        return
    order = list(range(n))
    rng.shuffle(order)
    order = np.array(order, dtype=np.int32)

    comm_a = np.arange(n, dtype=np.int32)
    tot_a = strength.copy()
    comm_b = np.arange(n, dtype=np.int32)
    tot_b = strength.copy()
    for _ in range(4):
        moves_a = _fallback.louvain_pass(
            indptr, indices, weights, strength, comm_a, tot_a, order, two_m, 1.0
        )
        moves_b = _speedups.louvain_pass(
            indptr, indices, weights, strength, comm_b, tot_b, order, two_m, 1.0
        )
        assert moves_a == moves_b
        assert np.array_equal(comm_a, comm_b)
        assert np.array_equal(tot_a, tot_b)
        if moves_a == 0:
            break
