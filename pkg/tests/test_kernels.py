import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intergraph import kernels, presets
from intergraph.igraph import _pack, build
from intergraph.permgrp import all_subgroups

BACKENDS = kernels.backends()


def test_backend_selection():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


@pytest.mark.skipif(bool(os.environ.get("INTERGRAPH_PURE_PYTHON")), reason="fallback forced")
def test_compiled_backend_present():
    # the package ships a compiled extension; losing it silently would only show up as slowness
    assert "cython" in BACKENDS, "compiled kernels failed to build"


@pytest.fixture(scope="module")
def a6():
    return presets.load("a6").group()


@pytest.mark.parametrize("backend", list(BACKENDS))
def test_coset_closure_gives_subgroups(a6, backend):
    k = BACKENDS[backend]
    rng = np.random.default_rng(0)
    for _ in range(40):
        gens = rng.integers(0, a6.order, size=rng.integers(1, 3)).astype(np.int32)
        out = k.coset_closure(a6.mult, np.array([0], dtype=np.int32), gens)
        s = set(out.tolist())
        assert len(s) == len(out)
        assert all(int(a6.mult[x, y]) in s for x in s for y in gens)
        assert a6.order % len(s) == 0


def test_coset_closure_backends_agree(a6):
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend unavailable")
    L = all_subgroups(presets.load("a5").group())
    G = L.group
    rng = np.random.default_rng(1)
    for S in L:
        gens = rng.integers(0, G.order, size=2).astype(np.int32)
        a = BACKENDS["python"].coset_closure(G.mult, S.elements.astype(np.int32), gens)
        b = BACKENDS["cython"].coset_closure(G.mult, S.elements.astype(np.int32), gens)
        assert sorted(a.tolist()) == sorted(b.tolist())


def _naive_bfs(dense, s):
    V = len(dense)
    dist = [-1] * V
    dist[s] = 0
    queue = [s]
    for u in queue:
        for v in np.flatnonzero(dense[u]):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(int(v))
    reached = [d for d in dist if d >= 0]
    ecc = max(reached)
    return ecc, dist.index(ecc), len(reached)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 150), st.floats(0.0, 0.2), st.integers(0, 2**32 - 1))
def test_bfs_sweep_random_graphs(V, p, seed):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((V, V)) < p, 1)
    dense = upper | upper.T
    adj = _pack(dense)
    sources = np.arange(V, dtype=np.int64)
    expected = [_naive_bfs(dense, s) for s in range(V)]
    for k in BACKENDS.values():
        ecc, far, reach = k.bfs_sweep(adj, sources)
        assert list(zip(ecc.tolist(), far.tolist(), reach.tolist())) == expected


def test_bfs_sweep_on_lattice_graph():
    g = build(all_subgroups(presets.load("psl2_7").group()))
    src = np.arange(len(g), dtype=np.int64)
    res = [tuple(x.tolist() for x in k.bfs_sweep(g.adj, src)) for k in BACKENDS.values()]
    assert all(r == res[0] for r in res)
