import importlib.util
import os
import subprocess
import sys

import numpy as np
import pytest

from chromalab import _pykernels as P
from chromalab import kernels
from chromalab.graph import SampleSpec, complement, sample_gnp

HAVE_EXT = importlib.util.find_spec("chromalab._ckernels") is not None
needs_ext = pytest.mark.skipif(not HAVE_EXT, reason="compiled kernels not built")


def cases(count=120):
    sizes = [1, 2, 7, 30, 63, 64, 65, 130]
    probs = [0.0, 0.05, 0.3, 0.7, 0.95, 1.0]
    for t in range(count):
        n, p = sizes[t % len(sizes)], probs[t % len(probs)]
        g = sample_gnp(SampleSpec(n, p, 1000 + t))
        rng = np.random.default_rng(t)
        members = sorted(rng.choice(n, size=rng.integers(1, n + 1), replace=False).tolist())
        yield t, g, members


def test_backend_selection_default():
    assert kernels.BACKEND == ("cython" if HAVE_EXT else "python")


def test_pure_python_override():
    env = dict(os.environ, CHROMALAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from chromalab import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
def test_backends_agree():
    from chromalab import _ckernels as C

    for t, g, members in cases():
        assert P.min_degree_vertex(g, members) == C.min_degree_vertex(g, members), t
        assert P.greedy_independent_set(g, members) == C.greedy_independent_set(g, members), t
        assert P.degeneracy_order(g, members) == C.degeneracy_order(g, members), t
        order, _ = P.degeneracy_order(g, members)
        assert P.color_in_order(g, order) == C.color_in_order(g, order), t
        assert P.max_matching(g) == C.max_matching(g), t
        assert P.max_matching(complement(g)) == C.max_matching(complement(g)), t
        for size in (1, 2, 3, 4):
            assert P.count_independent_sets(g, size, 10**7) == C.count_independent_sets(g, size, 10**7)
        for r in (1, 2, 3):
            assert P.independent_set_packing(g, r) == C.independent_set_packing(g, r), (t, r)


@needs_ext
def test_listing_and_search_agree():
    from chromalab import _ckernels as C

    for t, g, _ in cases(60):
        for r in (2, 3):
            if C.count_independent_sets(g, r, 10**8) > 4_000:
                continue
            a = P.list_independent_sets(g, r, 10**6)
            b = C.list_independent_sets(g, r, 10**6)
            assert a.dtype == b.dtype and np.array_equal(a, b), (t, r)
            classes, _ = P.independent_set_packing(g, r)
            index = {tuple(row): i for i, row in enumerate(a.tolist())}
            init = [index[tuple(c)] for c in classes]
            assert P.improve_packing(g.n, a, init, 200, t) == C.improve_packing(g.n, b, init, 200, t)


@needs_ext
def test_count_limit_raises_in_both():
    from chromalab import _ckernels as C

    g = sample_gnp(SampleSpec(60, 0.1, 3))
    for mod in (P, C):
        with pytest.raises(kernels.LIMIT_ERRORS):
            mod.count_independent_sets(g, 5, 100)
        with pytest.raises(kernels.LIMIT_ERRORS):
            mod.list_independent_sets(g, 3, 10)


def test_listing_matches_count():
    g = sample_gnp(SampleSpec(40, 0.6, 2))
    for r in (1, 2, 3, 4):
        sets = kernels.list_independent_sets(g, r, 10**6)
        assert len(sets) == kernels.count_independent_sets(g, r, 10**7)
        assert [tuple(s) for s in sets.tolist()] == sorted(tuple(s) for s in sets.tolist())
        rows = g.rows
        for s in sets.tolist():
            assert all(not rows[u] >> v & 1 for u in s for v in s)


def test_improve_packing_returns_disjoint_family():
    g = sample_gnp(SampleSpec(120, 0.9, 4))
    sets = kernels.list_independent_sets(g, 3, 10**6)
    classes, _ = kernels.independent_set_packing(g, 3)
    index = {tuple(row): i for i, row in enumerate(sets.tolist())}
    chosen = kernels.improve_packing(g.n, sets, [index[tuple(c)] for c in classes], 2000, 0)
    used = [v for i in chosen for v in sets[i].tolist()]
    assert len(used) == len(set(used))
    assert len(chosen) >= len(classes)


def test_benchmark_script_runs():
    import pathlib
    import subprocess
    import sys

    pytest.importorskip("chromalab._ckernels")
    script = pathlib.Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--n", "60", "--repeat", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    rows = out.stdout.splitlines()[2:]
    assert len(rows) == 8 and all(r.endswith("yes") for r in rows)
