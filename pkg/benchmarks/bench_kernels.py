"""Time the compiled and pure-Python kernel backends on the same inputs.

    python benchmarks/bench_kernels.py [--n 400] [--repeat 3]

Each row reports the best of ``--repeat`` runs per backend and the speedup.
Outputs are compared too, since both backends must agree exactly.
"""

import argparse
import sys
import timeit

from chromalab import _pykernels
from chromalab.graph import SampleSpec, complement, sample_gnp

try:
    from chromalab import _ckernels
except ImportError:
    _ckernels = None


def cases(n):
    sparse = sample_gnp(SampleSpec(n, 0.05, 1))
    mid = sample_gnp(SampleSpec(n, 0.5, 2))
    dense = sample_gnp(SampleSpec(n, 1 - 2.0 / n, 3))
    packing = sample_gnp(SampleSpec(n, 1 - n ** -0.55, 4))
    everyone = tuple(range(n))

    def improve(k):
        sets = k.list_independent_sets(packing, 3, 500_000)
        return k.improve_packing(n, sets, [], 20 * len(sets), 0)

    return [
        ("greedy_independent_set", lambda k: k.greedy_independent_set(mid, everyone)),
        ("degeneracy_order", lambda k: k.degeneracy_order(mid, everyone)),
        ("color_in_order", lambda k: k.color_in_order(mid, list(range(n)))),
        ("max_matching (complement)", lambda k: k.max_matching(complement(dense))),
        ("max_matching (sparse)", lambda k: k.max_matching(sparse)),
        ("count_independent_sets i=3", lambda k: k.count_independent_sets(dense, 3, 10**8)),
        ("independent_set_packing r=3", lambda k: k.independent_set_packing(packing, 3)),
        ("list + improve_packing r=3", improve),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run: python setup.py build_ext --inplace")
        return 1
    print(f"n={args.n}  compiled build: {_ckernels.BUILD_ID}")
    print(f"{'kernel':<30}{'python s':>11}{'cython s':>11}{'speedup':>10}  agree")
    for name, fn in cases(args.n):
        same = _normalise(fn(_pykernels)) == _normalise(fn(_ckernels))
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<30}{py:>11.4f}{cy:>11.4f}{py / cy:>9.1f}x  {'yes' if same else 'NO'}")
    return 0


def _normalise(out):
    # numpy arrays and lists compare as nested lists
    if hasattr(out, "tolist"):
        return out.tolist()
    if isinstance(out, tuple):
        return tuple(_normalise(x) for x in out)
    return out


if __name__ == "__main__":
    sys.exit(main())
