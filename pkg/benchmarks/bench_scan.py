"""Time the full triple scan on random function sets with both kernel backends.

    python3 benchmarks/bench_scan.py [--n 8] [--members 64] [--repeat 3]
"""

import argparse
import time

import numpy as np

from indepkit import _accel
from indepkit.funcset import AttributeSet, FunctionSet
from indepkit.triples import decode_all


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[6, 7, 8])
    ap.add_argument("--members", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1729)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    print(f"{'n':>3} {'members':>8} {'triples':>8} " + " ".join(f"{b + ' s':>10}" for b in backends) + ("  speedup" if len(backends) == 2 else ""))
    for n in args.n:
        m = min(args.members, 2**n)
        codes = rng.choice(2**n, size=m, replace=False)
        rows = (codes[:, None] >> np.arange(n)) & 1
        sigma = FunctionSet(AttributeSet(tuple(f"a{i}" for i in range(n))), rows, (0, 1))
        ids, bound = sigma.id_table
        xm, ym, zm = decode_all(n)
        if "numba" in backends:  # compile outside the timed region
            _accel.scan_set(ids[:, :2], bound, xm[:4], ym[:4], zm[:4], force="numba")
        results = {}
        for b in backends:
            results[b] = _best(lambda b=b: _accel.scan_set(ids, bound, xm, ym, zm, force=b), args.repeat)
        if len(backends) == 2:
            assert (results["numpy"][1] == results["numba"][1]).all(), "backends disagree"
        row = f"{n:>3} {m:>8} {4**n:>8} " + " ".join(f"{results[b][0]:>10.4f}" for b in backends)
        if len(backends) == 2:
            row += f"  {results['numpy'][0] / results['numba'][0]:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
