"""Compare the compiled and pure-Python lifting kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]
"""

import argparse
import json
import random
import sys
import timeit

from iwt53 import _backend, _purelift


def cases(rng):
    for n in (64, 1024, 65536):
        x = [rng.randint(0, 255) for _ in range(n)]
        a, d = _purelift.forward(x, False)
        yield f"forward n={n}", lambda k, x=x: k.forward(x, False), max(1, 200000 // n)
        yield f"inverse n={n}", lambda k, a=a, d=d: k.inverse(a, d, False), max(1, 200000 // n)
    yield "detail_extrema bits=6", lambda k: k.detail_extrema(6, False), 1
    yield "approx_extrema bits=6", lambda k: k.approx_extrema(6, True), 1


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)
    if not _backend.COMPILED:
        print("compiled kernel not available; build with `pip install -e .`", file=sys.stderr)
        return 1
    rng = random.Random(0)
    rows = []
    for name, fn, number in cases(rng):
        t = {}
        for label, kernel in (("python", _purelift), ("cython", _backend._fast)):
            best = min(timeit.repeat(lambda: fn(kernel), number=number, repeat=args.repeat))
            t[label] = best / number
        rows.append({"case": name, **t, "speedup": t["python"] / t["cython"]})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
        for r in rows:
            print(f"{r['case']:<24}{r['python'] * 1e3:>10.3f}ms{r['cython'] * 1e3:>10.3f}ms{r['speedup']:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
