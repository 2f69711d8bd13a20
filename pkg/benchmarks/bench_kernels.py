"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per call for each kernel and backend, the
speed-up of the compiled one, and the same for whole computations
(the decision tree and the ensemble oracle) with the kernels swapped. Exits 0 even when the extension is missing
(the compiled column is then reported as unavailable).
"""
import argparse
import timeit

import numpy as np

import xdiscord as xd
from xdiscord import _kernels
from xdiscord._kernels import _pykernels

try:
    from xdiscord._kernels import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    z = np.linspace(0.2298, 0.6861, 4096)
    x = np.sort(rng.uniform(size=4097))
    y = rng.normal(size=4097)
    th = np.linspace(0.0, np.pi, 10_000)
    r = rng.uniform(size=10_000)
    curve = (0.24845847, 0.22824790, 0.45795769)
    return {
        "entropy_bits (1e4)": lambda m: m.entropy_bits(r),
        "curve_eval (4096)": lambda m: m.curve_eval(*curve, z),
        "curve_point (x1000)": lambda m: [m.curve_point(*curve, 0.3 + 1e-4 * i) for i in range(1000)],
        "lower_hull (4097)": lambda m: m.lower_hull(x, y),
        "steer_entropy (1e4)": lambda m: m.steer_entropy(0.5934, 0.5934, 0.2, 0.5, np.cos(th), np.sin(th)),
    }


KERNELS = ("curve_eval", "curve_point", "entropy_bits", "lower_hull", "steer_entropy")


def use(module):
    for name in KERNELS:
        setattr(_kernels, name, getattr(module, name))


def end_to_end():
    states = xd.random_xstates(100, 0)
    ellipses = [xd.ellipse_from_xstate(s) for s in states]
    return {
        "analyse (100 states)": lambda: [xd.analyse(s) for s in states],
        "ensemble N=4096 (x100)": lambda: [xd.ensemble_oracle(e, s.z_B, 4096) for e, s in zip(ellipses, states)],
        "vonneumann 1e4 (x100)": lambda: [xd.vonneumann_oracle(s) for s in states],
    }


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'python':>12}{'compiled':>12}{'speed-up':>10}")
    for name, call in cases(rng).items():
        t_py = best(lambda: call(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:<22}{t_py * 1e3:>10.3f}ms{'n/a':>12}{'':>10}")
            continue
        t_c = best(lambda: call(_ckernels), args.repeat)
        print(f"{name:<22}{t_py * 1e3:>10.3f}ms{t_c * 1e3:>10.3f}ms{t_py / t_c:>9.1f}x")
    if _ckernels is None:
        return
    print()
    original = {name: getattr(_kernels, name) for name in KERNELS}
    try:
        for name, call in end_to_end().items():
            use(_pykernels)
            t_py = best(call, args.repeat)
            use(_ckernels)
            t_c = best(call, args.repeat)
            print(f"{name:<22}{t_py * 1e3:>10.1f}ms{t_c * 1e3:>10.1f}ms{t_py / t_c:>9.1f}x")
    finally:
        for name, fn in original.items():
            setattr(_kernels, name, fn)


if __name__ == "__main__":
    main()
