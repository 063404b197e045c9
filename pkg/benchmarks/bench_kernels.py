"""Compiled vs NumPy pair-sum kernels on the workloads the norms generate.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row times one kernel on both backends, reports the speed-up and checks
that the two results agree.
"""

import argparse
import itertools
import math
import timeit

import numpy as np

from maxmult import _pykernels, kernels


def _offsets(d, reach, stride=1, half=False):
    rng = [range(-reach, reach + 1, stride)] * d + [range(1)] * (3 - d)
    offs = np.array([o for o in itertools.product(*rng) if any(o)], dtype=np.int64)
    if half:
        # one of each +-o pair: the Hoelder quotient is symmetric
        first = np.argmax(offs != 0, axis=1)
        offs = offs[offs[np.arange(len(offs)), first] > 0]
    norm = np.linalg.norm(offs, axis=1)
    order = np.argsort(norm, kind="stable")
    return np.ascontiguousarray(offs[order]), np.ascontiguousarray(norm[order])


def _field(shape, seed=0):
    # smooth radial bump with an oscillation, like a localised symbol
    axes = [np.linspace(-1, 1, n) if n > 1 else np.zeros(1) for n in shape]
    r = np.sqrt(sum(a**2 for a in np.meshgrid(*axes, indexing="ij")))
    g = np.exp(-8 * r**2) * np.exp(3j * np.pi * r)
    return np.ascontiguousarray(g.real), np.ascontiguousarray(g.imag), r


def hoelder_case(d, n, reach, stride):
    shape = (n,) * d + (1,) * (3 - d)
    re, im, _ = _field(shape)
    offs, norm = _offsets(d, reach, stride, half=True)
    denom = np.ascontiguousarray(norm**0.5)
    return f"hoelder_max d={d} n={n} reach={reach}", "hoelder_max", (re, im, offs, denom, stride)


def double_case(d, n, alpha=0.5):
    shape = (n,) * d + (1,) * (3 - d)
    re, im, r = _field(shape)
    r = r * n / 2.0  # in lattice units
    xw = np.ascontiguousarray(np.where((r > 1) & (r < n / 2), r ** (2 * alpha - d), 0.0))
    offs, olen = _offsets(d, int(math.ceil(r.max() / 2)))
    kern = np.ascontiguousarray(olen ** (-d - 2 * alpha))
    return f"frac_double_sum d={d} n={n}", "frac_double_sum", (re, im, xw, np.ascontiguousarray(r), offs, olen, kern)


def run(cases, repeat):
    rows = []
    for label, name, args in cases:
        py = getattr(_pykernels, name)
        c = getattr(kernels.compiled_backend, name)
        vp, vc = py(*args), c(*args)
        tp = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat))
        tc = min(timeit.repeat(lambda: c(*args), number=1, repeat=repeat))
        agree = abs(vp - vc) <= 1e-12 * max(abs(vp), 1e-300)
        rows.append((label, tp, tc, tp / tc, agree))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small sizes only")
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    cases = [hoelder_case(1, 4096, 256, 1), double_case(1, 4096), hoelder_case(2, 96, 12, 2), double_case(2, 48)]
    if not args.quick:
        cases += [hoelder_case(3, 32, 6, 2), double_case(3, 16)]
    print(f"{'kernel':40s} {'numpy s':>10s} {'cython s':>10s} {'speed-up':>9s}  agree")
    for label, tp, tc, sp, ok in run(cases, args.repeat):
        print(f"{label:40s} {tp:10.4f} {tc:10.4f} {sp:9.1f}  {ok}")


if __name__ == "__main__":
    main()
