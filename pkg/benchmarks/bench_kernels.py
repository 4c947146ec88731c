"""Compare the Cython and numpy backends of the point-reduction kernel.

    python benchmarks/bench_kernels.py [--points 200000] [--repeat 3]

Points are drawn uniformly on the circle |z| = r; points nearer the unit
circle need more reduction steps.  The end-to-end row times one box
integral of a compact-core field under each backend.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from fuchsian_carleson import _kernels
from fuchsian_carleson.group import schottky_from_s


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if _kernels.compiled_backend is None:
        raise SystemExit("Cython extension not built; run `pip install -e . --no-build-isolation` first")
    group = schottky_from_s([0.0, math.pi / 2], 0.95)
    ga, gb = group.letter_arrays()
    rng = np.random.default_rng(0)

    print(f"{'r':>8} {'mean steps':>10} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for r in (0.9, 0.99, 0.999, 0.9999):
        z = r * np.exp(2j * np.pi * rng.uniform(size=args.points))
        steps = _kernels.compiled_backend.reduce_points(z, ga, gb, 10**5, 1e-13)[4]
        tc = best_of(lambda: _kernels.compiled_backend.reduce_points(z, ga, gb, 10**5, 1e-13), args.repeat)
        tp = best_of(lambda: _kernels.python_backend.reduce_points(z, ga, gb, 10**5, 1e-13), args.repeat)
        print(f"{r:>8} {steps.mean():>10.2f} {tc:>10.4f} {tp:>10.4f} {tp / tc:>8.1f}")

    # end to end: the active backend is chosen per call through _kernels._active
    from fuchsian_carleson.beltrami import BeltramiField, BeltramiSpec
    from fuchsian_carleson.carleson import CarlesonBox, MeasureDensity, box_integral
    from fuchsian_carleson.domain import build_domain

    field = BeltramiField(BeltramiSpec.compact_core(0.5, 0.5), group, build_domain(group, 3))
    box = CarlesonBox.on_circle(0.0, 0.125)
    row = {}
    for name, backend in (("cython", _kernels.compiled_backend), ("python", _kernels.python_backend)):
        _kernels._active = backend
        row[name] = best_of(lambda: box_integral(MeasureDensity(field), box, tol=1e-2), 1)
    print(f"box_integral compact_core r=1/8: cython {row['cython']:.2f} s, python {row['python']:.2f} s")


if __name__ == "__main__":
    main()
