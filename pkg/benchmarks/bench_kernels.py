#!/usr/bin/env python3
"""Benchmark the JIT kernels against their pure-numpy twins.

Builds one instance larger than the desk-scale test cases, evaluates
every batch kernel on a random batch of selection masks with both
backends, checks they agree, and prints timings.

    python3 benchmarks/bench_kernels.py [--batch 200000] [--repeat 3]
"""

import argparse
import itertools
import random
import time

import numpy as np

from predfix import ControlInstance
from predfix import _kernels_numba, _kernels_numpy


def build_instance() -> ControlInstance:
    times = ["t1", "t2", "t3", "t4"]
    controls = {
        "c" + "".join(bits): dict(zip(times, bits))
        for bits in itertools.product("01", repeat=4)
    }
    rng = random.Random(1)
    unc_rows = rng.sample(list(itertools.product("01", repeat=4)), 8)
    uncertainties = {
        "w" + "".join(bits): dict(zip(times, bits)) for bits in unc_rows
    }
    return ControlInstance.build(
        times,
        ["0", "1"],
        ["0", "1"],
        controls,
        uncertainties,
        [["t1"], ["t1", "t2"], ["t1", "t2", "t3"]],
        {w: list(controls) for w in uncertainties},
    )


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--batch", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    inst = build_instance()
    t = inst.tables
    rng = np.random.default_rng(2)
    phis = rng.integers(
        0, inst.full_control_mask + 1, size=(args.batch, len(inst.uncertainties))
    ).astype(np.int64)

    shared = (t.agree_mask, t.trace_class, t.class_members, t.class_count)
    jobs = [
        ("refine_traces", shared),
        ("refine_traces_excl", shared),
        ("refine_elements", (t.omega_agree, t.control_agree)),
        ("na_implication", (t.omega_agree, t.control_agree)),
        ("na_trace_eq", (t.agree_mask, t.trace_class, t.class_count)),
        ("na_symmetric", (t.omega_agree, t.trace_class)),
        ("feasible_masks", (*shared, t.full_control_mask)),
        ("stabilize", (*shared, 200)),
    ]

    print(f"instance: {inst}")
    print(f"batch: {args.batch} selection maps, best of {args.repeat}\n")
    print(f"{'kernel':<20}{'numba':>12}{'numpy':>12}{'speedup':>10}")

    for name, extra in jobs:
        fn_nb = getattr(_kernels_numba, name)
        fn_np = getattr(_kernels_numpy, name)
        fn_nb(phis[:16], *extra)  # JIT warmup
        results = {}
        timings = {}
        for label, fn in (("numba", fn_nb), ("numpy", fn_np)):
            best = float("inf")
            for _ in range(args.repeat):
                start = time.perf_counter()
                out = fn(phis, *extra)
                best = min(best, time.perf_counter() - start)
            results[label] = out
            timings[label] = best
        a, b = results["numba"], results["numpy"]
        if isinstance(a, tuple):
            agree = all(np.array_equal(x, y) for x, y in zip(a, b))
        else:
            agree = np.array_equal(a, b)
        if not agree:
            raise SystemExit(f"backend disagreement in {name}")
        ratio = timings["numpy"] / timings["numba"]
        print(
            f"{name:<20}{timings['numba']:>10.3f}s{timings['numpy']:>10.3f}s"
            f"{ratio:>9.1f}x"
        )


if __name__ == "__main__":
    main()
