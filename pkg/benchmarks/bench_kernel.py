"""Compare the compiled and pure-Python kernels on long backward orbits.

    python3 benchmarks/bench_kernel.py [--steps N] [--repeat R]
"""

import argparse
import time
from pathlib import Path

from rauzy import kernel
from rauzy.induction import backward_orbit
from rauzy.io import load_surface

SURFACES = Path(__file__).resolve().parent.parent / "surfaces"


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    impls = kernel.backends()
    if "cython" not in impls:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'surface':<16}{'backend':<10}{'seconds':>10}{'steps/s':>12}")
    for name in ("independent", "saddle_ac", "frozen_bc"):
        s = load_surface(SURFACES / f"{name}.json")
        logs = {}
        for label, impl in impls.items():
            dt = best_time(lambda: logs.__setitem__(label, backward_orbit(
                s, args.steps, args.steps, backend=impl)), args.repeat)
            print(f"{name:<16}{label:<10}{dt:>10.3f}{args.steps / dt:>12.0f}")
        texts = {log.to_jsonl() for log in logs.values()}
        if len(texts) != 1:
            raise SystemExit(f"backends disagree on {name}")


if __name__ == "__main__":
    main()
