"""Compare the compiled timing kernels against the pure-Python fallback.

Runs each hot operation over identical randomized workloads and reports
nanoseconds per call plus the compiled speedup, then times a full mapping
evaluation (decode + budgeting + bounds) under each backend.

Usage: python3 benchmarks/bench_kernels.py [--calls N]
"""

from __future__ import annotations

import argparse
import time
from random import Random

from isoexplore import _kernels_py

try:
    from isoexplore import _kernels
except ImportError:
    _kernels = None


def make_workloads(calls: int) -> dict[str, list[tuple]]:
    rng = Random(1)
    loads: dict[str, list[tuple]] = {k: [] for k in (
        "task_bus_slots", "bus_stall", "core_stall", "task_response",
        "msg_bus_slots", "adapter_latency", "route_latency", "min_task_weight",
    )}
    for _ in range(calls):
        st = rng.randrange(1, 60)
        sb = st * rng.randrange(1, 5)
        wcet = rng.randrange(1, 40_000)
        md = rng.randrange(0, 50)
        wb = rng.randrange(1, 6)
        pb = (wb + rng.randrange(0, 6)) * (sb + rng.randrange(0, 40))
        sc = rng.randrange(10, 3_000)
        wc = rng.randrange(1, 6)
        pc = (wc + rng.randrange(0, 6)) * (sc + rng.randrange(0, 40))
        loads["task_bus_slots"].append((wcet, md, st, sb))
        loads["bus_stall"].append((md, sb, wb, pb))
        loads["core_stall"].append((wcet + md * st, sc, wc, pc))
        loads["task_response"].append((wcet, md, st, sb, wb, pb, sc, wc, pc))
        loads["msg_bus_slots"].append((max(md, 1), sb, st))
        us, ww = pb, rng.randrange(1, 5)
        pu = (ww + rng.randrange(0, 5)) * (us + rng.randrange(0, 20))
        loads["adapter_latency"].append(
            (max(md, 1), st, max(md, 1), sb, wb, pb, us, ww, pu))
        tau = rng.randrange(1, 25)
        wl = rng.randrange(1, 5)
        pl = (wl + rng.randrange(0, 5)) * tau
        loads["route_latency"].append(
            (rng.randrange(1, 40), rng.randrange(1, 6), rng.randrange(0, 4),
             tau, wl, pl))
        loads["min_task_weight"].append(
            (rng.randrange(1, 200_000), wcet + md * st, sc, pc, wc + 3))
    return loads


def time_backend(module, loads: dict[str, list[tuple]]) -> dict[str, float]:
    out = {}
    for name, calls in loads.items():
        fn = getattr(module, name)
        started = time.perf_counter()
        for args in calls:
            fn(*args)
        out[name] = (time.perf_counter() - started) / len(calls) * 1e9
    return out


def time_decode(pure: bool, evaluations: int) -> float:
    """Full mapping evaluations per second, with one backend forced."""
    import importlib
    import os
    import subprocess
    import sys

    script = (
        "import time\n"
        "from random import Random\n"
        "from isoexplore import generate_spec\n"
        "from isoexplore.kernels import backend_name\n"
        "from isoexplore.mapping import decode, random_genotype\n"
        "spec = generate_spec('consumer', mesh=(4, 4), seed=0)\n"
        "rng = Random(0)\n"
        f"genos = [random_genotype(spec, rng) for _ in range({evaluations})]\n"
        "started = time.perf_counter()\n"
        "for g in genos:\n"
        "    decode(spec, g)\n"
        "elapsed = time.perf_counter() - started\n"
        f"print(backend_name(), {evaluations} / elapsed)\n"
    )
    env = dict(os.environ, ISOEXPLORE_PURE_PYTHON="1" if pure else "0")
    res = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True,
        check=True,
    )
    backend, rate = res.stdout.split()
    expected = "python" if pure else "cython"
    if backend != expected:
        raise SystemExit(f"wanted {expected} backend, got {backend}")
    return float(rate)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--calls", type=int, default=200_000,
                        help="calls per micro-benchmark (default 200000)")
    parser.add_argument("--evaluations", type=int, default=2_000,
                        help="mapping evaluations for the macro benchmark")
    args = parser.parse_args()

    loads = make_workloads(args.calls)
    py = time_backend(_kernels_py, loads)
    print(f"{'operation':<18} {'python ns':>10}", end="")
    if _kernels is not None:
        cy = time_backend(_kernels, loads)
        print(f" {'cython ns':>10} {'speedup':>8}")
        for name in loads:
            print(f"{name:<18} {py[name]:>10.0f} {cy[name]:>10.0f} "
                  f"{py[name] / cy[name]:>7.1f}x")
    else:
        print()
        for name in loads:
            print(f"{name:<18} {py[name]:>10.0f}")
        print("compiled backend not built; showing the fallback only")

    print()
    pure_rate = time_decode(pure=True, evaluations=args.evaluations)
    print(f"mapping evaluations/s  python  {pure_rate:>10.0f}")
    if _kernels is not None:
        cy_rate = time_decode(pure=False, evaluations=args.evaluations)
        print(f"mapping evaluations/s  cython  {cy_rate:>10.0f}  "
              f"({cy_rate / pure_rate:.2f}x)")


if __name__ == "__main__":
    main()
