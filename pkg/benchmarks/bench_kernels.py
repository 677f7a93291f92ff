"""Throughput comparison of the pure-Python and compiled kernels.

Runs the same turbulent-wind emulation segment through each available
backend and reports steps per second.  Trajectories are checked for
bit-identity while we are at it, so a benchmark run doubles as a
parity smoke test.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeats K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from windbench import kernels
from windbench.config import default_config
from windbench.runtime import SimState
from windbench.scenario import wind_at


def build_inputs(n: int) -> dict:
    config = default_config()
    scenario = config.scenario("turb8")
    state = SimState(config, scenario)
    params_f, params_i = state._pack_params()
    dt = state.dt
    wind = np.array([wind_at(k * dt, scenario.profile) for k in range(n)])
    return {
        "n": n,
        "k0": 0,
        "t0": 0.0,
        "dt": dt,
        "wind": wind,
        "out_f": np.empty((n, kernels.OUT_F_COLS), dtype=np.float64),
        "out_i": np.empty((n, kernels.OUT_I_COLS), dtype=np.int64),
        "ring": np.zeros(max(1, int(params_i[1])), dtype=np.float64),
        "state_f": np.zeros(kernels.STATE_F_LEN, dtype=np.float64),
        "state_i": np.zeros(kernels.STATE_I_LEN, dtype=np.int64),
        "params_f": params_f,
        "params_i": params_i,
    }


def time_backend(name: str, n: int, repeats: int) -> tuple[float, np.ndarray]:
    impl = kernels.get_backend(name)
    best = float("inf")
    out_f = None
    for _ in range(repeats):
        inputs = build_inputs(n)
        t0 = time.perf_counter()
        status = impl.run_segment(*inputs.values())
        elapsed = time.perf_counter() - t0
        if status != -1:
            raise RuntimeError(f"{name} kernel reported a failure at step {status}")
        best = min(best, elapsed)
        out_f = inputs["out_f"]
    return best, out_f


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=200_000,
                        help="segment length in steps (default 200000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats; the best is reported (default 3)")
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {backends}, segment: {args.steps} steps, "
          f"best of {args.repeats}")
    results = {}
    outputs = {}
    for name in backends:
        elapsed, out_f = time_backend(name, args.steps, args.repeats)
        results[name] = elapsed
        outputs[name] = out_f
        rate = args.steps / elapsed
        print(f"  {name}: {elapsed * 1e3:8.1f} ms  ({rate / 1e6:6.2f} M steps/s)")

    if len(backends) == 2:
        print(f"speedup: {results['py'] / results['cy']:.1f}x")
        if not np.array_equal(outputs["py"], outputs["cy"], equal_nan=True):
            print("WARNING: backends disagree; run the parity tests")
            return 1
        print("parity: trajectories bit-identical")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
