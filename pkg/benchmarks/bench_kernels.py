"""Benchmark the jitted kernels against the pure-python fallback.

The fallback is the same kernel source executed without numba, selected by
RELCOST_NO_NUMBA=1; this script runs both modes in subprocesses and prints a
comparison table.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json
import time

from relcost import kernels
from relcost.model import CostParams, SystemParams

p_single = SystemParams(alpha_p=0.0, alpha_q=0.0, beta_p=1e-3, beta_q=1e-3,
                        gamma=1e-3, tau=5, delta=3)
p_rep = SystemParams(alpha_p=1.0, alpha_q=1.0, beta_p=0.5, beta_q=0.5,
                     gamma=0.0, tau=2, delta=2, sigma=0.01)
costs = CostParams(1.0, 1.0)

N_SINGLE = int(%(n_single)d)
N_REP = int(%(n_rep)d)
H_SINGLE = 16384
H_REP = 100_000

# warmup triggers compilation in jit mode; tiny in fallback mode
kernels.single_batch(1, p_single, 64, kernels.make_seeds(0, 0, 4))
kernels.repeated_batch(p_rep, costs, 256, kernels.make_seeds(0, 0, 2))

seeds = kernels.make_seeds(1, 0, N_SINGLE)
t0 = time.perf_counter()
arr = kernels.single_batch(1, p_single, H_SINGLE, seeds)
t_single = time.perf_counter() - t0

seeds = kernels.make_seeds(2, 0, N_REP)
t0 = time.perf_counter()
rep = kernels.repeated_batch(p_rep, costs, H_REP, seeds)
t_rep = time.perf_counter() - t0

print(json.dumps({
    "numba": kernels.NUMBA_ENABLED,
    "single_runs": N_SINGLE, "single_secs": t_single,
    "single_mean_nsend": float(arr["n_send"].mean()),
    "repeated_runs": N_REP, "repeated_secs": t_rep,
    "repeated_mean_ratio": float(rep["ratio"].mean()),
}))
"""


def run_mode(disable_numba, n_single, n_rep):
    env = dict(os.environ)
    if disable_numba:
        env["RELCOST_NO_NUMBA"] = "1"
    else:
        env.pop("RELCOST_NO_NUMBA", None)
    code = WORKLOAD % {"n_single": n_single, "n_rep": n_rep}
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout)


def main():
    # the fallback gets a smaller load; results are scaled to per-run times
    jit = run_mode(False, n_single=100_000, n_rep=50)
    py = run_mode(True, n_single=2_000, n_rep=2)

    assert jit["numba"] and not py["numba"]
    print(f"{'workload':<28} {'njit':>12} {'fallback':>12} {'speedup':>9}")
    for key, label in (("single", "single-mode batch"), ("repeated", "repeated-mode batch")):
        j = jit[f"{key}_secs"] / jit[f"{key}_runs"]
        p = py[f"{key}_secs"] / py[f"{key}_runs"]
        print(f"{label:<28} {j * 1e3:>9.3f} ms {p * 1e3:>9.3f} ms {p / j:>8.1f}x")
    print(f"\nsanity: jit mean n_send {jit['single_mean_nsend']:.3f}, "
          f"fallback {py['single_mean_nsend']:.3f} (different run counts)")


if __name__ == "__main__":
    main()
