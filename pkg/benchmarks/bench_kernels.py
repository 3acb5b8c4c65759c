"""Benchmark: compiled kernel vs numpy fallback.

Times the batch integrator on a sensing-style workload for both
available backends and reports trajectory-steps per second.

    python benchmarks/bench_kernels.py [--n-traj 128] [--t-end 5.0] [--m 4]
"""

import argparse
import time

import numpy as np

from cavring import kernels
from cavring.dynamics import IntegratorConfig
from cavring.model import ModelParams, critical_coupling
from cavring.protocols import Schedule


def make_workload(n_traj, t_end, m):
    params = ModelParams.from_twopi_khz(
        omega=10.0, kappa=5.0, hop_j=2.0, n_atoms=60000.0, n_sites=m,
        omega_rec=3.5,
    )
    config = IntegratorConfig(t_end=t_end)
    g0 = critical_coupling(params, 0.0)
    schedule = Schedule(g_final=1.09 * g0, t_ramp=1.0, theta0=0.0,
                        delta_theta=np.pi / 20, omega_drive=np.pi,
                        t_drive=2.0)
    rng = np.random.default_rng(12345)
    cav = 0.5 * (rng.standard_normal(n_traj)
                 + 1j * rng.standard_normal(n_traj)).astype(np.complex128)
    sites = (np.sqrt(params.n_atoms / m)
             + 0.5 * (rng.standard_normal((n_traj, m))
                      + 1j * rng.standard_normal((n_traj, m))))
    noise = rng.standard_normal((n_traj, config.n_steps, 2))
    t_grid = np.arange(config.n_steps + 1) * config.dt
    g_grid = np.asarray(schedule.g(t_grid))
    hop_grid = params.hop_j * np.exp(1j * np.asarray(schedule.theta(t_grid)))
    return params, config, cav, sites.astype(np.complex128), noise, g_grid, hop_grid


def run_backend(name, workload, repeats):
    params, config, cav, sites, noise, g_grid, hop_grid = workload
    fn = kernels.backend_function(name)
    n_traj = cav.size
    best = float("inf")
    result = None
    for _ in range(repeats):
        c, s = cav.copy(), sites.copy()
        outs = tuple(np.empty((config.n_records, n_traj)) for _ in range(4))
        start = time.perf_counter()
        fail = fn(c, s, noise, g_grid, hop_grid, params.kappa, params.omega,
                  config.dt, config.record_every, *outs)
        elapsed = time.perf_counter() - start
        assert fail is None
        best = min(best, elapsed)
        result = outs[0][-1].mean()
    steps = n_traj * config.n_steps
    return best, steps / best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-traj", type=int, default=128)
    parser.add_argument("--t-end", type=float, default=5.0)
    parser.add_argument("--m", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    workload = make_workload(args.n_traj, args.t_end, args.m)
    config = workload[1]
    print(f"workload: {args.n_traj} trajectories x {config.n_steps} steps, "
          f"M = {args.m}")
    rows = []
    for name in kernels.available_backends():
        best, rate, tail = run_backend(name, workload, args.repeats)
        rows.append((name, best, rate, tail))
        print(f"  {name:>7}: {best:8.3f} s   {rate/1e6:8.2f} M traj-steps/s"
              f"   (tail photon {tail:.4g})")
    if len(rows) == 2:
        print(f"  speedup: {rows[1][1] / rows[0][1]:.1f}x "
              f"({rows[0][0]} over {rows[1][0]})")
        drift = abs(rows[0][3] - rows[1][3]) / max(abs(rows[1][3]), 1e-12)
        print(f"  backend agreement on tail photon: {drift:.2e} relative")


if __name__ == "__main__":
    main()
