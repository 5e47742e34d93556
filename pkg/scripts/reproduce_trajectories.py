#!/usr/bin/env python3
"""Monte Carlo reproduction of the mirror-drop and near-field-trap
statistics for both surfaces, from one seed."""

import argparse
import time

from surfatom import build_hamiltonian, compute_vdw, ito, ito_star, load_scheme
from surfatom.constants import TWO_PI
from surfatom.driven import (
    Drive,
    effective_potential,
    find_potential_minimum,
    log_grid,
)
from surfatom.trajectories import ScenarioConfig, run_drop, run_trap


def drives(delta2_mhz):
    return (
        Drive(upper="4P_3/2", lower="4S_1/2", omega0=TWO_PI * 100.0,
              detuning=TWO_PI * 50.0, kappa=TWO_PI / 0.767),
        Drive(upper="3D_5/2", lower="4P_3/2", omega0=TWO_PI * 100.0,
              detuning=TWO_PI * delta2_mhz, kappa=0.0),
    )


def summarize(label, stats):
    q = stats.escape_time_quantiles()
    print(f"{label}: reflected {stats.n_reflected}/{stats.n} "
          f"absorbed {stats.n_absorbed} timeout {stats.n_timeout}  "
          f"mean jumps {stats.mean_jumps:.1f}  "
          f"mean escape {stats.mean_escape_time:.2f} us "
          f"(median {q.get(0.5, float('nan')):.2f})")
    for w in stats.warnings:
        print(f"  warning: {w}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=20260809)
    args = parser.parse_args()

    scheme = load_scheme()
    models = {m.name: m for m in (ito(), ito_star())}
    t0 = time.time()

    sc = ScenarioConfig(kind="drop", n_trajectories=args.n, seed=args.seed,
                        t_max=300.0)
    for name, model in models.items():
        h = build_hamiltonian(scheme, compute_vdw(scheme, model), drives(0.0))
        summarize(f"drop {name:4s}", run_drop(h, sc))

    grid = log_grid(0.02, 2.0, 400)
    h_trap = build_hamiltonian(
        scheme, compute_vdw(scheme, models["ITO"]), drives(-3.0)
    )
    profile = effective_potential(h_trap, grid)
    z_min = find_potential_minimum(h_trap, profile, 0.02, 0.5)[0]
    sct = ScenarioConfig(kind="trap", n_trajectories=args.n, seed=args.seed,
                         t_max=300.0)
    summarize("trap ITO ", run_trap(h_trap, sct, profile=profile))

    h_trap_star = build_hamiltonian(
        scheme, compute_vdw(scheme, models["ITO*"]), drives(-3.0)
    )
    sct_star = ScenarioConfig(kind="trap", n_trajectories=args.n,
                              seed=args.seed, t_max=300.0, z_start=z_min)
    summarize("trap ITO*", run_trap(h_trap_star, sct_star))

    print(f"total {time.time() - t0:.0f} s")


if __name__ == "__main__":
    main()
