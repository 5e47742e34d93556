#!/usr/bin/env python3
"""Scan the steady-state effective potentials for the atom-mirror drive
set and its red-detuned trap variant, and report barrier/minimum
structure for both surfaces."""

import argparse

import numpy as np

from surfatom import build_hamiltonian, compute_vdw, ito, ito_star, load_scheme
from surfatom.constants import TWO_PI
from surfatom.driven import (
    Drive,
    effective_potential,
    find_potential_minimum,
    log_grid,
)


def drives(delta2_mhz):
    return (
        Drive(upper="4P_3/2", lower="4S_1/2", omega0=TWO_PI * 100.0,
              detuning=TWO_PI * 50.0, kappa=TWO_PI / 0.767),
        Drive(upper="3D_5/2", lower="4P_3/2", omega0=TWO_PI * 100.0,
              detuning=TWO_PI * delta2_mhz, kappa=0.0),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=400)
    parser.add_argument("--out", default=None, help="optional CSV stem")
    args = parser.parse_args()

    scheme = load_scheme()
    grid = log_grid(0.02, 2.0, args.points)
    for delta2 in (0.0, -3.0):
        print(f"\n=== upper-drive detuning 2pi x {delta2} MHz ===")
        for model in (ito(), ito_star()):
            coeffs = compute_vdw(scheme, model)
            h = build_hamiltonian(scheme, coeffs, drives(delta2))
            profile = effective_potential(h, grid)
            k = int(np.argmax(profile.u_eff_mhz))
            print(f"{model.name:5s} barrier {profile.u_eff_mhz[k]:8.4f} MHz "
                  f"at z = {profile.z[k]:.4f} um", end="")
            found = find_potential_minimum(h, profile, 0.02, 0.5)
            if found:
                print(f";  interior minimum {found[1]:.4f} MHz at "
                      f"z = {found[0]:.4f} um")
            else:
                print(";  no interior minimum")
            if args.out:
                name = model.name.replace("*", "star")
                path = f"{args.out}_{name}_d2_{delta2:g}.csv"
                np.savetxt(
                    path,
                    np.column_stack([profile.z, profile.u_eff_mhz,
                                     profile.populations,
                                     profile.force_branches / TWO_PI,
                                     profile.eta_branches, profile.heating]),
                    delimiter=",",
                    header="z_um,u_eff_MHz,pop_g,pop_e1,pop_e2,"
                           "f1_MHz_per_um,f2_MHz_per_um,f3_MHz_per_um,"
                           "eta1,eta2,eta3,heating_K_per_s",
                    comments="",
                )
                print(f"      wrote {path}")


if __name__ == "__main__":
    main()
