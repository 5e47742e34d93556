#!/usr/bin/env python3
"""Regenerate the per-transition image-factor table and the aggregate
z^-3 shift/decay coefficients for both surfaces."""

import argparse

from surfatom import compute_vdw, ito, ito_star, load_scheme


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atom-file", default=None)
    args = parser.parse_args()

    scheme = load_scheme(args.atom_file)
    for model in (ito(), ito_star()):
        coeffs = compute_vdw(scheme, model)
        print(f"\n=== {model.name} ===")
        print(f"{'level':8s} {'partner':8s} {'w_na/eV':>9s} {'M':>8s} "
              f"{'dvf':>8s} {'dr':>8s} {'r':>8s}")
        for r in coeffs.per_transition:
            print(f"{r.level:8s} {r.partner:8s} {r.omega_na_eV:9.4f} "
                  f"{r.m_coeff:8.4f} {r.delta_vf:8.4f} {r.delta_r:8.4f} "
                  f"{r.r_na:8.4f}")
        print("shift coefficients (kHz.um^3):",
              {k: round(v, 3) for k, v in coeffs.per_level_shift.items()})
        print("decay coefficients (kHz.um^3):",
              {f"{a}<-{b}": round(v, 4)
               for (a, b), v in coeffs.per_transition_decay.items()})


if __name__ == "__main__":
    main()
