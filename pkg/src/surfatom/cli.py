"""Command-line entry points: coefficient tables, potential scans, and
trajectory ensembles, emitted as figure-ready CSV (or mirrored JSON).

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 scenario error.
"""

import csv
import json
import os
import sys

import click
import numpy as np

from .constants import TWO_PI, angular_to_mhz
from .config import load_config
from .driven import build_hamiltonian, effective_potential
from .errors import ConfigError, NumericalError, ScenarioError, SurfatomError
from .trajectories import eta_series, run_drop, run_recorded, run_trap
from .trajectories import kernel as _kernel
from .vdw import compute_vdw

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SCENARIO = 4

_OUTCOME_NAMES = {
    _kernel.OUT_UP: "reflected",
    _kernel.OUT_ABSORBED: "absorbed",
    _kernel.OUT_TIMEOUT: "timeout",
}


def _fail(exc):
    click.echo(f"error: {exc}", err=True)
    if isinstance(exc, ConfigError):
        sys.exit(EXIT_CONFIG)
    if isinstance(exc, NumericalError):
        sys.exit(EXIT_NUMERICAL)
    if isinstance(exc, ScenarioError):
        sys.exit(EXIT_SCENARIO)
    sys.exit(1)


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_table(out_dir, stem, header, rows, fmt):
    os.makedirs(out_dir, exist_ok=True)
    if fmt == "csv":
        path = os.path.join(out_dir, stem + ".csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
    else:
        path = os.path.join(out_dir, stem + ".json")
        payload = {
            "columns": list(header),
            "rows": [
                [float(v) if isinstance(v, (float, np.floating)) else v for v in row]
                for row in rows
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
    return path


def _safe_name(name):
    return name.replace("*", "star").replace(" ", "_").replace("/", "_")


def _set_threads(threads):
    if threads is None:
        env = os.environ.get("SURFATOM_THREADS")
        threads = int(env) if env else None
    if threads is not None:
        import numba

        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))


@click.group()
@click.option("--config", "config_path", default=None, help="Run config JSON.")
@click.option("--seed", type=int, default=None, help="Master seed override.")
@click.option("--out", "out_dir", default=".", help="Output directory.")
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    help="Output file format.",
)
@click.option("--threads", type=int, default=None, help="Worker thread count.")
@click.pass_context
def main(ctx, config_path, seed, out_dir, fmt, threads):
    """Surface-enhanced optical potential toolkit."""
    ctx.ensure_object(dict)
    try:
        _set_threads(threads)
        ctx.obj["config"] = load_config(config_path, seed=seed)
    except SurfatomError as exc:
        _fail(exc)
    ctx.obj["out"] = out_dir
    ctx.obj["fmt"] = fmt


@main.command("vdw-table")
@click.pass_context
def cmd_vdw_table(ctx):
    """Per-transition image factors and per-level z^-3 coefficients."""
    cfg = ctx.obj["config"]
    try:
        all_coeffs = {
            name: compute_vdw(cfg.scheme, model)
            for name, model in cfg.materials.items()
        }
    except SurfatomError as exc:
        _fail(exc)

    rows1 = []
    for name, coeffs in all_coeffs.items():
        for tf in coeffs.per_transition:
            rows1.append(
                (
                    name, tf.level, tf.partner, tf.omega_na_eV, tf.rate_fs,
                    tf.m_coeff, tf.delta_vf, tf.delta_r, tf.r_na,
                )
            )
    path1 = _write_table(
        ctx.obj["out"], "table1",
        ("material", "level", "partner", "omega_na_eV", "rate_fs_per_us",
         "M_kHz_um3", "delta_vf", "delta_r", "r_na"),
        rows1, ctx.obj["fmt"],
    )

    names = list(all_coeffs)
    rows2 = []
    levels = [lv.name for lv in cfg.scheme.levels]
    for level in levels:
        rows2.append(
            ("shift", level)
            + tuple(all_coeffs[n].per_level_shift[level] for n in names)
        )
    if all_coeffs:
        for key in next(iter(all_coeffs.values())).per_transition_decay:
            label = f"{key[0]}<-{key[1]}"
            rows2.append(
                ("decay", label)
                + tuple(all_coeffs[n].per_transition_decay[key] for n in names)
            )
    path2 = _write_table(
        ctx.obj["out"], "table2",
        ("kind", "label") + tuple(names), rows2, ctx.obj["fmt"],
    )
    click.echo(f"wrote {path1} and {path2}")


_POTENTIAL_HEADER = (
    "z_um", "u_eff_MHz", "pop_g", "pop_e1", "pop_e2",
    "force_1_MHz_per_um", "force_2_MHz_per_um", "force_3_MHz_per_um",
    "eta_1", "eta_2", "eta_3", "heating_K_per_s",
)


@main.command("potential")
@click.option(
    "--variant", default=None,
    help="Apply the drive overrides of this scenario (e.g. 'trap').",
)
@click.pass_context
def cmd_potential(ctx, variant):
    """Steady-state effective potential scan per material."""
    cfg = ctx.obj["config"]
    try:
        overrides = None
        if variant is not None:
            if variant not in cfg.scenarios_raw:
                raise ConfigError(f"no scenario {variant!r} in config")
            overrides = cfg.scenarios_raw[variant].get("drive_overrides")
        drives = cfg.drives(overrides)
        grid = cfg.grid()
        for name, model in cfg.materials.items():
            coeffs = compute_vdw(cfg.scheme, model)
            h = build_hamiltonian(cfg.scheme, coeffs, drives)
            profile = effective_potential(h, grid)
            rows = [
                (
                    profile.z[i],
                    profile.u_eff_mhz[i],
                    *profile.populations[i],
                    *(angular_to_mhz(profile.force_branches[i])),
                    *profile.eta_branches[i],
                    profile.heating[i],
                )
                for i in range(len(profile.z))
            ]
            path = _write_table(
                ctx.obj["out"], f"potential_{_safe_name(name)}",
                _POTENTIAL_HEADER, rows, ctx.obj["fmt"],
            )
            click.echo(
                f"{name}: max U_eff = {profile.u_eff_mhz.max():.4f} MHz -> {path}"
            )
    except SurfatomError as exc:
        _fail(exc)


@main.command("trajectories")
@click.option("--scenario", "scenario_name", default="drop", show_default=True)
@click.option("--material", "material_name", default=None, help="One material only.")
@click.option("-n", "n_trajectories", type=int, default=None)
@click.option("--t-max", type=float, default=None, help="Budget per trajectory (us).")
@click.option("--series", type=int, default=0, help="Record the first K trajectories.")
@click.option("--series-stride", type=int, default=64, show_default=True)
@click.pass_context
def cmd_trajectories(ctx, scenario_name, material_name, n_trajectories, t_max,
                     series, series_stride):
    """Monte Carlo ensembles; summary on stdout, per-trajectory CSV on disk."""
    cfg = ctx.obj["config"]
    try:
        sc, drives = cfg.scenario(scenario_name, n=n_trajectories, t_max=t_max)
        materials = cfg.materials
        if material_name is not None:
            if material_name not in materials:
                raise ConfigError(f"material {material_name!r} not in config")
            materials = {material_name: materials[material_name]}
        for name, model in materials.items():
            coeffs = compute_vdw(cfg.scheme, model)
            h = build_hamiltonian(cfg.scheme, coeffs, drives)
            profile = None
            if sc.kind == "trap" and sc.z_start is None:
                profile = effective_potential(h, cfg.grid())
            stats = (
                run_drop(h, sc) if sc.kind == "drop" else run_trap(h, sc, profile)
            )
            rows = [
                (
                    k,
                    _OUTCOME_NAMES.get(int(stats.outcomes[k]), "error"),
                    stats.t_end[k],
                    int(stats.jumps_ch1[k]),
                    int(stats.jumps_ch2[k]),
                    stats.z_end[k],
                    stats.v_end[k],
                )
                for k in range(stats.n)
            ]
            path = _write_table(
                ctx.obj["out"], f"ensemble_{scenario_name}_{_safe_name(name)}",
                ("trajectory", "outcome", "t_end_us", "jumps_767nm",
                 "jumps_1178nm", "z_end_um", "v_end_um_per_us"),
                rows, ctx.obj["fmt"],
            )
            q = stats.escape_time_quantiles()
            click.echo(
                f"{name} {scenario_name}: n={stats.n} seed={stats.seed} "
                f"reflected={stats.n_reflected} absorbed={stats.n_absorbed} "
                f"timeout={stats.n_timeout} mean_jumps={stats.mean_jumps:.2f} "
                f"mean_escape_us={stats.mean_escape_time:.3f} "
                f"median_us={q.get(0.5, float('nan')):.3f} -> {path}"
            )
            for warning in stats.warnings:
                click.echo(f"warning: {warning}", err=True)
            for idx in range(series):
                record = run_recorded(
                    h, sc, idx, rec_stride=series_stride, profile=profile
                )
                _, eta = eta_series(h, record)
                srows = [
                    (record.t[i], record.z[i], record.v[i], *eta[i])
                    for i in range(len(record))
                ]
                _write_table(
                    ctx.obj["out"],
                    f"series_{scenario_name}_{_safe_name(name)}_{idx:04d}",
                    ("t_us", "z_um", "v_um_per_us", "eta_1", "eta_2", "eta_3"),
                    srows, ctx.obj["fmt"],
                )
                jrows = list(zip(record.jump_times, record.jump_channels))
                _write_table(
                    ctx.obj["out"],
                    f"series_{scenario_name}_{_safe_name(name)}_{idx:04d}_jumps",
                    ("t_us", "channel"), jrows, ctx.obj["fmt"],
                )
    except SurfatomError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
