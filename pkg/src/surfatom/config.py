"""Run configuration: file loading, unit-explicit drive parsing, scenario
construction.  All physics parameters come from the config file; command
line flags only select among them or change run-scale knobs (n, seed,
t_max, output)."""

import json
from dataclasses import dataclass
from importlib import resources

from .atom import load_scheme
from .constants import mhz_x2pi_to_angular
from .driven import Drive
from .errors import ConfigError
from .materials import DISPERSIONLESS, DRUDE, DielectricModel
from .trajectories import ScenarioConfig

# drive entries must spell out their units in the key names
_DRIVE_KEYS = {"upper", "lower", "omega_MHz_x2pi", "detuning_MHz_x2pi", "kappa_per_um"}
_SCENARIO_KEYS = {
    "kind",
    "n_trajectories",
    "drop_height_um",
    "z_switch_um",
    "z_absorb_um",
    "z_escape_um",
    "t_max_us",
    "dt_max_us",
    "z_start_um",
    "drive_overrides",
}


def load_materials(path=None):
    """name -> DielectricModel from a materials file (default: packaged)."""
    if path is None:
        text = resources.files("surfatom.data").joinpath("materials.json").read_text()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read materials file {path}: {exc}") from exc
    try:
        raw = json.loads(text)
        out = {}
        for m in raw["materials"]:
            omega_p = float(m["omega_p_eV"])
            if omega_p == 0.0:
                model = DielectricModel(
                    eps_inf=float(m["eps_inf"]), tag=DISPERSIONLESS, name=m["name"]
                )
            else:
                model = DielectricModel(
                    eps_inf=float(m["eps_inf"]),
                    omega_p=omega_p,
                    gamma=float(m["gamma_eV"]),
                    tag=DRUDE,
                    name=m["name"],
                )
            out[m["name"]] = model
        return out
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad materials file {path or 'packaged'}: {exc}") from exc


def _parse_drive(name, raw):
    if not isinstance(raw, dict):
        raise ConfigError(f"drive {name!r} must be an object")
    keys = set(raw)
    missing = _DRIVE_KEYS - keys
    extra = keys - _DRIVE_KEYS
    if missing or extra:
        raise ConfigError(
            f"drive {name!r}: keys must carry explicit units "
            f"{sorted(_DRIVE_KEYS)}; missing {sorted(missing)}, "
            f"unrecognized {sorted(extra)}"
        )
    return Drive(
        upper=raw["upper"],
        lower=raw["lower"],
        omega0=mhz_x2pi_to_angular(float(raw["omega_MHz_x2pi"])),
        detuning=mhz_x2pi_to_angular(float(raw["detuning_MHz_x2pi"])),
        kappa=float(raw["kappa_per_um"]),
    )


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: scheme, materials, drives, grid, scenarios."""

    scheme: object
    materials: dict                 # name -> DielectricModel, run order
    drives_raw: dict                # name -> raw drive dicts, file order
    grid_spec: dict
    scenarios_raw: dict
    seed: int

    def drives(self, overrides=None):
        """Drive tuple in ladder order, with per-scenario overrides applied."""
        merged = {}
        for name, raw in self.drives_raw.items():
            d = dict(raw)
            if overrides and name in overrides:
                bad = set(overrides[name]) - (_DRIVE_KEYS - {"upper", "lower"})
                if bad:
                    raise ConfigError(
                        f"drive override {name!r} has unrecognized or "
                        f"non-overridable keys {sorted(bad)}"
                    )
                d.update(overrides[name])
            merged[name] = _parse_drive(name, d)
        return tuple(merged.values())

    def grid(self):
        from .driven import log_grid

        g = self.grid_spec
        return log_grid(
            z_min=float(g.get("z_min_um", 0.02)),
            z_max=float(g.get("z_max_um", 2.0)),
            n=int(g.get("n_points", 400)),
        )

    def scenario(self, name, n=None, seed=None, t_max=None):
        """ScenarioConfig plus the drive tuple that scenario prescribes."""
        if name not in self.scenarios_raw:
            raise ConfigError(
                f"scenario {name!r} not in config (have {sorted(self.scenarios_raw)})"
            )
        raw = self.scenarios_raw[name]
        extra = set(raw) - _SCENARIO_KEYS
        if extra:
            raise ConfigError(f"scenario {name!r}: unrecognized keys {sorted(extra)}")
        sc = ScenarioConfig(
            kind=raw["kind"],
            n_trajectories=int(n if n is not None else raw["n_trajectories"]),
            seed=int(seed if seed is not None else self.seed),
            drop_height=float(raw.get("drop_height_um", 1000.0)),
            z_switch=float(raw.get("z_switch_um", 3.0)),
            z_absorb=float(raw.get("z_absorb_um", 0.02)),
            z_escape=float(raw.get("z_escape_um", 0.5)),
            t_max=float(t_max if t_max is not None else raw.get("t_max_us", 300.0)),
            dt_max=float(raw.get("dt_max_us", 1e-3)),
            z_start=(
                float(raw["z_start_um"]) if raw.get("z_start_um") is not None else None
            ),
        )
        drives = self.drives(raw.get("drive_overrides"))
        return sc, drives


def load_config(path=None, material_names=None, seed=None):
    """Parse a run configuration file (default: the packaged canonical one)."""
    if path is None:
        text = resources.files("surfatom.data").joinpath("default_run.json").read_text()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except ValueError as exc:
        raise ConfigError(f"config {path or 'packaged'} is not valid JSON: {exc}") from exc

    scheme = load_scheme(raw.get("atom_file"))
    catalog = load_materials(raw.get("materials_file"))
    wanted = material_names or raw.get("materials") or list(catalog)
    missing = [m for m in wanted if m not in catalog]
    if missing:
        raise ConfigError(f"materials {missing} not found in materials file")
    materials = {m: catalog[m] for m in wanted}

    drives_raw = raw.get("drives")
    if not isinstance(drives_raw, dict) or len(drives_raw) != 2:
        raise ConfigError("config must define exactly two drives")
    for name, d in drives_raw.items():
        _parse_drive(name, d)        # validate units eagerly

    return RunConfig(
        scheme=scheme,
        materials=materials,
        drives_raw=drives_raw,
        grid_spec=raw.get("grid", {}),
        scenarios_raw=raw.get("scenarios", {}),
        seed=int(seed if seed is not None else raw.get("seed", 0)),
    )
