import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from surfatom.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_config(path, **overrides):
    cfg = {
        "materials": ["ITO", "ITO*"],
        "seed": 20260809,
        "drives": {
            "mirror": {
                "upper": "4P_3/2", "lower": "4S_1/2",
                "omega_MHz_x2pi": 100.0, "detuning_MHz_x2pi": 50.0,
                "kappa_per_um": 8.191897401798679,
            },
            "ladder": {
                "upper": "3D_5/2", "lower": "4P_3/2",
                "omega_MHz_x2pi": 100.0, "detuning_MHz_x2pi": 0.0,
                "kappa_per_um": 0.0,
            },
        },
        "grid": {"z_min_um": 0.05, "z_max_um": 2.0, "n_points": 80},
        "scenarios": {
            "drop": {
                "kind": "drop", "n_trajectories": 4, "drop_height_um": 1000.0,
                "z_switch_um": 3.0, "z_absorb_um": 0.02, "z_escape_um": 0.5,
                "t_max_us": 120.0, "dt_max_us": 0.001,
            },
        },
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg))
    return path


class TestVdwTable:
    def test_default_run_reference_rows(self, runner, tmp_path):
        result = runner.invoke(main, ["--out", str(tmp_path), "vdw-table"])
        assert result.exit_code == 0, result.output
        header, rows = read_csv(tmp_path / "table2.csv")
        assert header == ["kind", "label", "ITO", "ITO*"]
        by_label = {(r[0], r[1]): r for r in rows}
        shift_3d = by_label[("shift", "3D_5/2")]
        assert float(shift_3d[2]) == pytest.approx(3.9, abs=0.1)
        assert float(shift_3d[3]) == pytest.approx(-1.7, abs=0.1)
        header1, rows1 = read_csv(tmp_path / "table1.csv")
        assert len(rows1) == 20        # ten perturbation rows per material

    def test_dispersionless_only_decays_vanish(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", materials=["ITO*"])
        result = runner.invoke(
            main, ["--config", str(cfg), "--out", str(tmp_path), "vdw-table"]
        )
        assert result.exit_code == 0, result.output
        _, rows = read_csv(tmp_path / "table2.csv")
        decay_values = [float(r[2]) for r in rows if r[0] == "decay"]
        assert decay_values and all(v == 0.0 for v in decay_values)

    def test_empty_transition_table(self, runner, tmp_path):
        atom = {
            "mass_kg": 6.4762e-26,
            "levels": [
                {"name": "4S_1/2", "J": 0.5, "role": "ground"},
                {"name": "4P_3/2", "J": 1.5, "role": "excited"},
                {"name": "3D_5/2", "J": 2.5, "role": "excited"},
            ],
            "transitions": [],
        }
        atom_path = tmp_path / "atom.json"
        atom_path.write_text(json.dumps(atom))
        cfg = write_config(tmp_path / "cfg.json", atom_file=str(atom_path))
        result = runner.invoke(
            main, ["--config", str(cfg), "--out", str(tmp_path), "vdw-table"]
        )
        assert result.exit_code == 0, result.output
        _, rows1 = read_csv(tmp_path / "table1.csv")
        assert rows1 == []

    def test_custom_materials_file(self, runner, tmp_path):
        mats = {
            "materials": [
                {"name": "sapphire-like", "eps_inf": 3.0, "omega_p_eV": 0.9,
                 "gamma_eV": 0.05},
            ]
        }
        mat_path = tmp_path / "mats.json"
        mat_path.write_text(json.dumps(mats))
        cfg = write_config(
            tmp_path / "cfg.json",
            materials_file=str(mat_path), materials=["sapphire-like"],
        )
        result = runner.invoke(
            main, ["--config", str(cfg), "--out", str(tmp_path), "vdw-table"]
        )
        assert result.exit_code == 0, result.output
        header, rows = read_csv(tmp_path / "table2.csv")
        assert header == ["kind", "label", "sapphire-like"]
        shifts = [float(r[2]) for r in rows if r[0] == "shift"]
        assert len(shifts) == 3 and all(np.isfinite(shifts))

    def test_json_mirror(self, runner, tmp_path):
        result = runner.invoke(
            main, ["--out", str(tmp_path), "--format", "json", "vdw-table"]
        )
        assert result.exit_code == 0, result.output
        payload = json.loads((tmp_path / "table2.json").read_text())
        assert payload["columns"][:2] == ["kind", "label"]
        assert any(r[0] == "shift" for r in payload["rows"])


class TestPotential:
    def test_barrier_ordering_and_columns(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        result = runner.invoke(
            main, ["--config", str(cfg), "--out", str(tmp_path), "potential"]
        )
        assert result.exit_code == 0, result.output
        h_ito, rows_ito = read_csv(tmp_path / "potential_ITO.csv")
        _, rows_star = read_csv(tmp_path / "potential_ITOstar.csv")
        i_u = h_ito.index("u_eff_MHz")
        max_ito = max(float(r[i_u]) for r in rows_ito)
        max_star = max(float(r[i_u]) for r in rows_star)
        assert max_ito > 0.96 > max_star

    def test_trap_variant_has_interior_minimum(self, runner, tmp_path):
        cfg = write_config(
            tmp_path / "cfg.json",
            materials=["ITO"],
            scenarios={
                "trap": {
                    "kind": "trap", "n_trajectories": 2,
                    "z_switch_um": 3.0, "z_absorb_um": 0.02,
                    "z_escape_um": 0.5, "t_max_us": 60.0, "dt_max_us": 0.001,
                    "drive_overrides": {
                        "ladder": {"detuning_MHz_x2pi": -3.0}
                    },
                },
            },
            grid={"z_min_um": 0.02, "z_max_um": 2.0, "n_points": 200},
        )
        result = runner.invoke(
            main,
            ["--config", str(cfg), "--out", str(tmp_path), "potential",
             "--variant", "trap"],
        )
        assert result.exit_code == 0, result.output
        header, rows = read_csv(tmp_path / "potential_ITO.csv")
        i_z, i_u = header.index("z_um"), header.index("u_eff_MHz")
        z = np.array([float(r[i_z]) for r in rows])
        u = np.array([float(r[i_u]) for r in rows])
        inner = (z > 0.03) & (z < 0.45)
        idx = np.where(inner)[0]
        has_min = any(
            u[i] < u[i - 1] and u[i] < u[i + 1]
            for i in idx
            if 0 < i < len(z) - 1
        )
        assert has_min

    def test_unknown_variant_is_config_error(self, runner, tmp_path):
        result = runner.invoke(
            main, ["--out", str(tmp_path), "potential", "--variant", "nope"]
        )
        assert result.exit_code == 2


class TestTrajectories:
    def test_summary_and_bit_exact_rerun(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", materials=["ITO"])
        args = [
            "--config", str(cfg), "--out", str(tmp_path), "--seed", "7",
            "trajectories", "--scenario", "drop", "-n", "3",
        ]
        first = runner.invoke(main, args)
        assert first.exit_code == 0, first.output
        assert "reflected=" in first.output
        blob = (tmp_path / "ensemble_drop_ITO.csv").read_bytes()
        second = runner.invoke(main, args)
        assert second.exit_code == 0
        assert (tmp_path / "ensemble_drop_ITO.csv").read_bytes() == blob

    def test_csv_roundtrip_is_exact(self, runner, tmp_path):
        from conftest import make_drives
        from surfatom import build_hamiltonian, compute_vdw, ito, load_scheme
        from surfatom.trajectories import ScenarioConfig, run_drop

        cfg = write_config(tmp_path / "cfg.json", materials=["ITO"])
        result = runner.invoke(
            main,
            ["--config", str(cfg), "--out", str(tmp_path), "--seed", "11",
             "trajectories", "--scenario", "drop", "-n", "4"],
        )
        assert result.exit_code == 0, result.output
        scheme = load_scheme()
        h = build_hamiltonian(scheme, compute_vdw(scheme, ito()), make_drives())
        stats = run_drop(
            h, ScenarioConfig(kind="drop", n_trajectories=4, seed=11, t_max=120.0)
        )
        header, rows = read_csv(tmp_path / "ensemble_drop_ITO.csv")
        i_t = header.index("t_end_us")
        i_v = header.index("v_end_um_per_us")
        for k, row in enumerate(rows):
            assert float(row[i_t]) == stats.t_end[k]
            assert float(row[i_v]) == stats.v_end[k]

    def test_series_files(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", materials=["ITO"])
        result = runner.invoke(
            main,
            ["--config", str(cfg), "--out", str(tmp_path),
             "trajectories", "-n", "2", "--series", "1"],
        )
        assert result.exit_code == 0, result.output
        header, rows = read_csv(tmp_path / "series_drop_ITO_0000.csv")
        assert header == ["t_us", "z_um", "v_um_per_us", "eta_1", "eta_2", "eta_3"]
        eta = np.array([[float(x) for x in r[3:]] for r in rows])
        assert np.allclose(eta.sum(axis=1), 1.0, atol=1e-6)
        assert (tmp_path / "series_drop_ITO_0000_jumps.csv").exists()

    def test_missing_config_file_is_config_error(self, runner, tmp_path):
        result = runner.invoke(
            main, ["--config", str(tmp_path / "nope.json"), "vdw-table"]
        )
        assert result.exit_code == 2

    def test_unitless_drive_keys_rejected(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        raw = json.loads(cfg.read_text())
        raw["drives"]["mirror"] = {
            "upper": "4P_3/2", "lower": "4S_1/2",
            "omega": 100.0, "detuning": 50.0, "kappa": 8.19,
        }
        cfg.write_text(json.dumps(raw))
        result = runner.invoke(main, ["--config", str(cfg), "vdw-table"])
        assert result.exit_code == 2
        assert "units" in result.output

    def test_unknown_scenario_is_config_error(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        result = runner.invoke(
            main,
            ["--config", str(cfg), "--out", str(tmp_path),
             "trajectories", "--scenario", "bounce"],
        )
        assert result.exit_code == 2
