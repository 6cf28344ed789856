import json

import numpy as np
import pytest

from app.main import COMMANDS, build_parser, parse_resolution, router, run
from tests.helpers import SINGLE_VORTEX_ENERGY


def _write_config(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _report(path):
    return json.loads(path.read_text())


def test_every_command_is_routed():
    assert sorted(router.commands) == sorted(COMMANDS)


def test_parse_resolution():
    assert parse_resolution("128x256") == (128, 256)
    assert parse_resolution("32X64") == (32, 64)


def test_parser_defaults():
    args = build_parser().parse_args(["energy"])
    assert args.config is None and args.out is None
    assert args.threads >= 1


def test_energy_of_single_vortex_preset(tmp_path):
    out = tmp_path / "energy.json"
    assert run(["energy", "--preset", "single_vortex", "--out", str(out)]) == 0
    report = _report(out)
    assert report["command"] == "energy"
    assert report["results"]["breakdown"]["total"] == pytest.approx(SINGLE_VORTEX_ENERGY, abs=1e-4)
    assert report["results"]["critical"] is True
    assert "gauge" not in report["results"]


def test_report_goes_to_stdout_without_out(capsys):
    assert run(["torus-energy", "--preset", "pure_winding"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["breakdown"]["total"] == pytest.approx(np.pi ** 2, abs=1e-8)
    assert report["results"]["h"] == pytest.approx([2 * np.pi, 0.0])


def test_config_hash_ignores_timestamp(tmp_path):
    config = _write_config(tmp_path, {"preset": "quadratic_phase", "grid": {"radial": 32, "angular": 64}})
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert run(["lift", "--config", config, "--out", str(first)]) == 0
    assert run(["lift", "--config", config, "--out", str(second)]) == 0
    assert _report(first)["config_hash"] == _report(second)["config_hash"]
    assert _report(first)["results"] == _report(second)["results"]


def test_overrides_change_config_hash(tmp_path):
    config = _write_config(tmp_path, {"preset": "quadratic_phase", "grid": {"radial": 32, "angular": 64}})
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert run(["lift", "--config", config, "--out", str(first)]) == 0
    assert run(["lift", "--config", config, "--seed", "5", "--out", str(second)]) == 0
    assert _report(first)["config_hash"] != _report(second)["config_hash"]


def test_decompose_writes_field_table(tmp_path):
    out = tmp_path / "decompose.json"
    assert run(["decompose", "--preset", "blaschke_pair", "--out", str(out)]) == 0
    table = tmp_path / "decompose.field.csv"
    assert table.exists()
    header = table.read_text().splitlines()[0]
    assert header == "x,y,a,b"
    assert len(table.read_text().splitlines()) == 128 * 256 + 1
    assert _report(out)["results"]["neumann_gap"] <= 1e-6


def test_detect_recovers_pair(tmp_path):
    out = tmp_path / "detect.json"
    assert run(["detect", "--preset", "blaschke_pair", "--resolution", "64x128", "--out", str(out)]) == 0
    results = _report(out)["results"]
    assert results["charges_match"] is True
    assert results["total_charge"] == 0


def test_detect_on_coarse_grid_fails_validation(tmp_path):
    config = _write_config(tmp_path, {
        "vortices": [{"x": 0.5, "y": 0.0, "charge": 1}, {"x": 0.52, "y": 0.0, "charge": -1}],
        "grid": {"radial": 8, "angular": 16},
    })
    assert run(["detect", "--config", config]) == 1


def test_zero_charge_config_exits_one(tmp_path):
    config = _write_config(tmp_path, {"vortices": [{"x": 0.1, "y": 0.0, "charge": 0}]})
    assert run(["energy", "--config", config]) == 1


def test_odd_boundary_charge_exits_one(tmp_path):
    config = _write_config(tmp_path, {"vortices": [{"x": 0.0, "y": 1.0, "charge": 3}]})
    assert run(["energy", "--config", config]) == 1


def test_malformed_json_exits_one(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"seed": ')
    assert run(["energy", "--config", str(path)]) == 1


def test_usage_errors_exit_one():
    assert run(["unknown-command"]) == 1
    assert run(["energy", "--resolution", "fine"]) == 1
    assert run(["energy", "--threads", "0"]) == 1


def test_wrong_domain_exits_one():
    assert run(["torus-energy", "--preset", "single_vortex"]) == 1


def test_extend_needs_matching_degree(tmp_path):
    config = _write_config(tmp_path, {
        "boundary": {"preset": "double"},
        "options": {"extend_degree": 1},
        "grid": {"radial": 32, "angular": 64},
    })
    assert run(["extend", "--config", config]) == 1


def test_level_flux_for_single_vortex(tmp_path):
    config = _write_config(tmp_path, {"preset": "single_vortex", "options": {"levels": [-1.0, -0.5, 0.0]}})
    out = tmp_path / "flux.json"
    assert run(["level-flux", "--config", config, "--out", str(out)]) == 0
    results = _report(out)["results"]
    assert results["within_tolerance"] is True
    assert (tmp_path / "flux.flux.csv").exists()


def test_plane_energy_command(tmp_path):
    out = tmp_path / "plane.json"
    assert run(["energy", "--preset", "pair", "--out", str(out)]) == 0
    results = _report(out)["results"]
    assert results["domain"] == "plane"
    assert results["relative_gap"] <= 0.01
    assert results["tail_estimate"] == pytest.approx(np.pi * 0.36 / 800.0, rel=1e-9)


@pytest.mark.slow
def test_selftest_passes(tmp_path):
    out = tmp_path / "selftest.json"
    assert run(["selftest", "--threads", "4", "--out", str(out)]) == 0
    assert _report(out)["results"]["passed"] is True
