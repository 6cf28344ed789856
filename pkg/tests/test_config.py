import json

import numpy as np
import pytest

from app.config.presets import BOUNDARY_PRESETS, MAP_PRESETS, PLANE_PRESETS, TORUS_PRESETS
from app.core.exceptions import ValidationException
from app.repositories import ConfigRepository, ReportRepository, TableRepository
from app.schemas.problem import BoundarySpec, ProblemConfig, parse_config
from app.schemas.report import build_envelope, config_hash, emit_report, significant
from app.services.map_service import MapService


def test_empty_config_uses_defaults():
    config = parse_config("")
    assert config.domain == "disk"
    assert config.grid.radial == 128 and config.grid.angular == 256
    assert config.seed == 0
    assert config.options.scheme == "spectral"


def test_map_preset_fills_vortices():
    config = parse_config('{"preset": "blaschke_pair"}')
    assert config.domain == "disk"
    assert [(v.x, v.y, v.charge) for v in config.vortices] == [(0.3, 0.0, 1), (-0.3, 0.0, -1)]


def test_preset_argument_overrides_config():
    config = parse_config('{"preset": "constant"}', preset="single_vortex")
    assert config.preset == "single_vortex"
    assert len(config.vortices) == 1


def test_plane_and_torus_presets_select_domain():
    assert parse_config("", preset="pair").domain == "plane"
    torus = parse_config("", preset="dipole")
    assert torus.domain == "torus"
    assert torus.torus.to_model().dipole_moment == pytest.approx(-0.4 + 0j)


def test_unknown_preset_rejected():
    with pytest.raises(ValidationException):
        parse_config('{"preset": "nonexistent"}')


def test_zero_charge_rejected():
    with pytest.raises(ValidationException) as excinfo:
        parse_config('{"vortices": [{"x": 0.1, "y": 0.0, "charge": 0}]}')
    assert "vortices.0.charge" in str(excinfo.value)


def test_odd_boundary_charge_rejected():
    with pytest.raises(ValidationException):
        parse_config('{"vortices": [{"x": 1.0, "y": 0.0, "charge": 1}]}')


def test_vortex_outside_disk_rejected():
    with pytest.raises(ValidationException):
        parse_config('{"vortices": [{"x": 0.9, "y": 0.9, "charge": 1}]}')


def test_coincident_vortices_rejected():
    text = '{"vortices": [{"x": 0.1, "y": 0.0, "charge": 1}, {"x": 0.1, "y": 0.0, "charge": -1}]}'
    with pytest.raises(ValidationException):
        parse_config(text)


def test_unknown_field_rejected():
    with pytest.raises(ValidationException):
        parse_config('{"grid": {"radial": 64, "angular": 128, "spacing": 2}}')


def test_odd_angular_count_rejected():
    with pytest.raises(ValidationException):
        parse_config('{"grid": {"radial": 64, "angular": 129}}')


def test_json_syntax_error_names_position():
    with pytest.raises(ValidationException) as excinfo:
        parse_config('{\n  "seed": 1,\n  "grid": }')
    assert "line 3" in str(excinfo.value)


def test_torus_charges_must_cancel():
    with pytest.raises(ValidationException):
        parse_config('{"domain": "torus", "torus": {"vortices": [{"x": 0.1, "y": 0.1, "charge": 1}]}}')


def test_plane_needs_balanced_pairs():
    with pytest.raises(ValidationException):
        parse_config('{"domain": "plane", "plane": {"p": [[0.3, 0.0]], "q": []}}')


def test_canonical_json_is_stable():
    config = parse_config('{"seed": 3, "preset": "single_vortex"}')
    again = ProblemConfig.model_validate(json.loads(config.canonical_json()))
    assert again.canonical_json() == config.canonical_json()
    assert config_hash(config.canonical_json()) == config_hash(again.canonical_json())


def test_boundary_presets_have_declared_degree():
    for name, preset in BOUNDARY_PRESETS.items():
        _, degree = MapService.boundary_lift(BoundarySpec(preset=name, samples=128).to_signal())
        assert degree == preset["degree"], name


def test_boundary_samples_must_be_even():
    with pytest.raises(ValidationException):
        parse_config('{"boundary": {"degree": 1, "samples": 63}}')


def test_every_preset_parses():
    for name in list(MAP_PRESETS) + list(PLANE_PRESETS) + list(TORUS_PRESETS):
        assert parse_config("", preset=name).preset == name


def test_significant_digits():
    assert significant(np.float64(1.0 / 3.0)) == 0.333333333333
    assert significant(1 + 2j) == [1.0, 2.0]
    assert significant(float("inf")) == "inf"
    assert significant({"a": np.int64(3), "b": (np.bool_(True),)}) == {"a": 3, "b": [True]}
    assert significant(np.array([0.5, 0.25])) == [0.5, 0.25]


def test_report_is_stable_json():
    envelope = build_envelope("energy", "{}", {"total": np.float64(4.5933), "breakdown": {"b_term": 0.0}})
    text = emit_report(envelope)
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["tool"] == "vortexlab"
    assert data["command"] == "energy"
    assert data["config_hash"] == config_hash("{}")
    assert data["results"]["total"] == 4.5933


def test_report_round_trip(tmp_path):
    envelope = build_envelope("lift", "{}", {"degree": 1})
    repository = ReportRepository()
    path = repository.save(envelope, tmp_path / "nested" / "report.json")
    assert repository.load(path) == envelope


def test_config_repository_reads_files(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text('{"preset": "single_vortex", "seed": 9}')
    config = ConfigRepository().load(path)
    assert config.seed == 9
    ConfigRepository().save(config, tmp_path / "canonical.json")
    assert ConfigRepository().load(tmp_path / "canonical.json").canonical_json() == config.canonical_json()


def test_config_repository_missing_file(tmp_path):
    with pytest.raises(ValidationException):
        ConfigRepository().load(tmp_path / "missing.json")


def test_tables_are_written_next_to_report(tmp_path):
    report = tmp_path / "run.json"
    rows = [{"r": 0.5, "a": 1.0 / 3.0}, {"r": 1.0, "a": 0.0, "b": 2.0}]
    written = TableRepository().save_tables({"field": rows}, report)
    assert written == [tmp_path / "run.field.csv"]
    loaded = TableRepository().load(written[0])
    assert list(loaded[0]) == ["r", "a", "b"]
    assert loaded[0]["a"] == "0.333333333333"
    assert loaded[0]["b"] == ""
