"""Scenario parsing and validation (cli.scenario)."""

import json

import pytest

from cli.scenario import load_scenario, parse_scenario
from shared.enums import Method, ReportFormat
from shared.errors import ScenarioError


def _text(**changes):
    data = {
        "multifunction": {"name": "segment_growth"},
        "integrators": ["pettis"],
        "tolerances": {"seed": 0},
    }
    data.update(changes)
    return json.dumps(data)


def test_minimal_scenario_takes_defaults():
    s = parse_scenario(_text())
    assert s.integrators == [Method.PETTIS]
    assert s.interval_set().measure == 1.0
    assert s.output.prefix == "run"
    assert s.output.format == ReportFormat.JSON
    assert s.tolerances.seed == 0


def test_extra_multifunction_keys_are_params():
    s = parse_scenario(_text(multifunction={"name": "scaled_disk", "polygon_m": 32}))
    assert s.multifunction.params == {"polygon_m": 32}
    F = s.multifunction.build()
    assert F.params["polygon_m"] == 32


def test_unknown_catalog_entry():
    with pytest.raises(ScenarioError, match="multifunction.name") as info:
        parse_scenario(_text(multifunction={"name": "nope"}))
    assert "unknown catalog entry" in str(info.value)


def test_malformed_json_reports_line_and_column():
    with pytest.raises(ScenarioError, match=r"^<scenario>:2:\d+:"):
        parse_scenario('{\n  "multifunction": }')


@pytest.mark.parametrize(
    ("integrators", "message"),
    [([], "integrators"), (["pettis", "pettis"], "must not repeat"), (["simpson"], "integrators")],
)
def test_integrator_list_is_checked(integrators, message):
    with pytest.raises(ScenarioError, match=message):
        parse_scenario(_text(integrators=integrators))


def test_domain_outside_the_unit_interval():
    with pytest.raises(ScenarioError, match="not inside"):
        parse_scenario(_text(domain=[[0.5, 1.5]]))


def test_unknown_top_level_field():
    with pytest.raises(ScenarioError, match="budget"):
        parse_scenario(_text(budget=10))


def test_seed_is_required():
    with pytest.raises(ScenarioError, match="tolerances.seed"):
        parse_scenario(_text(tolerances={"epsilon_target": 1e-3}))


def test_prefix_must_be_a_plain_file_name():
    with pytest.raises(ScenarioError, match="output.prefix"):
        parse_scenario(_text(output={"prefix": "../escape"}))


def test_hash_ignores_layout_but_not_content():
    a = parse_scenario(_text())
    b = parse_scenario(json.dumps(json.loads(_text()), indent=4, sort_keys=True))
    c = parse_scenario(_text(tolerances={"seed": 1}))
    assert a.scenario_hash == b.scenario_hash
    assert a.scenario_hash != c.scenario_hash


def test_load_scenario(tmp_path):
    path = tmp_path / "seg.json"
    path.write_text(_text())
    assert load_scenario(path).multifunction.name == "segment_growth"
    with pytest.raises(ScenarioError, match="missing.json"):
        load_scenario(tmp_path / "missing.json")
