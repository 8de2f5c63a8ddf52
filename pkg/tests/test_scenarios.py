"""The pinned scenario library: every document parses, runs, and matches."""

import pytest

from opineq import (
    COVERAGE,
    REGISTRY_ORDER,
    SCENARIOS,
    SCENARIOS_BY_NAME,
    canonical_json,
    coverage_gaps,
    expectation_failures,
    load_json,
    run_scenario,
    scenario_from_doc,
)

NAMES = sorted(SCENARIOS_BY_NAME)


def test_every_theorem_id_is_covered():
    assert coverage_gaps() == []
    assert set(COVERAGE) == {entry.theorem_id for entry in REGISTRY_ORDER}
    for theorem_id, names in COVERAGE.items():
        assert names, f"{theorem_id} lists no scenarios"
        for name in names:
            assert name in SCENARIOS_BY_NAME


def test_names_are_unique():
    assert len(NAMES) == len(SCENARIOS)


def test_every_scenario_declares_expectations():
    for doc in SCENARIOS:
        assert "expect" in doc, doc["name"]
        assert "verdict" in doc["expect"], doc["name"]


def test_documents_serialize_canonically():
    for doc in SCENARIOS:
        text = canonical_json(doc)
        assert load_json(text) == load_json(canonical_json(load_json(text)))


@pytest.mark.parametrize("name", NAMES)
def test_scenario_runs_as_expected(name):
    doc = SCENARIOS_BY_NAME[name]
    parsed = scenario_from_doc(doc)
    report = run_scenario(parsed)
    assert expectation_failures(report, parsed["expect"]) == []


@pytest.mark.parametrize("name", NAMES)
def test_scenario_is_deterministic(name):
    doc = SCENARIOS_BY_NAME[name]
    first = run_scenario(scenario_from_doc(doc))
    second = run_scenario(scenario_from_doc(doc))
    assert canonical_json(first.to_record()) == canonical_json(second.to_record())
