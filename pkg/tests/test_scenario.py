import json
from fractions import Fraction

import jsonschema
import pytest

from orehom.scenario import (
    DEFAULTS,
    ScenarioError,
    data_text,
    emit_scenario,
    load_schema,
    parse_scenario,
)

from scenario_fixtures import dumps, minimal


def error_of(doc_or_text) -> ScenarioError:
    text = doc_or_text if isinstance(doc_or_text, str) else dumps(doc_or_text)
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    return info.value


def test_minimal_scenario_parses():
    sc = parse_scenario(dumps(minimal()))
    assert list(sc.algebras) == ["Qeps"]
    sig = sc.signatures["Qeps[t;neg]"]
    assert sig.delta.is_zero and sig.kind == "polynomial"
    assert sc.ore_modules["S/T1"].dim == 1
    assert sc.seminorms["w"].weights == (1, Fraction(3, 2))
    assert sc.actions["double"].expect_tempered is False
    assert sc.parameters["trials"] == 6 and sc.parameters["seed"] == DEFAULTS["seed"]


def test_catalogue_parses_and_validates():
    text = data_text("catalogue.json")
    jsonschema.validate(json.loads(text), load_schema("scenario.schema.json"))
    sc = parse_scenario(text)
    assert len(sc.signatures) == 5
    assert sc.signatures["T2[t;conj,ad]"].delta.name == "ad_e12"


def test_round_trip():
    for text in (dumps(minimal()), data_text("catalogue.json")):
        once = emit_scenario(parse_scenario(text))
        assert emit_scenario(parse_scenario(once)) == once


def test_syntax_error_has_line_and_column():
    err = error_of('{\n  "algebras": {,\n}')
    assert err.line == 2 and err.column
    assert str(err).startswith("line 2, column")


def test_schema_error_has_path():
    doc = minimal()
    doc["algebras"]["Qeps"]["unit"] = {"1": "1/0"}
    err = error_of(doc)
    assert err.path == "$.algebras.Qeps.unit.1"
    err = error_of(minimal(suites=["nope"]))
    assert err.path == "$.suites[0]"


def test_unknown_morphism():
    err = error_of(minimal(signatures={"s": {"alpha": "missing"}}))
    assert err.path == "$.signatures.s.alpha"
    assert "missing" in str(err)


def test_unknown_basis_label():
    doc = minimal()
    doc["morphisms"]["neg"]["images"]["eps"] = {"x": 1}
    assert "'x'" in str(error_of(doc))


def test_non_morphism_rejected():
    doc = minimal()
    doc["morphisms"]["neg"]["images"]["eps"] = {"1": 1}
    assert "not an algebra morphism" in str(error_of(doc))


def test_bad_derivation_rejected():
    doc = minimal(
        morphisms={"id": {"algebra": "Qeps", "images": {"1": {"1": 1}, "eps": {"eps": 1}}}},
        derivations={"d": {"alpha": "id", "images": {"1": {}, "eps": {"1": 1}}}},
        signatures={"s": {"alpha": "id", "delta": "d"}},
        modules={}, ore_modules={}, actions={},
    )
    err = error_of(doc)
    assert "('eps', 'eps')" in str(err)
    assert err.path == "$.derivations.d"


def test_derivation_alpha_must_match():
    doc = minimal(
        derivations={"d": {"alpha": "double", "inner": {"eps": 1}}},
        signatures={"s": {"alpha": "neg", "delta": "d"}},
        ore_modules={}, actions={},
    )
    assert "twisted by" in str(error_of(doc))


def test_incompatible_t_action():
    doc = minimal()
    doc["modules"]["R"] = {"algebra": "Qeps", "dim": 2,
                           "action": {"1": [[1, 0], [0, 1]], "eps": [[0, 0], [1, 0]]}}
    doc["ore_modules"]["bad"] = {"signature": "Qeps[t;neg]", "module": "R", "T": [[1, 0], [0, 1]]}
    err = error_of(doc)
    assert err.path == "$.ore_modules.bad.T"


def test_weights_and_actions_validated():
    doc = minimal()
    doc["seminorms"]["w"]["weights"] = [1]
    assert error_of(doc).path == "$.seminorms.w.weights"
    doc = minimal()
    doc["morphisms"]["zero"] = {"algebra": "Qeps", "images": {"1": {"1": 1}, "eps": {}}}
    doc["actions"]["z"] = {"alpha1": "zero"}
    assert "not invertible" in str(error_of(doc))
