from __future__ import annotations

import json

from ontounpack import Model, ParseError, emit_json, load_json

from conftest import parse_ok


def fixture_round_trip(model):
    data = emit_json(model)
    back = load_json(data)
    assert isinstance(back, Model)
    assert back == model


def test_round_trip_plain(plain_model):
    fixture_round_trip(plain_model)


def test_round_trip_relator(relator_model):
    fixture_round_trip(relator_model)


def test_round_trip_event(event_model):
    fixture_round_trip(event_model)


def test_emit_is_byte_deterministic(relator_model):
    assert emit_json(relator_model) == emit_json(relator_model)


def test_emit_is_sorted_json(relator_model):
    doc = json.loads(emit_json(relator_model))
    assert list(doc) == sorted(doc)
    names = [c["name"] for c in doc["classifiers"]]
    assert names == sorted(names)


def test_empty_document_is_rejected():
    err = load_json(b"{}")
    assert isinstance(err, ParseError)


def test_malformed_json_is_rejected():
    err = load_json(b"{nope")
    assert isinstance(err, ParseError)


def test_unknown_stereotype_rejected(plain_model):
    doc = json.loads(emit_json(plain_model))
    doc["classifiers"][0]["stereotype"] = "widget"
    err = load_json(json.dumps(doc).encode())
    assert isinstance(err, ParseError)


def test_parent_cycle_rejected():
    m = parse_ok("model T\n\nkind A\nsubkind B specializes A\n")
    doc = json.loads(emit_json(m))
    for c in doc["classifiers"]:
        if c["name"] == "A":
            c["parents"] = ["B"]
    err = load_json(json.dumps(doc).encode())
    assert isinstance(err, ParseError)
    assert "cycle" in err.message.lower()


def test_dangling_parent_rejected(plain_model):
    doc = json.loads(emit_json(plain_model))
    doc["classifiers"][0]["parents"] = ["Ghost"]
    err = load_json(json.dumps(doc).encode())
    assert isinstance(err, ParseError)
