from __future__ import annotations

import pytest

from ontounpack import (
    Goal,
    IllFormedModelError,
    Scope,
    Severity,
    goal_holds,
    lint,
    validate_world,
)
from ontounpack.rules import sort_key

from conftest import FIXTURES, parse_ok

PAIR_SCOPE = Scope(per_classifier={"Person": 2, "Treatment": 2})

EVENT_TEXT = (FIXTURES / "healthcare_event.onto").read_text()

DISJOINT_GENSET = (
    "genset CareSeparation disjoint general Person"
    " specifics Patient, IndividualHealthcareProvider\n"
)


def ap(diags, rule_id):
    return [d for d in diags if d.rule_id == rule_id]


def test_ap1_flags_overlapping_fillers(event_model):
    diags = lint(event_model, PAIR_SCOPE)
    findings = ap(diags, "AP1")
    assert len(findings) == 1
    d = findings[0]
    assert d.severity is Severity.WARNING
    assert "Patient" in d.message and "HealthcareProvider" in d.message
    assert set(d.related) == {"participatesPatient", "participatesProvider"}


def test_ap1_witness_is_a_real_overlap(event_model):
    d = ap(lint(event_model, PAIR_SCOPE), "AP1")[0]
    w = d.witness
    assert w is not None
    goal = Goal(
        typings=(("x", "Patient"), ("x", "HealthcareProvider"), ("t", "Treatment")),
        links=(
            ("participatesPatient", "t", "x"),
            ("participatesProvider", "t", "x"),
        ),
    )
    assert goal_holds(w, goal)
    assert validate_world(event_model, w, PAIR_SCOPE) == []


def test_ap1_disjoint_genset_removes_the_finding():
    guarded = parse_ok(EVENT_TEXT + "\n" + DISJOINT_GENSET)
    assert ap(lint(guarded, PAIR_SCOPE), "AP1") == []


def test_ap1_silent_when_kinds_differ(relator_model):
    # Patient grows from Person, providers from Organization: no shared identity
    diags = lint(relator_model, Scope(default_count=2))
    assert ap(diags, "AP1") == []


def test_ap1_info_when_scope_starves_the_witness(event_model):
    # structurally matched, but a single person cannot fill both ends of
    # anything when no treatment exists
    scope = Scope(per_classifier={"Person": 1, "Treatment": 0, "Organization": 0})
    findings = ap(lint(event_model, scope), "AP1")
    assert len(findings) == 1
    assert findings[0].severity is Severity.INFO
    assert "no in-scope witness" in findings[0].message
    assert findings[0].witness is None


def test_ap2_warns_on_admitted_ties(relator_model):
    diags = lint(relator_model, Scope(default_count=1,
                                      per_classifier={"PathologicalCondition": 2}))
    findings = ap(diags, "AP2")
    assert len(findings) == 1
    d = findings[0]
    assert d.severity is Severity.WARNING
    assert "moreSevereThan" in d.message
    assert d.witness is not None
    assert len(d.related) == 2


def test_ap2_info_when_no_tie_is_reachable(relator_model):
    scope = Scope(default_count=1, per_classifier={"PathologicalCondition": 0})
    findings = ap(lint(relator_model, scope), "AP2")
    assert len(findings) == 1
    assert findings[0].severity is Severity.INFO


def test_lint_refuses_ill_formed_models(plain_model):
    with pytest.raises(IllFormedModelError):
        lint(plain_model, Scope(default_count=1))


def test_lint_output_is_sorted(event_model):
    diags = lint(event_model, PAIR_SCOPE)
    assert diags == sorted(diags, key=sort_key)


def test_lint_is_deterministic(event_model):
    a = lint(event_model, PAIR_SCOPE)
    b = lint(event_model, PAIR_SCOPE)
    assert [(d.rule_id, d.message, d.witness) for d in a] == [
        (d.rule_id, d.message, d.witness) for d in b
    ]
