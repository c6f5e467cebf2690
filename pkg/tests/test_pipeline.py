import copy

import numpy as np

from usdneumark import report_to_dict, run_pipeline, verify_report
from usdneumark.pipeline import parse_cmat
from conftest import random_ensemble, two_state_ensemble


def test_bb84_checks_pass(bb84_report):
    assert bb84_report.passed
    for name, chk in bb84_report.checks.items():
        assert chk["ok"], name


def test_report_roundtrip(bb84_report):
    doc = report_to_dict(bb84_report)
    assert doc["status"] == "OK"
    assert verify_report(doc) == []
    # serialized matrices survive the [re, im] encoding
    u0 = parse_cmat(doc["ladder"]["u0"])
    assert np.abs(u0 - bb84_report.ladder.u0).max() == 0.0


def test_verify_catches_tampered_amplitude(bb84_report):
    doc = report_to_dict(bb84_report)
    doc = copy.deepcopy(doc)
    doc["final_configuration"]["g"][0] = [0.9, 0.0]
    failures = verify_report(doc)
    assert any(f.startswith("gram") or f.startswith("feasibility") for f in failures)


def test_verify_catches_tampered_rotation(bb84_report):
    doc = copy.deepcopy(report_to_dict(bb84_report))
    step = doc["rotations"]["steps"][5]
    step["alpha"] = step["alpha"] + 7.0
    failures = verify_report(doc)
    assert failures


def test_verify_catches_tampered_unitary(bb84_report):
    doc = copy.deepcopy(report_to_dict(bb84_report))
    doc["synthesis"]["u1"][0][0] = [2.0, 0.0]
    failures = verify_report(doc)
    assert any("u1" in f for f in failures)


def test_pipeline_two_state():
    rep = run_pipeline(two_state_ensemble(0.3))
    assert rep.passed
    assert np.abs(rep.solution.p - 0.7).max() <= 1e-5
    assert rep.final.ext_dim == 3
    assert len(rep.rotations.steps) == 3


def test_pipeline_random_reports_verify():
    rng = np.random.default_rng(60)
    for _ in range(5):
        e = random_ensemble(rng, 3, 4)
        rep = run_pipeline(e)
        assert rep.passed
        assert verify_report(report_to_dict(rep)) == []
