import json

import numpy as np
import pytest

from usdneumark import build_product_state, load_ensemble
from usdneumark.ensemble import QUBIT_LABELS
from usdneumark.errors import (
    InvalidInput,
    InvalidPriors,
    InvalidState,
    LinearlyDependent,
    ParseError,
)
from conftest import BB84_DOC


def states_doc(states, priors, dim=None):
    dim = dim if dim is not None else len(states[0])
    return {
        "dimension": dim,
        "states": [[[z.real, z.imag] for z in s] for s in states],
        "priors": list(priors),
    }


def test_circular_pair_norm():
    for lbl in ("c+", "c-"):
        v = build_product_state([QUBIT_LABELS[lbl]])
        assert np.vdot(v, v).real == pytest.approx(1.0, abs=1e-12)
    v = build_product_state([QUBIT_LABELS["c+"], QUBIT_LABELS["c-"]])
    assert np.vdot(v, v).real == pytest.approx(1.0, abs=1e-12)


def test_product_state_kron_order():
    v = build_product_state([QUBIT_LABELS["0"], QUBIT_LABELS["1"]])
    assert np.allclose(v, [0, 1, 0, 0])


def test_bb84_document(bb84_ensemble):
    e = bb84_ensemble
    assert e.dim == 8 and e.n == 4
    assert np.allclose(np.linalg.norm(e.states, axis=0), 1.0)
    g = e.gram()
    assert np.allclose(np.diag(g), 1.0)
    # the two diagonal triples are orthogonal to each other
    assert abs(g[0, 1]) <= 1e-12


def test_explicit_states_roundtrip():
    s = 0.3
    e = load_ensemble(
        json.dumps(
            states_doc(
                [np.array([1.0, 0.0]), np.array([s, np.sqrt(1 - s * s)])],
                [0.4, 0.6],
            )
        )
    )
    assert e.gram()[0, 1] == pytest.approx(s, abs=1e-12)


def test_phase_gauge_fixed():
    v = np.exp(1j * 0.7) * np.array([0.6, 0.8])
    e = load_ensemble(states_doc([v, np.array([1.0, 0.0])], [0.5, 0.5]))
    assert e.states[0, 0].imag == pytest.approx(0.0, abs=1e-12)
    assert e.states[0, 0].real > 0


def test_renormalization_window():
    e = load_ensemble(
        states_doc([np.array([1.0 + 5e-7, 0.0]), np.array([0.0, 1.0])], [0.5, 0.5])
    )
    assert np.linalg.norm(e.states[:, 0]) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidState):
        load_ensemble(
            states_doc([np.array([1.1, 0.0]), np.array([0.0, 1.0])], [0.5, 0.5])
        )


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("priors"),
        lambda d: d.update(priors=[0.5, 0.6]),
        lambda d: d.update(priors=[-0.1, 1.1]),
        lambda d: d.update(priors=[1.0]),
    ],
)
def test_bad_priors(mutate):
    doc = states_doc([np.array([1.0, 0.0]), np.array([0.0, 1.0])], [0.5, 0.5])
    mutate(doc)
    with pytest.raises((InvalidPriors, ParseError)):
        load_ensemble(doc)


def test_parse_errors():
    with pytest.raises(ParseError):
        load_ensemble("{not json")
    with pytest.raises(ParseError):
        load_ensemble({"dimension": 2, "priors": [1.0]})
    with pytest.raises(ParseError):
        load_ensemble({"product_states": [["x+"]], "priors": [1.0]})
    with pytest.raises(ParseError):
        load_ensemble(
            {"dimension": 3, "states": [[[1, 0], [0, 0]]], "priors": [1.0]}
        )


def test_more_states_than_dimensions():
    doc = states_doc(
        [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([0.6, 0.8])],
        [1 / 3] * 3,
    )
    with pytest.raises(ParseError):
        load_ensemble(doc)


def test_duplicated_state_rejected():
    doc = states_doc([np.array([1.0, 0.0]), np.array([1.0, 0.0])], [0.5, 0.5])
    with pytest.raises(LinearlyDependent):
        load_ensemble(doc)


def test_bad_factor():
    with pytest.raises(InvalidInput):
        build_product_state([np.array([1.0, 1.0])])
    with pytest.raises(InvalidInput):
        build_product_state([])


def test_dimension_mismatch_with_products():
    doc = dict(BB84_DOC)
    doc["dimension"] = 4
    with pytest.raises(ParseError):
        load_ensemble(doc)
