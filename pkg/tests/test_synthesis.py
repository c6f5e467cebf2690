import numpy as np
import pytest

from usdneumark import (
    build_final_configuration,
    build_ladder,
    simulate_measurement,
    synthesize_u1,
)
from usdneumark.errors import InvalidInput, SynthesisFailure
from usdneumark.final_config import FinalConfiguration
from usdneumark.numerics import unitarity_defect
from usdneumark.synthesis import embed_unitary
from usdneumark.usd_sdp import reciprocal_states, solve_usd
from conftest import random_ensemble, two_state_ensemble


def full_synthesis(e):
    lad = build_ladder(e)
    sol = solve_usd(e, reciprocal_states(lad.coeffs))
    fc = build_final_configuration(lad.coeffs, sol, dim=e.dim)
    return lad, sol, fc, synthesize_u1(lad, fc)


def test_trace_equals_n():
    rng = np.random.default_rng(40)
    e = random_ensemble(rng, 3, 3)
    _, _, _, syn = full_synthesis(e)
    tr = np.trace(syn.a_prime @ syn.u1.conj().T)
    assert tr.imag == pytest.approx(0.0, abs=1e-8)
    assert tr.real == pytest.approx(3.0, abs=1e-8)


def test_singular_values_are_gram_eigenvalues():
    # A' = sum |Q_if><Q_i| has the Gram spectrum as its singular values
    rng = np.random.default_rng(41)
    e = random_ensemble(rng, 3, 4)
    _, _, fc, syn = full_synthesis(e)
    sigma = np.linalg.svd(syn.a_prime, compute_uv=False)
    want = np.sort(np.linalg.eigvalsh(e.gram()))[::-1]
    assert np.abs(sigma[:3] - want).max() <= 1e-8
    assert np.abs(sigma[3:]).max() <= 1e-8


def test_u1_maps_ladder_to_final():
    rng = np.random.default_rng(42)
    for _ in range(5):
        e = random_ensemble(rng, 3, 3)
        lad, _, fc, syn = full_synthesis(e)
        assert unitarity_defect(syn.u1) <= 1e-10
        psi = np.zeros((fc.ext_dim, fc.n), dtype=complex)
        psi[: fc.n] = lad.coeffs
        assert np.abs(syn.u1 @ psi - fc.states_f).max() <= 1e-7
        assert syn.residual <= 1e-8


def test_u_total_maps_input_states():
    rng = np.random.default_rng(43)
    e = random_ensemble(rng, 3, 5)
    _, _, fc, syn = full_synthesis(e)
    padded = np.zeros((fc.ext_dim, e.n), dtype=complex)
    padded[: e.dim] = e.states
    assert np.abs(syn.u_total @ padded - fc.states_f).max() <= 1e-7


def test_embed_unitary():
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    big = embed_unitary(u, 4)
    assert big.shape == (4, 4)
    assert np.array_equal(big[2:, 2:], np.eye(2))
    assert np.array_equal(big[:2, :2], u)


def test_measurement_two_state():
    e = two_state_ensemble(0.6)
    _, sol, fc, _ = full_synthesis(e)
    for i in range(2):
        probs = simulate_measurement(fc, i)
        assert probs[i] == pytest.approx(0.4, abs=1e-6)
        assert probs[1 - i] <= 1e-10
        assert probs[2:].sum() == pytest.approx(0.6, abs=1e-6)
        assert probs.sum() == pytest.approx(1.0, abs=1e-8)


def test_measurement_index_validation(bb84_report):
    with pytest.raises(InvalidInput):
        simulate_measurement(bb84_report.final, 4)
    with pytest.raises(InvalidInput):
        simulate_measurement(bb84_report.final, -1)


def test_inconsistent_configuration_rejected():
    e = two_state_ensemble(0.6)
    lad, _, fc, _ = full_synthesis(e)
    bad = FinalConfiguration(
        n=fc.n,
        ext_dim=fc.ext_dim,
        g=fc.g,
        layout=fc.layout,
        states_f=np.roll(fc.states_f, 1, axis=0) * 0.9,
    )
    with pytest.raises(SynthesisFailure):
        synthesize_u1(lad, bad)
