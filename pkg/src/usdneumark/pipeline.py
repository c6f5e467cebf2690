"""End-to-end pipeline and report (de)serialization.

run_pipeline chains load -> ladder -> reciprocal -> SDP -> final
configuration -> synthesis -> rotation decomposition and gathers every
invariant residual; verify_report re-derives those checks from the
serialized matrices alone, so a report can be audited without trusting
the solver that produced it.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .ensemble import Ensemble
from .final_config import FinalConfiguration, build_final_configuration
from .ladder import LadderForm, build_ladder
from .numerics import gram_matrix, max_abs, unitarity_defect
from .rotations import (
    RotationSequence,
    decompose,
    rotation_block_from_angles,
)
from .synthesis import SynthesisResult, simulate_measurement, synthesize_u1
from .usd_sdp import ReciprocalSet, UsdSolution, reciprocal_states, solve_usd


@dataclass(frozen=True)
class PipelineReport:
    ensemble: Ensemble
    ladder: LadderForm
    reciprocal: ReciprocalSet
    solution: UsdSolution
    final: FinalConfiguration
    synthesis: SynthesisResult
    rotations: RotationSequence
    checks: dict

    @property
    def passed(self) -> bool:
        return all(v["ok"] for v in self.checks.values())


def run_pipeline(e: Ensemble, tol: Tolerances = DEFAULT_TOLERANCES) -> PipelineReport:
    ladder = build_ladder(e, tol)
    rec = reciprocal_states(ladder.coeffs, tol)
    sol = solve_usd(e, rec, tol)
    fc = build_final_configuration(ladder.coeffs, sol, dim=e.dim, tol=tol)
    syn = synthesize_u1(ladder, fc, tol)
    seq = decompose(syn.u_total, tol)
    checks = compute_checks(e, ladder, sol, fc, syn, seq, tol)
    return PipelineReport(
        ensemble=e, ladder=ladder, reciprocal=rec, solution=sol,
        final=fc, synthesis=syn, rotations=seq, checks=checks,
    )


def _check(value: float, bound: float) -> dict:
    return {"value": float(value), "bound": float(bound), "ok": bool(value <= bound)}


def compute_checks(e, ladder, sol, fc, syn, seq, tol: Tolerances) -> dict:
    """All invariant residuals, each against its module tolerance."""
    g_in = e.gram()
    checks = {
        "u0_unitarity": _check(unitarity_defect(ladder.u0), tol.unitarity),
        "u1_unitarity": _check(unitarity_defect(syn.u1), tol.unitarity),
        "u_total_unitarity": _check(unitarity_defect(syn.u_total), tol.unitarity),
        "ladder_gram": _check(
            max_abs(gram_matrix(ladder.coeffs) - g_in), tol.gram
        ),
        "final_gram": _check(
            max_abs(gram_matrix(fc.states_f) - g_in), tol.gram
        ),
        "synthesis_residual": _check(syn.residual, 1e-8),
        "rotation_reconstruction": _check(seq.reconstruction_error, 1e-8),
    }
    # U1 action on the ladder states
    psi = np.zeros((fc.ext_dim, fc.n), dtype=complex)
    psi[: fc.n, :] = ladder.coeffs
    checks["u1_action"] = _check(max_abs(syn.u1 @ psi - fc.states_f), 1e-7)
    # measurement semantics
    cross = 0.0
    diag = 0.0
    for i in range(fc.n):
        probs = simulate_measurement(fc, i)
        diag = max(diag, abs(probs[i] - sol.p[i]))
        for k in range(fc.n):
            if k != i:
                cross = max(cross, probs[k])
    checks["measurement_cross"] = _check(cross, 1e-10)
    checks["measurement_diag"] = _check(diag, 1e-8)
    # Euler round trip
    rt = 0.0
    for step in seq.steps:
        block = rotation_block_from_angles(
            step.alpha, step.beta, step.gamma, step.delta
        )
        rt = max(rt, max_abs(block - step.block()))
    checks["euler_roundtrip"] = _check(rt, tol.angle_roundtrip)
    return checks


# --- serialization -------------------------------------------------------

def _cplx(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _cmat(m: np.ndarray) -> list:
    return [[_cplx(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _cvec(v: np.ndarray) -> list:
    return [_cplx(z) for z in np.asarray(v, dtype=complex)]


def parse_cmat(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def report_to_dict(rep: PipelineReport) -> dict:
    e, fc = rep.ensemble, rep.final
    return {
        "ensemble": {
            "dimension": e.dim,
            "n_states": e.n,
            "states": _cmat(e.states.T),
            "priors": [float(x) for x in e.priors],
        },
        "ladder": {
            "coefficients": _cmat(rep.ladder.coeffs),
            "u0": _cmat(rep.ladder.u0),
        },
        "usd": {
            "p": [float(x) for x in rep.solution.p],
            "total_pd": rep.solution.total_pd,
            "duality_gap": rep.solution.duality_gap,
            "iterations": rep.solution.iterations,
        },
        "final_configuration": {
            "n": fc.n,
            "ext_dim": fc.ext_dim,
            "g": _cvec(fc.g),
            "layout": [
                {
                    "state": i,
                    "conclusive_ket": lay[0],
                    "ancilla_g_range": [lay[1][0], lay[1][1]],
                }
                for i, lay in enumerate(fc.layout)
            ],
            "states_f": _cmat(fc.states_f.T),
        },
        "synthesis": {
            "u1": _cmat(rep.synthesis.u1),
            "u_total": _cmat(rep.synthesis.u_total),
            "residual": rep.synthesis.residual,
        },
        "rotations": {
            "reconstruction_error": rep.rotations.reconstruction_error,
            "steps": [
                {
                    "k": s.k,
                    "l": s.l,
                    "alpha": s.alpha,
                    "beta": s.beta,
                    "gamma": s.gamma,
                    "delta": s.delta,
                    "matrix": _cmat(s.matrix),
                }
                for s in rep.rotations.steps
            ],
        },
        "checks": rep.checks,
        "status": "OK" if rep.passed else "FAILED",
    }


def verify_report(doc: dict, tol: Tolerances = DEFAULT_TOLERANCES) -> list:
    """Recompute every invariant from the report's own matrices.

    Returns the names of failed checks (empty when the report is
    internally consistent).
    """
    failures = []

    states = parse_cmat(doc["ensemble"]["states"]).T
    coeffs = parse_cmat(doc["ladder"]["coefficients"])
    u0 = parse_cmat(doc["ladder"]["u0"])
    u1 = parse_cmat(doc["synthesis"]["u1"])
    u_total = parse_cmat(doc["synthesis"]["u_total"])
    p = np.asarray(doc["usd"]["p"], dtype=float)
    n = int(doc["final_configuration"]["n"])
    ext = int(doc["final_configuration"]["ext_dim"])

    # rebuild the final states from the amplitude vector + layout; the
    # stored states_f is only cross-checked against them
    g_vec = parse_cmat(doc["final_configuration"]["g"])
    states_f = np.zeros((ext, n), dtype=complex)
    for lay in doc["final_configuration"]["layout"]:
        i = int(lay["state"])
        states_f[int(lay["conclusive_ket"]), i] = g_vec[i]
        lo, hi = (int(x) for x in lay["ancilla_g_range"])
        states_f[n : n + (hi - lo), i] = g_vec[lo:hi]
    if max_abs(states_f - parse_cmat(doc["final_configuration"]["states_f"]).T) > 1e-8:
        failures.append("consistency:states_f")

    for name, u in (("u0", u0), ("u1", u1), ("u_total", u_total)):
        if unitarity_defect(u) > 1e-8:
            failures.append(f"unitarity:{name}")

    g_in = gram_matrix(states)
    if max_abs(gram_matrix(coeffs) - g_in) > tol.gram:
        failures.append("gram:ladder")
    if max_abs(gram_matrix(states_f) - g_in) > tol.gram:
        failures.append("gram:final_configuration")

    # feasibility of the detection probabilities
    gram_f = gram_matrix(coeffs) - np.diag(p)
    if float(np.linalg.eigvalsh(0.5 * (gram_f + gram_f.conj().T))[0]) < -tol.feasibility:
        failures.append("feasibility:detection_probabilities")

    # measurement semantics straight from the final states
    for i in range(n):
        probs = np.abs(states_f[:, i]) ** 2
        if abs(probs[i] - p[i]) > 1e-6:
            failures.append("measurement:conclusive_probability")
            break
        if any(probs[k] > 1e-8 for k in range(n) if k != i):
            failures.append("measurement:cross_state")
            break

    # rotation product reconstruction and Euler round trip
    prod = np.eye(ext, dtype=complex)
    rt_fail = False
    for s in doc["rotations"]["steps"]:
        m = parse_cmat(s["matrix"])
        prod = prod @ m.conj().T
        k, l = int(s["k"]), int(s["l"])
        block = rotation_block_from_angles(
            s["alpha"], s["beta"], s["gamma"], s["delta"]
        )
        md = m.conj().T
        stored = np.array([[md[k, k], md[k, l]], [md[l, k], md[l, l]]])
        if max_abs(block - stored) > 1e-7:
            rt_fail = True
    if rt_fail:
        failures.append("rotations:euler_roundtrip")
    if float(np.linalg.norm(prod - u_total)) > 1e-7:
        failures.append("rotations:product_reconstruction")

    return failures
