"""Synthesis of the mapping unitary and the projective measurement.

U1 is the norm-minimizing unitary taking the ladder states to the final
configuration, obtained as V W^dag from the SVD of the overlap matrix
A' = sum_i |Q_if><Q_i|; the total transformation is U1 composed with U0
embedded in the extended space.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidInput, SynthesisFailure
from .final_config import FinalConfiguration
from .ladder import LadderForm
from .numerics import svd


@dataclass(frozen=True)
class SynthesisResult:
    a_prime: np.ndarray
    u1: np.ndarray
    u_total: np.ndarray
    residual: float


def embed_unitary(u: np.ndarray, ext_dim: int) -> np.ndarray:
    """u ⊕ I on the ancilla block (ancillas start unentangled)."""
    d = u.shape[0]
    if ext_dim == d:
        return u
    out = np.eye(ext_dim, dtype=complex)
    out[:d, :d] = u
    return out


def synthesize_u1(
    ladder: LadderForm,
    fc: FinalConfiguration,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SynthesisResult:
    n = fc.n
    ext = fc.ext_dim
    psi = np.zeros((ext, n), dtype=complex)
    psi[:n, :] = ladder.coeffs
    a_prime = fc.states_f @ psi.conj().T
    res = svd(a_prime)
    u1 = res.u @ res.v.conj().T
    residual = float(2 * n - 2 * np.real(np.trace(a_prime @ u1.conj().T)))
    if residual > tol.synthesis_residual:
        raise SynthesisFailure(
            f"norm-minimization residual {residual:.3e} exceeds "
            f"{tol.synthesis_residual:.0e}; the final configuration does not "
            "preserve the state overlaps"
        )
    u_total = u1 @ embed_unitary(ladder.u0, ext)
    return SynthesisResult(a_prime=a_prime, u1=u1, u_total=u_total, residual=residual)


def simulate_measurement(fc: FinalConfiguration, state_index: int) -> np.ndarray:
    """Outcome distribution of the basis measurement on final state i
    (0-based).  Outcome k == i fires with the conclusive probability;
    outcomes beyond the first n carry the inconclusive mass."""
    if not 0 <= state_index < fc.n:
        raise InvalidInput(
            f"state index {state_index} out of range for {fc.n} states"
        )
    return np.abs(fc.states_f[:, state_index]) ** 2
