"""Ladder form of the input states and the unitary that produces it.

State j is rewritten on the first j basis kets with a real positive
leading coefficient; the coefficients are produced by a Gram-Schmidt
recursion driven purely by inner products, and U0 is synthesized so
that U0 |Q_j> equals ladder column j.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .ensemble import Ensemble
from .errors import LinearlyDependent, SynthesisFailure
from .numerics import max_abs, svd


@dataclass(frozen=True)
class LadderForm:
    coeffs: np.ndarray  # (n, n) upper triangular, real positive diagonal
    u0: np.ndarray      # (dim, dim) unitary


def ladder_coefficients(e: Ensemble, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Upper-triangular coefficients c[i, j] of state j on ket i."""
    g = e.gram()
    n = e.n
    c = np.zeros((n, n), dtype=complex)
    for j in range(n):
        if j > 0:
            c[0, j] = g[0, j]
        for i in range(1, j):
            c[i, j] = (g[i, j] - np.vdot(c[:i, i], c[:i, j])) / c[i, i]
        rem = 1.0 - float(np.sum(np.abs(c[:j, j]) ** 2))
        if rem <= tol.independence:
            raise LinearlyDependent(
                f"state {j} has squared leading coefficient {rem:.3e}; "
                "input states are (near) linearly dependent"
            )
        c[j, j] = np.sqrt(rem)
    return c


def build_u0(e: Ensemble, coeffs: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Unitary with U0 |Q_j> = ladder column j (zero-padded to dim)."""
    d, n = e.dim, e.n
    padded = np.zeros((d, n), dtype=complex)
    padded[:n, :] = coeffs
    a0 = padded @ e.states.conj().T
    res = svd(a0)
    u0 = res.u @ res.v.conj().T
    residual = max_abs(u0 @ e.states - padded)
    if residual > tol.synthesis_residual:
        raise SynthesisFailure(
            f"U0 reconstruction residual {residual:.3e} exceeds "
            f"{tol.synthesis_residual:.0e}"
        )
    return u0


def build_ladder(e: Ensemble, tol: Tolerances = DEFAULT_TOLERANCES) -> LadderForm:
    coeffs = ladder_coefficients(e, tol)
    return LadderForm(coeffs=coeffs, u0=build_u0(e, coeffs, tol))
