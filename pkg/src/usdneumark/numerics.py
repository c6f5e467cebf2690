"""Dense complex linear-algebra and root-finding kernels.

Everything here is a pure function on small dense arrays (the pipeline
never exceeds a few dozen rows), backed by LAPACK through numpy with
deterministic post-processing so repeated runs give identical output.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DegeneratePolynomial, InvalidMatrix, NotHermitian


@dataclass(frozen=True)
class SvdResult:
    """Factorization m = u @ diag(sigma) @ v.conj().T."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def _require_finite(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidMatrix("matrix contains NaN or Inf entries")
    return m


def svd(m) -> SvdResult:
    """Singular value decomposition with a fixed phase convention.

    In each column of u the entry of largest modulus is made real and
    non-negative (the compensating phase goes into v), so the factors
    are reproducible bit-for-bit for a given input.
    """
    m = _require_finite(m)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    v = vh.conj().T
    for k in range(u.shape[1]):
        j = int(np.argmax(np.abs(u[:, k])))
        pivot = u[j, k]
        if abs(pivot) > 0.0:
            phase = pivot / abs(pivot)
            u[:, k] *= np.conj(phase)
            if k < v.shape[1]:
                v[:, k] *= np.conj(phase)
    return SvdResult(u=u, sigma=s, v=v)


def hermitian_min_eigenvalue(m, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    m = _require_finite(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian("matrix is not square")
    if np.max(np.abs(m - m.conj().T)) > tol.hermiticity:
        raise NotHermitian(
            "matrix deviates from Hermitian beyond %.1e" % tol.hermiticity
        )
    return float(np.linalg.eigvalsh(m)[0])


def real_even_polynomial_roots(coeffs) -> np.ndarray:
    """All roots of A x^8 + B x^6 + C x^4 + D x^2 + E.

    Substitutes y = x^2, finds the quartic's roots through companion-
    matrix eigenvalues, then returns +/- sqrt(y) for each.  Output is
    sorted (real part, then imaginary part) for determinism.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (5,):
        raise InvalidMatrix("expected exactly five even-power coefficients")
    if not np.all(np.isfinite(coeffs)):
        raise InvalidMatrix("non-finite polynomial coefficients")
    if np.all(coeffs == 0.0):
        raise DegeneratePolynomial("all coefficients vanish")
    y_roots = np.roots(coeffs)
    x = np.sqrt(y_roots.astype(complex))
    roots = np.concatenate([x, -x])
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def gram_matrix(columns) -> np.ndarray:
    """Hermitian matrix of pairwise inner products of the columns."""
    columns = _require_finite(columns)
    g = columns.conj().T @ columns
    return 0.5 * (g + g.conj().T)


def max_abs(m) -> float:
    """Largest entrywise modulus (used for residual reporting)."""
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def unitarity_defect(m) -> float:
    """max |m† m - I|, zero for a perfect unitary."""
    m = np.asarray(m, dtype=complex)
    return max_abs(m.conj().T @ m - np.eye(m.shape[1]))
