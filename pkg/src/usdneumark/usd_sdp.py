"""Reciprocal states and the semidefinite program for the conclusive
probabilities.

The program  max  sum_i mu_i p_i  s.t.  I - sum_i p_i |qt_i><qt_i| >= 0,
p_i >= 0  is solved with a self-contained logarithmic-barrier Newton
method; a brute-force grid scan (oracle_usd) provides an independent
check for small instances.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .ensemble import Ensemble
from .errors import IllConditioned, Infeasible, OracleTooLarge, SolverStalled
from .numerics import gram_matrix


@dataclass(frozen=True)
class ReciprocalSet:
    """Columns are the reciprocal states in the ladder basis."""

    tilde_states: np.ndarray  # (n, n)


@dataclass(frozen=True)
class UsdSolution:
    p: np.ndarray
    total_pd: float
    duality_gap: float
    iterations: int


def reciprocal_states(coeffs: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> ReciprocalSet:
    """Psi (Psi^dag Psi)^{-1} for the ladder coefficient matrix Psi."""
    coeffs = np.asarray(coeffs, dtype=complex)
    g = gram_matrix(coeffs)
    cond = float(np.linalg.cond(g))
    if cond > 1e12:
        raise IllConditioned(f"Gram matrix condition number {cond:.3e} exceeds 1e12")
    tilde = np.linalg.solve(g.T, coeffs.T).T  # coeffs @ inv(g)
    return ReciprocalSet(tilde_states=tilde)


def _is_pos_def(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(m)
        return True
    except np.linalg.LinAlgError:
        return False


def constraint_matrix(rec: ReciprocalSet, p: np.ndarray) -> np.ndarray:
    """M(p) = I - sum_i p_i |qt_i><qt_i| (the inconclusive operator)."""
    q = rec.tilde_states
    n = q.shape[0]
    m = np.eye(n, dtype=complex)
    for i in range(q.shape[1]):
        m -= p[i] * np.outer(q[:, i], q[:, i].conj())
    return 0.5 * (m + m.conj().T)


def solve_usd(e: Ensemble, rec: ReciprocalSet, tol: Tolerances = DEFAULT_TOLERANCES) -> UsdSolution:
    """Barrier Newton solve of the detection-probability program.

    Minimizes -t mu^T p - logdet M(p) - sum log p_i along the central
    path, t growing by 10x until the 2N/t gap bound falls below
    tol.barrier_gap, then scales p onto the semidefinite boundary so the
    downstream final-configuration constraints are consistent to
    machine precision.
    """
    q = rec.tilde_states
    n = q.shape[1]
    mu = np.asarray(e.priors, dtype=float)

    # strictly feasible start
    s_total = q @ q.conj().T
    lam_max = float(np.linalg.eigvalsh(s_total)[-1])
    p = np.full(n, 0.5 / (n * lam_max))
    if not _is_pos_def(constraint_matrix(rec, p)):
        p = np.full(n, 1e-12)
        if not _is_pos_def(constraint_matrix(rec, p)):
            raise Infeasible("no strictly feasible starting point")

    total_newton = 0
    t = 1.0
    while True:
        for _ in range(tol.max_newton_iterations):
            m = constraint_matrix(rec, p)
            m_inv_q = np.linalg.solve(m, q)  # columns M^{-1} qt_i
            w = q.conj().T @ m_inv_q         # w[i, j] = qt_i^dag M^{-1} qt_j
            grad = -t * mu + np.real(np.diag(w)) - 1.0 / p
            hess = np.abs(w) ** 2 + np.diag(1.0 / p**2)
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError as exc:
                raise SolverStalled("singular Newton system") from exc
            decrement = float(-grad @ step)
            # the objective scales with t, and so does the attainable
            # accuracy of the decrement; suboptimality in p stays
            # O(decrement / t), far below the gap bound
            if decrement / 2.0 <= 1e-12 * max(1.0, t):
                break
            # backtracking: stay strictly feasible, then Armijo
            s = 1.0
            f0 = _barrier_value(rec, p, mu, t)
            while s > 1e-14:
                cand = p + s * step
                if np.all(cand > 0.0) and _is_pos_def(constraint_matrix(rec, cand)):
                    f1 = _barrier_value(rec, cand, mu, t)
                    if f1 <= f0 - 0.25 * s * decrement:
                        break
                s *= 0.5
            else:
                # no Armijo decrease left at the floating-point noise
                # floor: the iterate is as centered as it will get
                break
            p = p + s * step
            total_newton += 1
        else:
            raise SolverStalled(
                f"Newton did not converge in {tol.max_newton_iterations} iterations"
            )
        if 2.0 * n / t <= tol.barrier_gap:
            break
        t *= 10.0
    gap = 2.0 * n / t

    # push onto the constraint boundary: largest s with M(s p) >= 0
    weighted = np.zeros_like(s_total)
    for i in range(n):
        weighted += p[i] * np.outer(q[:, i], q[:, i].conj())
    lam = float(np.linalg.eigvalsh(0.5 * (weighted + weighted.conj().T))[-1])
    if lam > 0.0:
        p = p / lam

    p = np.clip(p, 0.0, 1.0)
    p[p < tol.amplitude_clip] = 0.0
    return UsdSolution(
        p=p,
        total_pd=float(mu @ p),
        duality_gap=gap,
        iterations=total_newton,
    )


def _barrier_value(rec: ReciprocalSet, p: np.ndarray, mu: np.ndarray, t: float) -> float:
    m = constraint_matrix(rec, p)
    sign, logdet = np.linalg.slogdet(m)
    if sign.real <= 0.0:
        return np.inf
    return float(-t * (mu @ p) - logdet - np.sum(np.log(p)))


def _det_batch(m: np.ndarray) -> np.ndarray:
    """Determinants of stacked 2x2 or 3x3 Hermitian matrices (real output)."""
    k = m.shape[-1]
    if k == 2:
        d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    elif k == 3:
        d = (
            m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
            - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
            + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
        )
    else:
        raise ValueError("batch determinant supports only 2x2 and 3x3")
    return d.real


def oracle_usd(e: Ensemble, rec: ReciprocalSet, grid_step: float) -> UsdSolution:
    """Independent grid-scan maximizer for N <= 3.

    By the congruence Psi^dag M(p) Psi = G - diag(p), feasibility is
    positive semidefiniteness of G - diag(p).  The first N-1
    probabilities are scanned on a half-step-offset grid (plus the zero
    endpoint); for each point the last probability is maximized exactly
    through the Schur complement det(G - diag(p, 0)) / det(leading
    minor).  The offset keeps grid points away from the singular leading
    minors that occur when an optimum sits exactly on a round value.
    The reported duality_gap is the grid resolution, an upper bound on
    the distance to the true optimum.
    """
    n = rec.tilde_states.shape[1]
    if n > 3:
        raise OracleTooLarge("grid oracle supports at most 3 states")
    if grid_step <= 0.0:
        raise ValueError("grid_step must be positive")
    mu = np.asarray(e.priors, dtype=float)
    gram = gram_matrix(e.states)

    grid = np.concatenate([[0.0], np.arange(0.5 * grid_step, 1.0, grid_step)])
    axes = np.meshgrid(*([grid] * (n - 1)), indexing="ij")
    pts = np.stack([a.reshape(-1) for a in axes], axis=-1)  # (G, n-1)

    h0 = np.broadcast_to(gram, (pts.shape[0], n, n)).copy()
    idx = np.arange(n - 1)
    h0[:, idx, idx] -= pts

    if n == 2:
        det_minor = h0[:, 0, 0].real
        feas = det_minor > 1e-12
    else:
        det_minor = (
            h0[:, 0, 0] * h0[:, 1, 1] - h0[:, 0, 1] * h0[:, 1, 0]
        ).real
        feas = (h0[:, 0, 0].real > 0.0) & (det_minor > 1e-12)

    det_full = _det_batch(h0)
    feas &= det_full > -1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        p_last = np.where(feas, det_full / np.where(feas, det_minor, 1.0), 0.0)
    p_last = np.clip(np.nan_to_num(p_last, nan=0.0), 0.0, 1.0)

    objective = pts @ mu[: n - 1] + mu[n - 1] * p_last
    objective[~feas] = -np.inf
    if not np.any(feas):
        raise Infeasible("no feasible grid point")
    best = int(np.argmax(objective))
    p = np.concatenate([pts[best], [p_last[best]]])
    return UsdSolution(
        p=p,
        total_pd=float(objective[best]),
        duality_gap=float(grid_step),
        iterations=int(pts.shape[0]),
    )
