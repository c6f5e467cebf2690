"""Two-level rotation decomposition and Euler angles.

A unitary U is factored as R_{0,1}^dag R_{0,2}^dag ... R_{n-2,n-1}^dag
by eliminating, plane by plane, the subdiagonal entries of each column;
each two-level factor is also expressed as
exp(i alpha) Rz(beta) Ry(gamma) Rz(delta) on its plane.  Plane indices
are 0-based here; reports print them 1-based.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import AngleExtractionFailure, DecompositionFailure, NotUnitary
from .numerics import max_abs, unitarity_defect


@dataclass(frozen=True)
class RotationStep:
    k: int
    l: int
    matrix: np.ndarray  # full-size two-level unitary R_kl
    alpha: float        # degrees, parameters of R_kl^dag on the (k, l) plane
    beta: float
    gamma: float
    delta: float

    def block(self) -> np.ndarray:
        """2x2 block of R_kl^dag on the (k, l) plane."""
        m = self.matrix.conj().T
        return np.array(
            [[m[self.k, self.k], m[self.k, self.l]],
             [m[self.l, self.k], m[self.l, self.l]]]
        )


@dataclass(frozen=True)
class RotationSequence:
    steps: tuple
    reconstruction_error: float

    def product(self) -> np.ndarray:
        """prod of step.matrix^dag in sequence order (rebuilds U)."""
        dim = self.steps[0].matrix.shape[0]
        out = np.eye(dim, dtype=complex)
        for step in self.steps:
            out = out @ step.matrix.conj().T
        return out


def rotation_block_from_angles(alpha, beta, gamma, delta) -> np.ndarray:
    """exp(i alpha) Rz(beta) Ry(gamma) Rz(delta), angles in degrees."""
    al, be, ga, de = (np.deg2rad(x) for x in (alpha, beta, gamma, delta))
    cg, sg = np.cos(ga / 2), np.sin(ga / 2)
    return np.exp(1j * al) * np.array(
        [[np.exp(-0.5j * (be + de)) * cg, -np.exp(-0.5j * (be - de)) * sg],
         [np.exp(0.5j * (be - de)) * sg, np.exp(0.5j * (be + de)) * cg]]
    )


def _wrap_half_open(angle: float) -> float:
    """Wrap into (-180, 180]."""
    a = (angle + 180.0) % 360.0 - 180.0
    return 180.0 if a == -180.0 else a


def euler_angles_of_block(block: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES):
    """ZYZ angles (degrees) of a 2x2 unitary, gamma/2 in [0, 90].

    Identity blocks map to (0, 0, 0, 0); otherwise candidate branches
    are tried until one reproduces the block.
    """
    if max_abs(block - np.eye(2)) <= 1e-12:
        return 0.0, 0.0, 0.0, 0.0
    c = abs(block[0, 0])
    s = abs(block[1, 0])
    gamma = 2.0 * np.rad2deg(np.arctan2(s, c))
    det = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
    alpha0 = np.rad2deg(np.angle(det)) / 2.0

    for alpha in (alpha0, alpha0 + 180.0):
        if s <= 1e-12:
            total = np.rad2deg(np.angle(block[1, 1])) - alpha
            candidates = [(2.0 * total, 0.0), (0.0, 2.0 * total)]
        elif c <= 1e-12:
            diff = np.rad2deg(np.angle(block[1, 0])) - alpha
            candidates = [(2.0 * diff, 0.0), (diff, -diff)]
        else:
            half_sum = alpha - np.rad2deg(np.angle(block[0, 0]))
            half_diff = np.rad2deg(np.angle(block[1, 0])) - alpha
            candidates = [(half_sum + half_diff, half_sum - half_diff)]
        for beta_raw, delta_raw in candidates:
            a = alpha
            # wrapping a z angle by 360 flips the block sign; push the
            # flip into the global phase
            wrapped = []
            for ang in (beta_raw, delta_raw):
                w = _wrap_half_open(ang)
                # count 360-degree wraps (each contributes a sign flip)
                flips = round((ang - w) / 360.0)
                if flips % 2:
                    a += 180.0
                wrapped.append(w)
            beta, delta = wrapped
            a = _wrap_half_open(a)
            if max_abs(
                rotation_block_from_angles(a, beta, gamma, delta) - block
            ) <= tol.angle_roundtrip:
                return a, beta, gamma, delta
    raise AngleExtractionFailure(
        "no ZYZ branch reproduces the two-level block"
    )


def euler_angles(step: RotationStep, tol: Tolerances = DEFAULT_TOLERANCES):
    """Angles (alpha, beta, gamma, delta) in degrees for a step."""
    return euler_angles_of_block(step.block(), tol)


def _identity_step(dim: int, k: int, l: int, tol: Tolerances) -> RotationStep:
    return RotationStep(
        k=k, l=l, matrix=np.eye(dim, dtype=complex),
        alpha=0.0, beta=0.0, gamma=0.0, delta=0.0,
    )


def _make_step(dim: int, k: int, l: int, block_r: np.ndarray, tol: Tolerances) -> RotationStep:
    m = np.eye(dim, dtype=complex)
    m[k, k] = block_r[0, 0]
    m[k, l] = block_r[0, 1]
    m[l, k] = block_r[1, 0]
    m[l, l] = block_r[1, 1]
    al, be, ga, de = euler_angles_of_block(block_r.conj().T, tol)
    return RotationStep(k=k, l=l, matrix=m, alpha=al, beta=be, gamma=ga, delta=de)


def decompose(u: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> RotationSequence:
    """Reck-style elimination into dim*(dim-1)/2 two-level rotations.

    Planes with an already-zero target entry (and a clean diagonal) are
    recorded as identity rotations; the residual diagonal phase collects
    in the trailing 2x2 block and is absorbed by the last step.
    """
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary("matrix is not square")
    if unitarity_defect(u) > 1e-8:
        raise NotUnitary(f"unitarity defect {unitarity_defect(u):.3e} exceeds 1e-8")

    work = u.copy()
    steps = []
    for k in range(dim - 2):
        for l in range(k + 1, dim):
            a = work[k, k]
            b = work[l, k]
            if abs(b) <= tol.skip_rotation and abs(a.imag) <= tol.skip_rotation and a.real >= 0.0:
                steps.append(_identity_step(dim, k, l, tol))
                continue
            norm = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
            if norm <= tol.skip_rotation:
                steps.append(_identity_step(dim, k, l, tol))
                continue
            block = np.array(
                [[np.conj(a) / norm, np.conj(b) / norm],
                 [b / norm, -a / norm]]
            )
            step = _make_step(dim, k, l, block, tol)
            work = step.matrix @ work
            steps.append(step)
    # last plane: conjugate of the trailing block finishes elimination
    # and sweeps up the leftover phase
    trailing = work[dim - 2:, dim - 2:].conj().T
    step = _make_step(dim, dim - 2, dim - 1, trailing, tol)
    work = step.matrix @ work
    steps.append(step)

    seq = RotationSequence(steps=tuple(steps), reconstruction_error=0.0)
    err = float(np.linalg.norm(seq.product() - u))
    if err > tol.reconstruction:
        raise DecompositionFailure(
            f"rotation product deviates from the input by {err:.3e} (Frobenius)"
        )
    return RotationSequence(steps=tuple(steps), reconstruction_error=err)
