"""Final discriminable configuration in the extended space.

Each state keeps a conclusive amplitude sqrt(p_i) on its own basis ket
and spreads its inconclusive weight over the ancilla kets N+1 .. 2N-1
in a triangular pattern: state N touches only ket N+1, state N-1 the
first two ancilla kets, and so on, with states 1 and 2 sharing the full
ancilla range.  All but two amplitudes follow from a backward recursion
over normalization and pairwise-overlap constraints; the final shared
pair is pinned down through an even degree-8 polynomial.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    DegenerateConclusiveAmplitude,
    InconsistentAmplitudes,
    NoRealRoot,
    RecursionBreakdown,
)
from .numerics import gram_matrix, real_even_polynomial_roots


@dataclass(frozen=True)
class PolynomialData:
    """Reduced data (a, b, c, d) for the last amplitude pair and the
    even polynomial coefficients built from it."""

    a: float
    b: float
    c: float
    d: float
    theta: float
    coeff_a: float
    coeff_b: float
    coeff_c: float
    coeff_d: float
    coeff_e: float

    def coefficients(self) -> np.ndarray:
        return np.array(
            [self.coeff_a, self.coeff_b, self.coeff_c, self.coeff_d, self.coeff_e]
        )


@dataclass(frozen=True)
class FinalConfiguration:
    n: int
    ext_dim: int
    g: np.ndarray           # amplitude vector, length n(n+3)/2 - 1
    layout: tuple           # per state: (conclusive ket, ancilla g-slice, count)
    states_f: np.ndarray    # (ext_dim, n) assembled final states


def neumark_dimension(n: int, d: int) -> int:
    """Dimension of the extended space: 2n-1, unless the original space
    is already larger."""
    if d < n:
        raise ValueError("original dimension smaller than the number of states")
    return max(d, 2 * n - 1)


def amplitude_count(n: int) -> int:
    return n * (n + 3) // 2 - 1


def _ancilla_start(n: int, i: int) -> int:
    """0-based start of state i's ancilla amplitudes inside g (state
    index i is 0-based)."""
    if i == 0:
        return n
    i1 = i + 1
    return i1 * (2 * n + 3 - i1) // 2 - 2


def _ancilla_count(n: int, i: int) -> int:
    return n - 1 if i == 0 else n - i


def compute_polynomial_data(coeffs: np.ndarray, g: np.ndarray) -> PolynomialData:
    """Reduce the remaining two-amplitude system to (a, b, c, d) and the
    even-polynomial coefficients.

    Expects every amplitude except the pair g_{2N-1}, g_{3N-2} to be
    fixed already (their slots in g are ignored).
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.shape[0]
    gram = gram_matrix(coeffs)
    # shared-ket amplitudes already fixed for states 1 and 2
    v1 = g[n : 2 * n - 2]
    v2 = g[2 * n - 1 : 3 * n - 3]
    a = 1.0 - float(np.abs(g[0]) ** 2) - float(np.sum(np.abs(v1) ** 2))
    b = 1.0 - float(np.abs(g[1]) ** 2) - float(np.sum(np.abs(v2) ** 2))
    if a < -1e-8 or b < -1e-8:
        raise InconsistentAmplitudes(
            f"residual norms a={a:.3e}, b={b:.3e} are negative"
        )
    a = max(a, 0.0)
    b = max(b, 0.0)
    cross = complex(gram[0, 1]) - complex(np.vdot(v1, v2))
    c = float(cross.real)
    d = float(cross.imag)
    theta = float(np.arctan2(d, c))

    cab = c * c - a * b
    core = a * a * d**4 + a * a * cab * cab - 2.0 * d * d * a * a * cab
    ca = ((4 * d * d - 4 * a * b) * cab - 4 * c * c * d * d) ** 2
    cb = ((4 * d * d - 4 * a * b) * cab + 4 * c * c * d * d) * (
        8 * a * a * b * (cab - d * d)
    ) - 64 * c * c * d * d * cab * (2 * a * a * b)
    cc = (
        core * ((4 * d * d - 4 * a * b) * cab + 4 * c * c * d * d)
        + (4 * a * a * b * (cab - d * d)) ** 2
        + 64 * c * c * d * d * cab * (d * d + a * b) * a * a
    )
    cd = core * (4 * a * a * b * (cab - d * d))
    ce = core * core
    return PolynomialData(
        a=a, b=b, c=c, d=d, theta=theta,
        coeff_a=ca, coeff_b=cb, coeff_c=cc, coeff_d=cd, coeff_e=ce,
    )


def _solve_final_pair(pd: PolynomialData, tol: Tolerances):
    """Amplitudes (x, y) with |x|^2 = a, |y|^2 = b, conj(x) y = c + i d.

    Degenerate branches use closed forms; otherwise the real roots of
    the even degree-8 polynomial in Im(x) are scanned (smallest
    admissible magnitude first) with a 4-way sign test on the real
    parts.
    """
    a, b, c, d = pd.a, pd.b, pd.c, pd.d
    target = complex(c, d)
    eps = tol.degenerate_branch

    def ok(x, y):
        return abs(np.conj(x) * y - target) <= 1e-8

    if abs(d) <= eps:
        x = np.sqrt(a)
        y = np.sqrt(b) if c >= 0.0 or abs(c) <= eps else -np.sqrt(b)
        if ok(x, y):
            return complex(x), complex(y)
        raise InconsistentAmplitudes(
            "degenerate branch (d ~ 0) cannot satisfy the overlap constraint; "
            "detection probabilities are inconsistent with the input states"
        )
    if abs(c) <= eps:
        y = complex(np.sqrt(b))
        x = -1j * np.sign(d) * np.sqrt(a)
        if ok(x, y):
            return x, y
        raise InconsistentAmplitudes(
            "degenerate branch (c ~ 0) cannot satisfy the overlap constraint; "
            "detection probabilities are inconsistent with the input states"
        )

    roots = real_even_polynomial_roots(pd.coefficients())
    real_roots = sorted(
        {float(r.real) for r in roots if abs(r.imag) <= 1e-8},
        key=lambda r: (r * r, r),
    )
    admissible = [r for r in real_roots if r * r <= a + 1e-12]
    for x_im in admissible:
        disc = (2 * c * x_im) ** 2 - 4 * a * (b * x_im * x_im + c * c - a * b)
        if disc < -1e-10:
            continue
        disc = max(disc, 0.0)
        for y_im in ((2 * c * x_im + np.sqrt(disc)) / (2 * a),
                     (2 * c * x_im - np.sqrt(disc)) / (2 * a)):
            if y_im * y_im > b + 1e-10:
                continue
            xr = np.sqrt(max(a - x_im * x_im, 0.0))
            yr = np.sqrt(max(b - y_im * y_im, 0.0))
            for sx in (1.0, -1.0):
                for sy in (1.0, -1.0):
                    x = complex(sx * xr, x_im)
                    y = complex(sy * yr, y_im)
                    if ok(x, y):
                        return x, y
    # the squared elimination behind the degree-8 polynomial can lose the
    # whole solution set when the overlap target is exactly attainable
    # (|c + id|^2 = ab); the direct closed form covers that case
    if a > eps:
        x = complex(np.sqrt(a))
        y = complex(c, d) / x
        if abs(abs(y) ** 2 - b) <= 1e-8 and ok(x, y):
            return x, y
    raise NoRealRoot(
        "no admissible real polynomial root reproduces the state overlaps; "
        "check the input states (they may be nearly linearly dependent or "
        "the detection probabilities inconsistent)"
    )


def build_final_configuration(
    coeffs: np.ndarray,
    sol,
    dim: int | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> FinalConfiguration:
    """Assemble the extended-space states from the ladder coefficients
    and the optimal detection probabilities."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = coeffs.shape[0]
    p = np.asarray(sol.p, dtype=float)
    if np.any(p <= 1e-10):
        worst = int(np.argmin(p))
        raise DegenerateConclusiveAmplitude(
            f"state {worst} has conclusive probability {p[worst]:.3e}; "
            "a consistent final configuration requires every p_i > 0"
        )
    gram = gram_matrix(coeffs)
    length = amplitude_count(n)
    g = np.zeros(length, dtype=complex)
    g[:n] = np.sqrt(np.clip(p, 0.0, 1.0))

    # v[i] = ancilla amplitudes of state i on kets n+1 .. 2n-1 (0-based
    # component k <-> ket n+k); state i >= 1 occupies components
    # 0 .. n-1-i, state 0 all n-1 of them.
    v = np.zeros((n, n - 1), dtype=complex)

    def flush(i):
        s = _ancilla_start(n, i)
        cnt = _ancilla_count(n, i)
        g[s : s + cnt] = v[i, :cnt]

    # backward recursion: each overlap constraint with a shorter-support
    # state m pins component n-1-m (the leading component of v[m]);
    # a state's own leading component then follows from normalization.
    # States 0 and 1 keep their last shared component for the final pair.
    for j in range(n - 1, -1, -1):
        for m in range(n - 1, max(j, 1), -1):
            k = n - 1 - m
            pivot = np.conj(v[m, k])
            rhs = gram[m, j] - np.vdot(v[m, :k], v[j, :k])
            if abs(pivot) < tol.recursion_pivot:
                if abs(rhs) < 1e-8:
                    v[j, k] = 0.0
                    continue
                raise RecursionBreakdown(
                    f"overlap constraint between states {m} and {j} divides by "
                    f"an amplitude below {tol.recursion_pivot:.0e}"
                )
            v[j, k] = rhs / pivot
        if j >= 2 or (j == 1 and n == 2):
            lead = n - 1 - j
            rem = 1.0 - p[j] - float(np.sum(np.abs(v[j, :lead]) ** 2))
            if rem < -1e-8:
                raise InconsistentAmplitudes(
                    f"state {j} normalization residual {rem:.3e} is negative"
                )
            v[j, lead] = np.sqrt(max(rem, 0.0))
            flush(j)

    if n == 2:
        # single shared amplitude: fixed by the one overlap constraint,
        # its norm then checked against normalization
        y = v[1, 0]
        target = complex(gram[0, 1])
        aa = 1.0 - p[0]
        if abs(y) < tol.recursion_pivot:
            if abs(target) > 1e-8:
                raise InconsistentAmplitudes(
                    "states overlap but the second state has no inconclusive weight"
                )
            v[0, 0] = np.sqrt(max(aa, 0.0))
        else:
            v[0, 0] = np.conj(target / y)
            if abs(abs(v[0, 0]) ** 2 - aa) > 1e-6:
                raise InconsistentAmplitudes(
                    "two-state configuration cannot satisfy both normalization "
                    "and the overlap constraint"
                )
        flush(0)
    else:
        flush(0)
        flush(1)
        pdata = compute_polynomial_data(coeffs, g)
        x, y = _solve_final_pair(pdata, tol)
        v[0, n - 2] = x
        v[1, n - 2] = y
        flush(0)
        flush(1)

    ext = neumark_dimension(n, dim if dim is not None else n)
    states_f = np.zeros((ext, n), dtype=complex)
    layout = []
    for i in range(n):
        states_f[i, i] = g[i]
        cnt = _ancilla_count(n, i)
        states_f[n : n + cnt, i] = v[i, :cnt]
        s = _ancilla_start(n, i)
        layout.append((i, (s, s + cnt), cnt))
    return FinalConfiguration(
        n=n, ext_dim=ext, g=g, layout=tuple(layout), states_f=states_f
    )
