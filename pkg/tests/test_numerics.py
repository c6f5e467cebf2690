import numpy as np
import pytest

from usdneumark.errors import DegeneratePolynomial, NotHermitian
from usdneumark.numerics import (
    hermitian_min_eigenvalue,
    real_even_polynomial_roots,
    svd,
)


def rand_matrix(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def test_svd_reconstruction():
    rng = np.random.default_rng(1)
    for d in range(2, 10):
        m = rand_matrix(rng, d)
        res = svd(m)
        rebuilt = res.u @ np.diag(res.sigma) @ res.v.conj().T
        assert np.abs(rebuilt - m).max() <= 1e-9 * np.linalg.norm(m)


def test_svd_deterministic_phases():
    rng = np.random.default_rng(2)
    m = rand_matrix(rng, 5)
    r1, r2 = svd(m), svd(m.copy())
    assert np.array_equal(r1.u, r2.u)
    assert np.array_equal(r1.v, r2.v)
    # phase convention: dominant entry of each left column real non-negative
    for col in r1.u.T:
        lead = col[np.argmax(np.abs(col))]
        assert abs(lead.imag) <= 1e-12 and lead.real >= 0.0


def test_svd_ordering():
    rng = np.random.default_rng(3)
    res = svd(rand_matrix(rng, 6))
    assert np.all(np.diff(res.sigma) <= 0)
    assert np.all(res.sigma >= 0)


def char_poly_min_eig(m):
    # independent oracle: roots of the characteristic polynomial
    return float(np.roots(np.poly(m)).real.min())


def test_min_eigenvalue_against_char_poly():
    rng = np.random.default_rng(4)
    for d in (2, 3):
        for _ in range(20):
            a = rand_matrix(rng, d)
            h = a + a.conj().T
            assert hermitian_min_eigenvalue(h) == pytest.approx(
                char_poly_min_eig(h), abs=1e-10
            )


def test_min_eigenvalue_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_min_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_even_polynomial_known_roots():
    # (x^2-1)(x^2-4)(x^2-9)(x^2-0.25)
    from numpy.polynomial import polynomial as P

    quartic = P.polyfromroots([1.0, 4.0, 9.0, 0.25])[::-1]  # in y = x^2
    roots = real_even_polynomial_roots(quartic)
    got = np.sort(roots.real)
    want = np.sort([-3, -2, -1, -0.5, 0.5, 1, 2, 3])
    assert np.abs(roots.imag).max() <= 1e-8
    assert np.abs(got - want).max() <= 1e-8


def test_even_polynomial_residuals():
    rng = np.random.default_rng(5)
    for _ in range(25):
        coeffs = rng.normal(size=5)
        coeffs[0] = abs(coeffs[0]) + 0.1
        roots = real_even_polynomial_roots(coeffs)
        assert roots.shape == (8,)
        powers = roots[:, None] ** np.array([8, 6, 4, 2, 0])
        residual = np.abs(powers @ coeffs)
        assert residual.max() <= 1e-7 * np.abs(coeffs).max()


def test_even_polynomial_degenerate():
    with pytest.raises(DegeneratePolynomial):
        real_even_polynomial_roots(np.zeros(5))
