import json

import numpy as np
import pytest

from usdneumark import Ensemble, load_ensemble, run_pipeline

BB84_DOC = {
    "product_states": [
        ["d+", "d+", "d+"],
        ["d-", "d-", "d-"],
        ["c+", "c+", "c+"],
        ["c-", "c-", "c-"],
    ],
    "priors": [0.25, 0.25, 0.25, 0.25],
}


def random_ensemble(rng, n, d, min_gram_eig=1e-3):
    """Haar-ish random ensemble of n independent states in dimension d."""
    while True:
        m = rng.normal(size=(d, n)) + 1j * rng.normal(size=(d, n))
        m /= np.linalg.norm(m, axis=0)
        if np.linalg.eigvalsh(m.conj().T @ m).min() > min_gram_eig:
            break
    priors = rng.random(n)
    priors /= priors.sum()
    return Ensemble(dim=d, states=m, priors=priors)


def two_state_ensemble(s, priors=(0.5, 0.5)):
    """Two real states in d=2 with overlap s."""
    states = np.array([[1.0, s], [0.0, np.sqrt(1.0 - s * s)]], dtype=complex)
    return Ensemble(dim=2, states=states, priors=np.asarray(priors, float))


def trine_ensemble(s=0.5):
    """Three symmetric real states in d=3 with pairwise overlap s."""
    gram = (1.0 - s) * np.eye(3) + s * np.ones((3, 3))
    states = np.linalg.cholesky(gram).T.astype(complex)
    return Ensemble(dim=3, states=states, priors=np.full(3, 1.0 / 3.0))


@pytest.fixture(scope="session")
def bb84_ensemble():
    return load_ensemble(json.dumps(BB84_DOC))


@pytest.fixture(scope="session")
def bb84_report(bb84_ensemble):
    return run_pipeline(bb84_ensemble)
