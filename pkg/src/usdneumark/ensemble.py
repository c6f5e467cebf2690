"""Problem-instance ingestion: N pure states plus prior probabilities.

The input document is JSON with fields ``dimension``, ``states`` (each
state an array of [re, im] pairs) and ``priors``.  Alternatively
``product_states`` gives each state as a list of single-qubit labels
(d+, d-, c+, c-, 0, 1) expanded with a Kronecker product.
"""

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    InvalidInput,
    InvalidPriors,
    InvalidState,
    LinearlyDependent,
    ParseError,
)
from .numerics import gram_matrix

_SQ2 = 1.0 / np.sqrt(2.0)

QUBIT_LABELS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "d+": np.array([_SQ2, _SQ2], dtype=complex),
    "d-": np.array([_SQ2, -_SQ2], dtype=complex),
    "c+": np.array([_SQ2, 1j * _SQ2], dtype=complex),
    "c-": np.array([_SQ2, -1j * _SQ2], dtype=complex),
}


@dataclass(frozen=True)
class Ensemble:
    """Validated, gauge-fixed problem instance.

    states holds the kets as columns of a (dim, n) array; every column
    has unit norm and its first nonzero component is real positive.
    """

    dim: int
    states: np.ndarray
    priors: np.ndarray

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def gram(self) -> np.ndarray:
        return gram_matrix(self.states)


def build_product_state(factors) -> np.ndarray:
    """Kronecker product of single-qubit kets."""
    vecs = []
    for f in factors:
        v = np.asarray(f, dtype=complex).reshape(-1)
        if v.shape != (2,):
            raise InvalidInput("each factor must be a length-2 amplitude pair")
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise InvalidInput("factor is not unit norm")
        vecs.append(v)
    if not vecs:
        raise InvalidInput("empty factor list")
    return reduce(np.kron, vecs)


def _fix_global_phase(state: np.ndarray) -> np.ndarray:
    """Make the first nonzero component real positive."""
    for x in state:
        if abs(x) > 1e-12:
            return state * np.conj(x / abs(x))
    return state


def _complex_vector(raw, what: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: expected an array of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError(f"{what}: expected an array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def load_ensemble(document, tol: Tolerances = DEFAULT_TOLERANCES) -> Ensemble:
    """Parse and validate an input document (JSON text or mapping)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ParseError("document must be a JSON object")

    if "product_states" in document:
        labels = document["product_states"]
        if not isinstance(labels, list) or not labels:
            raise ParseError("product_states must be a non-empty array")
        cols = []
        for entry in labels:
            if not isinstance(entry, list) or not entry:
                raise ParseError("each product state must be a list of labels")
            try:
                factors = [QUBIT_LABELS[lbl] for lbl in entry]
            except (KeyError, TypeError) as exc:
                raise ParseError(
                    "unknown qubit label; expected one of "
                    + ", ".join(sorted(QUBIT_LABELS))
                ) from exc
            cols.append(build_product_state(factors))
        dims = {c.shape[0] for c in cols}
        if len(dims) != 1:
            raise ParseError("product states have mismatched factor counts")
        dim = dims.pop()
        if "dimension" in document and int(document["dimension"]) != dim:
            raise ParseError("dimension disagrees with product_states expansion")
        states = np.column_stack(cols)
    else:
        if "dimension" not in document or "states" not in document:
            raise ParseError("document requires 'dimension' and 'states'")
        try:
            dim = int(document["dimension"])
        except (TypeError, ValueError) as exc:
            raise ParseError("dimension must be an integer") from exc
        raw_states = document["states"]
        if not isinstance(raw_states, list) or not raw_states:
            raise ParseError("states must be a non-empty array")
        cols = []
        for idx, raw in enumerate(raw_states):
            v = _complex_vector(raw, f"state {idx}")
            if v.shape[0] != dim:
                raise ParseError(f"state {idx} has length {v.shape[0]}, expected {dim}")
            cols.append(v)
        states = np.column_stack(cols)

    if "priors" not in document:
        raise ParseError("document requires 'priors'")
    try:
        priors = np.asarray(document["priors"], dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise ParseError("priors must be an array of reals") from exc

    n = states.shape[1]
    if n < 2:
        raise ParseError("need at least two states")
    if states.shape[0] < n:
        raise ParseError(
            f"dimension {states.shape[0]} is smaller than the number of states {n}"
        )
    if priors.shape[0] != n:
        raise InvalidPriors(f"{priors.shape[0]} priors for {n} states")
    if np.any(priors < 0.0):
        raise InvalidPriors("priors must be non-negative")
    if abs(priors.sum() - 1.0) > 1e-8:
        raise InvalidPriors(f"priors sum to {priors.sum():.10f}, expected 1")

    norms = np.linalg.norm(states, axis=0)
    if np.any(np.abs(norms - 1.0) > tol.state_norm):
        worst = int(np.argmax(np.abs(norms - 1.0)))
        raise InvalidState(
            f"state {worst} has norm {norms[worst]:.8f}, "
            f"beyond the {tol.state_norm:.0e} renormalization window"
        )
    states = states / norms
    states = np.column_stack([_fix_global_phase(states[:, j]) for j in range(n)])

    g = gram_matrix(states)
    min_eig = float(np.linalg.eigvalsh(g)[0])
    if min_eig <= tol.independence:
        raise LinearlyDependent(
            f"states are (near) linearly dependent: Gram min eigenvalue {min_eig:.3e}"
        )
    return Ensemble(dim=int(states.shape[0]), states=states, priors=priors)
