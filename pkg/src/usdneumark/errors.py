"""Typed error hierarchy for the discrimination pipeline.

Every failure surfaces as a subclass of UsdError carrying a stable
``code`` string, so callers (and the CLI) can map failures to exit
codes without parsing messages.
"""


class UsdError(Exception):
    """Base class for all pipeline errors."""

    code = "UsdError"


class ValidationError(UsdError):
    """Bad input: rejected before any numerics run."""

    code = "ValidationError"


class NumericalError(UsdError):
    """A numerical stage could not produce a trustworthy result."""

    code = "NumericalError"


# --- input / validation ---

class ParseError(ValidationError):
    code = "ParseError"


class InvalidState(ValidationError):
    code = "InvalidState"


class InvalidPriors(ValidationError):
    code = "InvalidPriors"


class LinearlyDependent(ValidationError):
    code = "LinearlyDependent"


class InvalidInput(ValidationError):
    code = "InvalidInput"


class OracleTooLarge(ValidationError):
    code = "OracleTooLarge"


# --- numerics kernels ---

class InvalidMatrix(NumericalError):
    code = "InvalidMatrix"


class NotHermitian(NumericalError):
    code = "NotHermitian"


class DegeneratePolynomial(NumericalError):
    code = "DegeneratePolynomial"


class IllConditioned(NumericalError):
    code = "IllConditioned"


# --- SDP solver ---

class Infeasible(NumericalError):
    code = "Infeasible"


class SolverStalled(NumericalError):
    code = "SolverStalled"


# --- final configuration ---

class DegenerateConclusiveAmplitude(NumericalError):
    code = "DegenerateConclusiveAmplitude"


class NoRealRoot(NumericalError):
    code = "NoRealRoot"


class RecursionBreakdown(NumericalError):
    code = "RecursionBreakdown"


class InconsistentAmplitudes(NumericalError):
    code = "InconsistentAmplitudes"


# --- synthesis / rotations ---

class SynthesisFailure(NumericalError):
    code = "SynthesisFailure"


class NotUnitary(NumericalError):
    code = "NotUnitary"


class DecompositionFailure(NumericalError):
    code = "DecompositionFailure"


class AngleExtractionFailure(NumericalError):
    code = "AngleExtractionFailure"
