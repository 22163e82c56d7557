"""Exception taxonomy with stable machine-readable error codes.

Every error raised by the library carries a ``code`` string that survives
into CLI output, so callers can match on names instead of messages.
"""

from __future__ import annotations


class DiscoError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class DuplicateNameError(DiscoError):
    code = "duplicate-name"


class CyclicGraphError(DiscoError):
    code = "cyclic-graph"


class CycleError(DiscoError):
    """Raised by topological ordering when the parent graph has a cycle."""

    code = "cycle-detected"


class UnnormalizedPmfError(DiscoError):
    code = "unnormalized-pmf"


class PartialFunctionTableError(DiscoError):
    code = "partial-function-table"


class PrivacyConstraintError(DiscoError):
    """A noise variable is consumed by zero or several structural functions."""

    code = "privacy-constraint"


class UnknownVariableError(DiscoError):
    code = "unknown-variable"


class OutOfDomainError(DiscoError):
    code = "out-of-domain-value"


class MarginalMismatchError(DiscoError):
    """A coupling's per-world marginal deviates from the base noise law."""

    code = "marginal-mismatch"


class UncoveredWorldError(DiscoError):
    code = "uncovered-world"


class ZeroProbabilityEvidenceError(DiscoError):
    code = "zero-probability-evidence"


class ZeroProbabilityConditioningError(DiscoError):
    code = "zero-probability-conditioning-set"


class NonBinaryVariableError(DiscoError):
    code = "non-binary-variable"


class TreatmentNotRootError(DiscoError):
    """Treatment has endogenous parents, so observational joints would not
    match the interventional marginals the summary stats are derived from."""

    code = "treatment-not-root"


class UndefinedPnError(DiscoError):
    code = "undefined-pn"


class NotAMediatorError(DiscoError):
    code = "not-a-mediator"


class InvalidRhoError(DiscoError):
    code = "invalid-rho"


class BadHeaderError(DiscoError):
    code = "bad-header"


class ModelSyntaxError(DiscoError):
    code = "syntax-error"


class UnknownKeyError(DiscoError):
    code = "unknown-key"


class TypeMismatchError(DiscoError):
    code = "type-mismatch"


class InvariantViolationError(DiscoError):
    """An identity the engine guarantees by construction failed to hold."""

    code = "invariant-violation"


# Maps a validation-issue code to the exception class build_model raises.
ERROR_BY_CODE = {
    cls.code: cls
    for cls in (
        DuplicateNameError,
        CyclicGraphError,
        CycleError,
        UnnormalizedPmfError,
        PartialFunctionTableError,
        PrivacyConstraintError,
        UnknownVariableError,
        OutOfDomainError,
        MarginalMismatchError,
        UncoveredWorldError,
        ZeroProbabilityEvidenceError,
        ZeroProbabilityConditioningError,
        NonBinaryVariableError,
        TreatmentNotRootError,
        UndefinedPnError,
        NotAMediatorError,
        InvalidRhoError,
        BadHeaderError,
        ModelSyntaxError,
        UnknownKeyError,
        TypeMismatchError,
        InvariantViolationError,
    )
}
