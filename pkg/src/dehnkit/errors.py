"""Exception hierarchy shared by all dehnkit modules."""


class DehnkitError(Exception):
    """Base class for all structured errors raised by dehnkit."""


class InputError(DehnkitError):
    """Malformed user input (files, JSON, CLI arguments)."""


class DegenerateForm(DehnkitError):
    """A quadratic form (or its restriction) has determinant zero."""


class DegenerateSpan(DehnkitError):
    """A span fails the nondegeneracy requirement."""


class SignatureMismatch(DehnkitError):
    """A subspace has the wrong signature for its requested kind."""


class NotNested(DehnkitError):
    """project(U, V) requires U to be contained in V."""


class NotSubcomplex(DehnkitError):
    """Quotients require a face-closed set of simplices."""


class ClosureMissing(DehnkitError):
    """A subspace produced by a Dehn map is not a member of the family."""


class NonCommutingSquare(DehnkitError):
    """A cube diagram has a non-commuting face."""

    def __init__(self, message, indices=None):
        super().__init__(message)
        self.indices = indices


class ConditionsFail(DehnkitError):
    """The hypotheses of the orbit-restriction proposition fail.

    Carries a witness simplex showing the failure.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BijectionFailure(DehnkitError):
    """The flag-reassembly comparison map is not bijective on simplices."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DegenerateSimplex(DehnkitError):
    """A tuple of points does not span the expected dimension."""


class DegenerateConfiguration(DehnkitError):
    """A group tuple produces a degenerate vertex configuration."""


class DegenerateFace(DehnkitError):
    """A face of a geodesic simplex is degenerate."""


class NotGeneric(DehnkitError):
    """A chain fails the hemisphere/independence genericity condition."""


class NotInHyperplane(DehnkitError):
    """Suspension input must lie in the stated hyperplane."""


class PrecisionExhausted(DehnkitError):
    """Relation detection could not certify a result at the given precision."""


class ToleranceNotMet(DehnkitError):
    """Numerical integration failed to reach the requested tolerance."""
