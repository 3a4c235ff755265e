"""Exception types shared across the package.

Every exception carries a short message naming the offending object or
degree; nothing here is recoverable state, so plain subclasses suffice.
"""


class KcellError(Exception):
    """Base class for all package errors."""


class CoefficientMismatch(KcellError):
    """Operands live over different coefficient rings."""


class UnsupportedRing(KcellError):
    """Operation not implemented for this coefficient ring."""


class NotAComplex(KcellError):
    """Differentials fail d*d = 0 or degree bookkeeping is broken."""


class NotAGroup(KcellError):
    """Multiplication table fails the group axioms."""


class NotATriangle(KcellError):
    """Candidate triangle fails its homotopy identity or comparison check."""


class BadCertificate(KcellError):
    """Build certificate fails replay: a step does not produce its object."""


class NotNilpotentGroup(KcellError):
    """Some Sylow subgroup is not normal (checked by exhaustion)."""


class BadSubgroup(KcellError):
    """Element set is not a subgroup, or not normal where required."""


class BadAction(KcellError):
    """Matrices or permutations do not define a group action."""


class BadWindow(KcellError):
    """Postnikov window endpoints are inverted or out of range."""


class NotStabilized(KcellError):
    """A telescope or chain failed to stabilize integrally."""


class TooLarge(KcellError):
    """Resolution or bar construction exceeded its size cap."""


class WrongGroupClass(KcellError):
    """Strategy asked to run outside its group-class precondition."""


class WrongCharacteristic(KcellError):
    """Coefficient characteristic does not match the strategy."""


class NotNilpotentAction(KcellError):
    """A homology module fails the nilpotent-action test."""

    def __init__(self, degree, message=""):
        self.degree = degree
        super().__init__(message or f"homology module in degree {degree} is not nilpotent")


class NoStrategyApplies(KcellError):
    """No cellular approximation strategy covers the input; carries a witness."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class UnsupportedGroup(KcellError):
    """Operation requires a group class (e.g. abelian) the input lacks."""


class CapExceeded(KcellError):
    """A graded computation ran past its declared degree cap."""


class ScenarioError(KcellError):
    """Scenario file failed schema validation or refers to unknown builtins."""
