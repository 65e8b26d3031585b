"""Exception hierarchy.

``InternalAssertion`` subclasses signal a broken invariant (the CLI maps them
to exit code 3); ``ConfigError`` subclasses signal bad user input (exit 2).
"""


class AsforgeError(Exception):
    pass


class FieldError(AsforgeError):
    pass


class ConfigError(AsforgeError):
    pass


class ParseError(ConfigError):
    pass


class PrecisionError(AsforgeError):
    pass


class IndeterminatePrecision(PrecisionError):
    pass


class InsufficientPrecision(PrecisionError):
    pass


class NonSimpleRoot(AsforgeError):
    pass


class NoResidueRoot(AsforgeError):
    pass


class GeometricallyReducible(ConfigError):
    pass


class NotIrreducibleModulus(ConfigError):
    pass


class PoleAtPoint(AsforgeError):
    pass


class PoleAtSplitPoint(ConfigError):
    pass


class PoleOutsideSupport(ConfigError):
    pass


class NotSubspace(AsforgeError):
    pass


class BudgetExceeded(AsforgeError):
    pass


class AnalyzeOutsideSolutionSpace(ConfigError):
    pass


class BasisMeetsASImage(ConfigError):
    pass


class GuardExceeded(AsforgeError):
    pass


class InternalAssertion(AsforgeError):
    pass


class DimensionMismatch(InternalAssertion):
    pass


class CountMismatch(InternalAssertion):
    pass


class ConditionIViolated(InternalAssertion):
    pass


class OracleMismatch(InternalAssertion):
    pass


class FitInconsistent(InternalAssertion):
    pass
