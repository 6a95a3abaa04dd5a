"""Exception types shared across the package.

Every contract violation raises a named subclass of OamixError so callers
(and the CLI) can report the failure kind without string matching.
"""


class OamixError(Exception):
    """Base class for all library errors."""


# point and design validation
class NegativeEntry(OamixError):
    pass


class SumNotOne(OamixError):
    pass


class TotalExceedsMax(OamixError):
    pass


class WrongKind(OamixError):
    pass


# base-design generation and projection
class InvalidDimension(OamixError):
    pass


class DropAllColumns(OamixError):
    pass


# orderings and sign vectors
class OrderingSupportMismatch(OamixError):
    pass


class InconsistentPwo(OamixError):
    pass


class AlreadyExpanded(OamixError):
    pass


class EmptyLevels(OamixError):
    pass


class DuplicateLevel(OamixError):
    pass


class NonPositiveScale(OamixError):
    pass


# model specs and matrices
class UnsupportedReduction(OamixError):
    pass


class KindMismatch(OamixError):
    pass


class MissingPwo(OamixError):
    pass


class MissingAmount(OamixError):
    pass


class RankDeficient(OamixError):
    pass


# evaluation criteria
class SingularInformation(OamixError):
    pass


class ConstantColumn(OamixError):
    pass


class NoResidualDf(OamixError):
    pass


# design files
class MalformedHeader(OamixError):
    pass


class BadPwoValue(OamixError):
    pass


class RowLengthMismatch(OamixError):
    pass


class InconsistentPwoRow(OamixError):
    pass
