"""
Exception hierarchy for cusplab.

Library functions raise these; the command line front end catches them, logs them and
turns them into exit codes (input problems exit 2, failed mathematical checks and any other
cusplab error exit 1).
"""


class CuspLabError(Exception):
    """Root of all cusplab errors."""


class InputError(CuspLabError, ValueError):
    """Invalid input supplied by the caller (maps to exit code 2)."""


class CheckFailure(CuspLabError):
    """A mathematical check or internal cross-check failed (maps to exit code 1)."""


# cyclotomic

class ConductorOverflowError(InputError):
    pass


class CyclotomicZeroDivisionError(CuspLabError, ZeroDivisionError):
    pass


class EmbeddingError(InputError):
    pass


# exactla

class DimensionError(InputError):
    pass


class SingularMatrixError(CuspLabError, ArithmeticError):
    pass


# groups

class GroupOrderExceededError(InputError):
    pass


class SingularGeneratorError(InputError):
    pass


class NotASubgroupError(InputError):
    pass


class SubgroupIndexError(InputError):
    pass


class UnknownCatalogError(InputError):
    pass


# chars

class GroupMismatchError(InputError):
    pass


class NotACharacterError(InputError):
    pass


class CharacterTableError(CheckFailure):
    pass


# reps / criteria

class NotAHomomorphismError(InputError):
    pass


class NotIrreducibleError(InputError):
    pass


class DegenerateFormError(InputError):
    pass


class ConsistencyError(CheckFailure):
    """Two independent methods disagreed."""


# satake / weyl

class UnknownIdentityError(InputError):
    pass


class UnsupportedRankError(InputError):
    pass
