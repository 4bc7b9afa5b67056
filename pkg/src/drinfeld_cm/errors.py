"""Error taxonomy shared across the package.

Exit-code mapping used by the CLI: BadInputError -> 3,
PrecisionError -> 2, InvariantError -> 1.
"""


class BadInputError(ValueError):
    """Caller supplied data violating a documented precondition."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug or a wrong input model."""


class PrecisionError(RuntimeError):
    """A computation could not be resolved at the working precision."""
