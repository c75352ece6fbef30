"""Exception types shared across the package."""


class RankineqError(Exception):
    """Base class for all rankineq errors."""


class NonSquare(RankineqError):
    """Operation requires a square matrix."""


class DimensionMismatch(RankineqError):
    """Row/column or ambient-dimension shapes are incompatible."""


class UnknownVariable(RankineqError):
    """A named random variable is not present in the assignment/expression."""


class ParseError(RankineqError):
    """Malformed serialized input.

    ``location`` is a human-readable path into the offending document,
    e.g. ``"terms[3].coeff.den"`` or ``"line 4"``.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ParamOutOfRange(RankineqError):
    """A family/guide parameter violates its admissible window."""


class InadmissibleGuide(RankineqError):
    """Guide matrix fails the rank-vs-characteristic profile check."""


class CapExceeded(RankineqError):
    """Exhaustive enumeration would exceed the configured cap."""

    def __init__(self, cardinality: int, cap: int):
        self.cardinality = cardinality
        self.cap = cap
        super().__init__(
            f"exhaustive assignment count {cardinality} exceeds cap {cap}"
        )
