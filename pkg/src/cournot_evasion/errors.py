"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A model parameter violates its admissible range.

    ``field`` names the offending parameter so callers (the CLI in particular)
    can report it verbatim.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class PriceSingularityError(ArithmeticError):
    """Total output is non-positive, where p(X) = 1/X is undefined."""


class RootFindingError(RuntimeError):
    pass


class DegenerateCrossingError(ArithmeticError):
    pass
