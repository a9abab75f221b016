"""Exception types shared across the package."""


class BoolNLError(Exception):
    """Base class for all domain errors raised by boolnl."""


class ParseError(BoolNLError, ValueError):
    """Malformed truth-table, formula or circuit text."""


class DimensionError(BoolNLError, ValueError):
    """Arguments disagree on the number of variables."""


class CapExceeded(BoolNLError, ValueError):
    """A desk-scale size cap was exceeded.

    The message always names the module that owns the cap.
    """

    def __init__(self, module: str, what: str, value: int, cap: int):
        self.module = module
        self.cap = cap
        super().__init__(f"{module}: {what}={value} exceeds cap {cap}")
