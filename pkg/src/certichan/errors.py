"""Exception hierarchy shared by all certichan modules."""


class CertichanError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(CertichanError, ValueError):
    """Operands have incompatible shapes or dimensions."""


class DimensionLimitError(CertichanError, ValueError):
    """A requested construction exceeds the configured dimension cap."""


class PreconditionError(CertichanError, ValueError):
    """An input violates an operation's stated precondition."""


class NoCertificateError(CertichanError):
    """The null hypothesis cannot be certified against the alternatives."""


class NumericalIntegrityError(CertichanError, ArithmeticError):
    """A computed quantity left its admissible range beyond rounding slack."""


class SpecParseError(CertichanError, ValueError):
    """A channel specification file could not be parsed or validated."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
