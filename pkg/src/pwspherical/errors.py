"""Exception types raised by the numerical routines."""


class PWError(Exception):
    """Base class for all package errors."""


class CatalogError(PWError, KeyError):
    """Unknown space name."""

    def __init__(self, name, valid):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(f"unknown space {name!r}; valid names: {', '.join(self.valid)}")

    def __str__(self):
        return self.args[0]


class NumericError(PWError):
    """A computation failed to reach its accuracy target."""

    def record(self):
        return {"type": type(self).__name__, "message": str(self)}


class TruncationError(NumericError):
    """Hypergeometric series did not converge within the term budget."""

    def __init__(self, message, last_term):
        super().__init__(message)
        self.last_term = float(last_term)

    def record(self):
        rec = super().record()
        rec["last_term"] = self.last_term
        return rec


class RangeError(NumericError, ValueError):
    """Argument outside the domain where the evaluation is trusted."""


class QuadratureError(NumericError):
    """Gauss-Legendre doubling did not settle."""

    def __init__(self, message, values):
        super().__init__(message)
        self.values = tuple(complex(v) for v in values)

    def record(self):
        rec = super().record()
        rec["values"] = [[v.real, v.imag] for v in self.values]
        return rec


class ResolutionError(NumericError, ValueError):
    """Sampling grid too coarse for the requested finite-difference stencil."""


class DegenerateInputError(NumericError, ValueError):
    """Input carries no information (e.g. all samples zero)."""


class DSLError(PWError, ValueError):
    """Function descriptor text could not be parsed or is out of range."""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)
