"""Exception hierarchy shared by every module of the engine."""


class FermiDynError(ValueError):
    """Base class for all engine errors."""


class NonSymmetric(FermiDynError):
    pass


class NotPositiveDefinite(FermiDynError):
    pass


class DimTooLarge(FermiDynError):
    pass


class DimMismatch(FermiDynError):
    pass


class NotOrthogonal(FermiDynError):
    pass


class NotAntiHermitian(FermiDynError):
    pass


class NotTwoForm(FermiDynError):
    pass


class NotAVector(FermiDynError):
    pass


class ModeMismatch(FermiDynError):
    pass


class GradeTooLarge(FermiDynError):
    pass


class GradeOverflow(FermiDynError):
    pass


class NotAntisymmetric(FermiDynError):
    pass


class ConfigError(FermiDynError):
    """Malformed experiment config; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
