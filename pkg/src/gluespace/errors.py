"""Shared exception types for the gluespace package."""


class GlueSpaceError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GlueSpaceError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericInconsistencyError(GlueSpaceError, ArithmeticError):
    """A floating-point result violates a bound that roundoff alone cannot explain."""


class UnsupportedSceneError(GlueSpaceError, ValueError):
    """The operation is not defined for this kind of scene (e.g. links of 1D scenes)."""


class SceneParseError(GlueSpaceError, ValueError):
    """A scene file failed to parse; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
