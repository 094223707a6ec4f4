"""Exception types shared across the toolkit."""


class PatternContError(Exception):
    """Base class for toolkit-specific failures."""


class SingularInputError(PatternContError, ValueError):
    """An input puts the model outside its domain of definition."""


class ConvergenceError(PatternContError, RuntimeError):
    """Newton iteration failed to converge; carries the last residual norm."""

    def __init__(self, message: str, residual_norm: float | None = None):
        super().__init__(message)
        self.residual_norm = residual_norm


class SingularSolveError(PatternContError, RuntimeError):
    """A linear solve produced no usable correction."""


class SwitchError(PatternContError, RuntimeError):
    """Branch switching fell back onto the parent branch for both signs."""


class BracketError(PatternContError, ValueError):
    """A bracketed root search received endpoints of equal sign."""


class InterfaceError(PatternContError, RuntimeError):
    """No well-defined front position exists for the given state."""
