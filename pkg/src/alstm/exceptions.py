"""Exception hierarchy shared by every module."""


class AlstmError(Exception):
    """Base class for all package errors."""


class ShapeError(AlstmError, ValueError):
    """Tensor dimensions do not agree."""


class NumericError(AlstmError, ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class StateError(AlstmError, RuntimeError):
    """An operation was called out of order (e.g. backward before forward)."""


class ConfigError(AlstmError, ValueError):
    """Invalid or inconsistent configuration."""


class TrainingDivergedError(NumericError):
    """Training loss became NaN or infinite."""

    def __init__(self, epoch, loss):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch} (loss={loss!r})")
