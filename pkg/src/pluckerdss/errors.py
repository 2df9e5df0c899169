"""Exception hierarchy shared by every layer of the simulator."""


class DSSError(Exception):
    """Base class for all simulator errors."""


class FieldMismatchError(DSSError, ValueError):
    pass


class DomainError(DSSError, ValueError):
    """An argument lies outside the domain of the operation (zero inverse,
    dependent vectors, zero coordinate, ...)."""


class RankDeficiencyError(DSSError):
    """A linear system is inconsistent or not uniquely solvable."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class UnrepairableError(DSSError):
    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class ReconstructionError(RankDeficiencyError):
    pass


class InvalidGoodMatrixError(DSSError, ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class BudgetExceededError(DSSError):
    pass


class ConfigError(DSSError, ValueError):
    """Configuration or scenario text that does not parse; carries the line."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line
