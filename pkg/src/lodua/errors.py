"""Exception types shared across the engine."""


class LoduaError(Exception):
    pass


class InvalidInput(LoduaError):
    pass


class UnsupportedRing(LoduaError):
    pass


class BudgetExceeded(LoduaError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class UnrecognizedTower(LoduaError):
    """The lim/lim1 engine refuses to guess; carries materialized evidence."""

    def __init__(self, msg, evidence=None):
        super().__init__(msg)
        self.evidence = evidence


class PrecisionMismatch(LoduaError):
    pass


class InternalInconsistency(LoduaError):
    """Two independent computation routes disagreed; always a hard error."""
    pass
