"""Exception hierarchy shared across the package."""


class CostcalError(Exception):
    """Base class for all package errors."""


class DomainError(CostcalError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedLimitError(CostcalError, ValueError):
    """A partial loss was evaluated at an infinite score without a declared limit."""


class PreconditionError(CostcalError, ValueError):
    """An operation's structural precondition (flags, metadata) is not met."""


class UnsupportedFamilyError(CostcalError, ValueError):
    """Closed forms were requested for a (family, parameter) combination
    outside the supported configurations."""


class VacuousBoundError(CostcalError, ValueError):
    """A regret bound was requested for a loss that is not calibrated, so the
    transfer function is not invertible and the bound is vacuous."""
