"""Exception hierarchy shared by all hpmropt modules."""


class HpmroptError(Exception):
    """Base class for all package errors."""


class BoundsDomainError(HpmroptError):
    """A coupled-bound request was made outside the pitch domain."""


class DecodeError(HpmroptError):
    """Unit-cube coordinates outside [0, 1] cannot be decoded."""


class ContractError(HpmroptError):
    """An operation was called with arguments violating its preconditions."""


class NormalizationError(HpmroptError):
    """Relative normalization against a zero limit is undefined."""


class TableLoadError(HpmroptError):
    """A sample table file is malformed or contains duplicate sites."""


class ConfigError(HpmroptError):
    """Run or scenario configuration is invalid."""


class EvaluationError(HpmroptError):
    """Design evaluation failed or was attempted with an unusable model."""
