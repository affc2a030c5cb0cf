from typing import Optional


class ChannelAgingError(Exception):
    """Base class for every error raised by channelaging."""


class NotPositiveDefiniteError(ChannelAgingError, ValueError):
    """Cholesky factorization failed: the matrix is not Hermitian positive definite."""


class SingularGramError(ChannelAgingError, ValueError):
    """The ZF Gram matrix of the CSI cannot be inverted."""


class ConfigError(ChannelAgingError, ValueError):
    def __init__(self, message: str, key: Optional[str] = None, location: Optional[str] = None):
        self.key = key
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ScenarioError(ChannelAgingError):
    def __init__(self, parameter: str, value: float, cause: Exception):
        self.parameter = parameter
        self.value = value
        super().__init__(f"sweep point {parameter}={value:g} failed: {cause}")
