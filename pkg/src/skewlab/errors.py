"""Exception types shared across the package."""


class SkewlabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SkewlabError):
    """Invalid construction parameters or experiment configuration."""


class BracketUndefinedError(SkewlabError):
    """Bracket requested for sequences that are too far apart."""


class NonConvergenceError(SkewlabError):
    """A truncated limit failed to meet tolerance within the iteration cap.

    Carries the diagnostics collected so far in ``diagnostics``.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class CertificateViolationError(SkewlabError):
    """A declared regularity bound was violated by a sampled witness."""
