"""Exception types shared across the package."""


class ShadowSimError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometry(ShadowSimError):
    """Mobile position coincides with a base station."""


class InvalidDistance(ShadowSimError):
    """Distance must be strictly positive for path-loss evaluation."""


class NonPositivePower(ShadowSimError):
    """Linear power must be > 0 to convert to dB."""


class DimensionMismatch(ShadowSimError):
    """Vector/matrix dimensions disagree."""


class NotPositiveSemiDefinite(ShadowSimError):
    """Matrix has a negative pivot beyond tolerance; run PSD repair first."""


class WindowTooLarge(ShadowSimError):
    """Sliding window exceeds the trace extent."""


class DegenerateZone(ShadowSimError):
    """Regression zone has no distance spread (rank-deficient fit)."""


class ZeroVariance(ShadowSimError):
    """Correlation undefined for a constant sequence."""


class ConfigError(ShadowSimError):
    """Malformed CLI / scenario configuration."""
