"""Exception taxonomy for the qubeam package.

Every error raised by this package derives from QubeamError so callers can
catch one base type. Validation and parse errors map to CLI exit code 1,
computation errors to exit code 2.
"""


class QubeamError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------- validation

class ValidationError(QubeamError):
    """Invalid model parameters or sweep configuration."""


class DegenerateFrequencies(ValidationError):
    """kappa1 == kappa2; the two photon modes must be distinct."""


class NearResonance(ValidationError):
    """omega too close to (or beyond) kappa1; closed forms develop poles."""


class NonPositive(ValidationError):
    """A parameter that must be positive (or nonnegative) is not."""


class ZeroLightFront(ValidationError):
    """Light-front momentum (np) is zero; couplings are undefined."""


class ParseError(QubeamError):
    """Malformed configuration file; message carries line/key context."""


# --------------------------------------------------------------- computation

class ComputationError(QubeamError):
    """Base class for numerical failures; message names the failing stage."""


class PoleEvaluation(ComputationError):
    """Residual requested at (or within the guard band of) a pole r = kappa_s."""


class SingularDenominator(ComputationError):
    """First-order root formula denominator below the safety floor."""


class BracketFailure(ComputationError):
    """No sign change found for a root; message reports the scanned interval."""


class NonConvergence(ComputationError):
    """Root refinement failed to reach the requested tolerance."""


class NegativeRadicand(ComputationError):
    """Normalization radicand not positive; regime outside the transformation's
    validity. Message reports the offending (k, lambda) and radicand value."""


class ZeroNorm(ComputationError):
    """All four two-qubit amplitudes vanish; the block is unusable."""


class UnsupportedConfig(QubeamError):
    """No closed form exists for the requested polarization configuration."""


class DomainError(ComputationError):
    """Measure argument outside its domain beyond tolerance."""


class ResonancePole(ComputationError):
    """(omega - kappa1)^2 below floor in the closed-form denominator."""


class RangeViolation(ComputationError):
    """Closed-form product eps*Phi >= 1, outside the admissible range."""


class AllRowsFailed(ComputationError):
    """Every grid point of a sweep failed; nothing to write."""
