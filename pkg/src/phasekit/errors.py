"""Exception hierarchy shared by all phasekit modules."""


class PhasekitError(Exception):
    """Base class for all library errors."""


# numerics -------------------------------------------------------------

class NotHermitian(PhasekitError):
    """Input fails the Hermitian symmetry check."""


class NoConvergence(PhasekitError):
    """An iterative factorization failed to converge."""


class NotPSD(PhasekitError):
    """Matrix has an eigenvalue below the negativity slack."""


# phasecore ------------------------------------------------------------

class NotSectorial(PhasekitError):
    """Zero is not strictly outside the numerical range."""


class NotQuasiSectorial(PhasekitError):
    """Range/kernel split or range compression fails the sectorial test."""


class NotSemiSectorial(PhasekitError):
    """Numerical range is not contained in a closed half plane."""


class InvalidSector(PhasekitError):
    """Sector bounds violate 0 <= beta - alpha < 2*pi."""


# symmetric ------------------------------------------------------------

class NotSymmetric(PhasekitError):
    """Matrix is not complex symmetric within tolerance."""


class InvalidParam(PhasekitError):
    """Canonical block parameters outside their admissible set."""


# lti ------------------------------------------------------------------

class PoleProximity(PhasekitError):
    """Evaluation point is numerically indistinguishable from a pole."""


class NotLyapunovStable(PhasekitError):
    """Poles outside the closed left half plane, or defective axis poles."""


class NotStable(PhasekitError):
    """System has poles outside the open left half plane."""


class NotSemiSimple(PhasekitError):
    """Imaginary-axis eigenvalue has a nontrivial Jordan structure."""


class NotFrequencyWiseSemiSectorial(PhasekitError):
    """Some contour sample or residue fails the semi-sectorial test."""


class NotAccretiveAtStart(PhasekitError):
    """Real part of the response start point has a negative eigenvalue."""


class PhaseContinuityError(PhasekitError):
    """Branch tracking could not resolve a phase jump after max refinement."""


# feedback -------------------------------------------------------------

class IllPosed(PhasekitError):
    """Feedback loop has a (nearly) singular algebraic constraint."""


class TargetOutsideEnvelope(PhasekitError):
    """Interpolation target phase is not inside the envelope at omega0."""


class EnvelopeViolated(PhasekitError):
    """No searched interpolator parameters pass envelope verification."""


class ConditionHolds(PhasekitError):
    """The tested stability condition holds; nothing to synthesize."""


class SynthesisFailed(PhasekitError):
    """A destabilizer construction step failed verification."""


class NotInner(PhasekitError):
    """System fails the all-pass identity on the imaginary axis."""


class AssumptionViolatedAtInfinity(PhasekitError):
    """Phase sector of the feedthrough term violates the envelope at infinity."""
