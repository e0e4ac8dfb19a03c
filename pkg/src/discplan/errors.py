"""Exception taxonomy shared across the package."""


class DiscplanError(Exception):
    """Base class for all package errors."""


class DegenerateInput(DiscplanError):
    """Geometric input below tolerance (zero-length segment, zero-area polygon, ...)."""


class DegenerateDirection(DiscplanError):
    """Direction undefined because two points coincide within tolerance."""


class ParseError(DiscplanError):
    """Malformed scenario or trajectory file; message carries line context."""


class ValidationError(DiscplanError):
    """Input violates a semantic invariant (overlapping positions, blocked position, ...)."""


class CapacityError(DiscplanError):
    """Requested robot count does not fit the requested grid dimensions."""


class SamplingExhausted(DiscplanError):
    """Rejection sampling hit its retry budget without a feasible placement."""


class NoRevolvingArea(DiscplanError):
    """No feasible revolving-area center exists for one position."""


class AssumptionViolated(DiscplanError):
    """One or more positions admit no revolving area; carries the offending positions."""

    def __init__(self, failures):
        self.failures = list(failures)
        names = ", ".join(str(f) for f in self.failures)
        super().__init__(f"no revolving area for: {names}")


class StartBlocked(DiscplanError):
    """Start position lies inside an inflated obstacle."""


class TargetBlocked(DiscplanError):
    """Target position lies inside an inflated obstacle."""


class NoPath(DiscplanError):
    """Free space does not connect start to target."""


class PreconditionViolated(DiscplanError):
    """A coordination-stage precondition failed (endpoint inside a kept-out disc, ...)."""


class RefinementViolated(DiscplanError):
    """Close-range interference components do not refine far-range components."""


class TooLarge(DiscplanError):
    """Instance exceeds a hard size limit (factorial ordering search)."""
