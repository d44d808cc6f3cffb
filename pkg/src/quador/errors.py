"""Exception types raised by the quador kernel.

Every error carries a stable ``code`` string so callers (and the CLI) can
match on failure kinds without parsing messages.
"""

from __future__ import annotations


class QuadorError(Exception):
    """Base class for all kernel errors."""

    code = "QUADOR_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class AllZeroError(QuadorError):
    """Every coefficient of a form is below the absolute zero threshold."""

    code = "ALL_ZERO"


class SingularPointError(QuadorError):
    """Curvature requested where the gradient vanishes."""

    code = "SINGULAR_POINT"


class UnsupportedClassError(QuadorError):
    """No closed-form chart exists for this quadric class."""

    code = "UNSUPPORTED_CLASS"


class ZeroGradientError(QuadorError):
    """A linear form with zero gradient does not define a plane."""

    code = "ZERO_GRADIENT"


class DegenerateBeamError(QuadorError):
    """Beam family parameter k is zero (or not finite)."""

    code = "DEGENERATE_K"


class PlaneMissesSphereError(QuadorError):
    """A beam tangency plane does not cut its hub sphere."""

    code = "PLANE_MISSES_SPHERE"

    def __init__(self, hub_id: str, message: str = ""):
        self.hub_id = hub_id
        super().__init__(message or f"tangency plane misses hub sphere {hub_id!r}")


class UnknownHubError(QuadorError):
    code = "UNKNOWN_HUB"

    def __init__(self, hub_id: str):
        self.hub_id = hub_id
        super().__init__(f"no hub with id {hub_id!r}")


class ParallelStubsError(QuadorError):
    """The two stub planes are parallel; there is no corner to fill."""

    code = "PARALLEL_STUBS"


class IdentityViolationError(QuadorError):
    """The two fillet expressions disagree; upstream data is corrupt."""

    code = "IDENTITY_VIOLATION"


class WedgeOrientationError(QuadorError):
    """The fillet wedge does not face the outward corner bisector."""

    code = "WEDGE_ORIENTATION"


class EmptyConicError(QuadorError):
    """The tangency plane misses the stub quador."""

    code = "EMPTY_CONIC"


class NotACurveError(QuadorError):
    """Sampling requested on a point/empty conic."""

    code = "NOT_A_CURVE"


class PointOffSurfaceError(QuadorError):
    """A p-curve was requested for a conic that does not lie on the chart."""

    code = "POINT_OFF_SURFACE"


class NoBisectorIntersectionError(QuadorError):
    """The outward bisector ray misses the fillet surface."""

    code = "NO_BISECTOR_INTERSECTION"


class DegenerateBoundsError(QuadorError):
    code = "DEGENERATE_BOUNDS"


class ParseError(QuadorError):
    """Strict lattice-file parsing failed.

    ``location`` is a JSON-pointer-style path to the offending element.
    """

    code = "PARSE_ERROR"

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class ValidationError(QuadorError):
    """A lattice failed validation; ``report`` holds the full findings."""

    code = "VALIDATION_ERROR"

    def __init__(self, report):
        self.report = report
        errors = [e for e in report.entries if e.severity == "error"]
        super().__init__(
            "lattice validation failed: "
            + "; ".join(f"{e.code} ({e.subject})" for e in errors)
        )
