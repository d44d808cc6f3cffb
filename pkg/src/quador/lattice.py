"""Lattice data model and beam quador construction.

A lattice is hubs (spheres), beams (surface-of-revolution quadrics tangent
to both endpoint spheres) and fillet specifications.  Each beam is fixed by
one scalar ``k``: with ``L = S_a - S_b`` (always linear), the tangency
planes are ``G_a = (L/k + k)/2`` and ``G_b = G_a - k``, which makes
``S_a - G_a^2`` and ``S_b - G_b^2`` the *same* quadric identically.  ``G``
forms are sign-normalized positive toward the far hub, which leaves the
beam quadric unchanged.

Everything here is immutable after construction and safe for concurrent
reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import LinearForm, Quadric, subtract_square
from .errors import (
    DegenerateBeamError,
    PlaneMissesSphereError,
    UnknownHubError,
)

__all__ = [
    "Hub",
    "Beam",
    "FilletSpec",
    "Lattice",
    "BeamGeometry",
    "StubView",
    "ValidationIssue",
    "ValidationReport",
    "sphere_quadric",
    "beam_quador",
    "beam_radius",
    "stub_views_at_hub",
    "validate_lattice",
]


@dataclass(frozen=True)
class Hub:
    id: str
    center: tuple[float, float, float]
    radius: float


@dataclass(frozen=True)
class Beam:
    id: str
    hub_a: str
    hub_b: str
    k: float


@dataclass(frozen=True)
class FilletSpec:
    hub: str
    beam_i: str
    beam_j: str
    beta: float


@dataclass(frozen=True)
class Lattice:
    hubs: tuple[Hub, ...] = ()
    beams: tuple[Beam, ...] = ()
    fillets: tuple[FilletSpec, ...] = ()

    def hub(self, hub_id: str) -> Hub:
        for h in self.hubs:
            if h.id == hub_id:
                return h
        raise UnknownHubError(hub_id)

    def beam(self, beam_id: str) -> Beam:
        for b in self.beams:
            if b.id == beam_id:
                return b
        raise KeyError(f"no beam with id {beam_id!r}")

    def beams_at(self, hub_id: str) -> tuple[Beam, ...]:
        return tuple(b for b in self.beams if hub_id in (b.hub_a, b.hub_b))

    def without_fillets(self) -> "Lattice":
        return Lattice(self.hubs, self.beams, ())


def sphere_quadric(hub: Hub) -> Quadric:
    """Implicit sphere ``|x - c|^2 - r^2``: negative inside, increasing outward."""
    if hub.radius <= 0.0:
        raise ValueError(f"hub {hub.id!r} radius must be positive")
    c = np.asarray(hub.center, dtype=float)
    return Quadric(np.eye(3), -c, float(c @ c) - hub.radius**2)


@dataclass(frozen=True, eq=False)
class BeamGeometry:
    """A constructed beam: shared quadric plus both tangency planes."""

    beam: Beam
    hub_a: Hub
    hub_b: Hub
    H: Quadric
    G_a: LinearForm
    G_b: LinearForm
    axis: np.ndarray  # unit, hub_a -> hub_b
    length: float  # center distance
    lam: float  # |grad G_a| = |grad G_b|
    g0: float  # G_a at the hub_a center

    def __post_init__(self):
        ax = np.asarray(self.axis, dtype=float).copy()
        ax.setflags(write=False)
        object.__setattr__(self, "axis", ax)


def beam_quador(hub_a: Hub, hub_b: Hub, k: float) -> BeamGeometry:
    """Construct the beam quador tangent to both hub spheres.

    The tangency planes must cut their spheres
    (``|G(c)| / |grad G| < r`` at each end), otherwise
    :class:`PlaneMissesSphereError` names the offending hub.  ``k = 0``
    raises :class:`DegenerateBeamError`.
    """
    if not math.isfinite(k) or k == 0.0:
        raise DegenerateBeamError(f"beam between {hub_a.id!r} and {hub_b.id!r} has k={k}")
    ca = np.asarray(hub_a.center, dtype=float)
    cb = np.asarray(hub_b.center, dtype=float)
    d = float(np.linalg.norm(cb - ca))
    if d == 0.0:
        raise ValueError(f"hubs {hub_a.id!r} and {hub_b.id!r} are coincident")

    # L = S_a - S_b is linear; divide out k to get the tangency planes.
    gl = 2.0 * (cb - ca)
    cl = float(ca @ ca) - hub_a.radius**2 - float(cb @ cb) + hub_b.radius**2
    G_a = LinearForm(gl / (2.0 * k), cl / (2.0 * k) + k / 2.0)
    G_b_raw = LinearForm(G_a.g, G_a.c0 - k)

    H = subtract_square(sphere_quadric(hub_a), G_a)

    lam = G_a.grad_norm()
    if abs(G_a.value(ca)) >= lam * hub_a.radius:
        raise PlaneMissesSphereError(hub_a.id)
    if abs(G_b_raw.value(cb)) >= lam * hub_b.radius:
        raise PlaneMissesSphereError(hub_b.id)

    if G_a.value(cb) < 0.0:
        G_a = -G_a
    G_b = -G_b_raw if G_b_raw.value(ca) < 0.0 else G_b_raw

    axis = (cb - ca) / d
    return BeamGeometry(
        beam=Beam("", hub_a.id, hub_b.id, k),
        hub_a=hub_a,
        hub_b=hub_b,
        H=H,
        G_a=G_a,
        G_b=G_b,
        axis=axis,
        length=d,
        lam=lam,
        g0=G_a.value(ca),
    )


def beam_radius(geom: BeamGeometry, s: float) -> float | None:
    """Cross-section radius at axial distance ``s`` from the hub_a center.

    From the surface-of-revolution property,
    ``rho^2 = r_a^2 + (lam*s + g0)^2 - s^2``; returns ``None`` where the
    quador has no real section.
    """
    rho_sq = geom.hub_a.radius**2 + (geom.lam * s + geom.g0) ** 2 - s * s
    if rho_sq < 0.0:
        return None
    return math.sqrt(rho_sq)


@dataclass(frozen=True, eq=False)
class StubView:
    """A beam as seen from one of its hubs.

    ``G`` is sign-normalized positive toward the far hub and
    ``H = S_hub - G^2`` exactly (recomputed hub-locally, so the identity is
    bitwise).  ``axis`` is the unit direction toward the far hub.
    """

    hub: Hub
    beam: Beam
    G: LinearForm
    H: Quadric
    axis: np.ndarray

    def __post_init__(self):
        ax = np.asarray(self.axis, dtype=float).copy()
        ax.setflags(write=False)
        object.__setattr__(self, "axis", ax)


def _build_geometry(lattice: Lattice, beam: Beam) -> BeamGeometry:
    geom = beam_quador(lattice.hub(beam.hub_a), lattice.hub(beam.hub_b), beam.k)
    return BeamGeometry(
        beam, geom.hub_a, geom.hub_b, geom.H, geom.G_a, geom.G_b,
        geom.axis, geom.length, geom.lam, geom.g0,
    )


def stub_views_at_hub(lattice: Lattice, hub_id: str) -> list[StubView]:
    """One :class:`StubView` per beam incident to the hub."""
    hub = lattice.hub(hub_id)  # raises UnknownHubError
    sphere = sphere_quadric(hub)
    views = []
    for beam in lattice.beams_at(hub_id):
        geom = _build_geometry(lattice, beam)
        if beam.hub_a == hub_id:
            g, axis = geom.G_a, geom.axis
        else:
            g, axis = geom.G_b, -geom.axis
        views.append(StubView(hub, beam, g, subtract_square(sphere, g), axis))
    return views


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    code: str
    subject: str
    message: str


@dataclass
class ValidationReport:
    entries: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> list[ValidationIssue]:
        return [e for e in self.entries if e.severity == "error"]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [e for e in self.entries if e.severity == "warning"]

    def add_error(self, code: str, subject: str, message: str):
        self.entries.append(ValidationIssue("error", code, subject, message))

    def add_warning(self, code: str, subject: str, message: str):
        self.entries.append(ValidationIssue("warning", code, subject, message))

    def codes(self) -> set[str]:
        return {e.code for e in self.entries}


def validate_lattice(lattice: Lattice, wedge_samples: int = 512) -> ValidationReport:
    """Check structural and geometric consistency; never raises.

    Errors: duplicate/missing ids, non-positive radii, ``k = 0``, tangency
    plane missing its sphere, fillet beam pairs not sharing the named hub,
    degenerate (parallel-stub or self-loop) configurations.  Warnings:
    overlapping hub spheres, sampled fillet wedge overlap at hubs with more
    than two beams, fillets still active on their locality sphere.
    """
    report = ValidationReport()

    seen_hub: set[str] = set()
    for h in lattice.hubs:
        if h.id in seen_hub:
            report.add_error("DUPLICATE_ID", h.id, f"duplicate hub id {h.id!r}")
        seen_hub.add(h.id)
        if not (h.radius > 0.0):
            report.add_error(
                "NONPOSITIVE_RADIUS", h.id, f"hub {h.id!r} has radius {h.radius}"
            )

    seen_beam: set[str] = set()
    geoms: dict[str, BeamGeometry] = {}
    for b in lattice.beams:
        if b.id in seen_beam:
            report.add_error("DUPLICATE_ID", b.id, f"duplicate beam id {b.id!r}")
        seen_beam.add(b.id)
        if b.hub_a == b.hub_b:
            report.add_error("SELF_LOOP", b.id, f"beam {b.id!r} joins a hub to itself")
            continue
        missing = [hid for hid in (b.hub_a, b.hub_b) if hid not in seen_hub]
        if missing:
            report.add_error(
                "MISSING_ID", b.id, f"beam {b.id!r} references unknown hub(s) {missing}"
            )
            continue
        if b.k == 0.0 or not math.isfinite(b.k):
            report.add_error("DEGENERATE_K", b.id, f"beam {b.id!r} has k={b.k}")
            continue
        if any(not (lattice.hub(h).radius > 0.0) for h in (b.hub_a, b.hub_b)):
            continue
        try:
            geoms[b.id] = _build_geometry(lattice, b)
        except PlaneMissesSphereError as exc:
            report.add_error(
                "PLANE_MISSES_SPHERE",
                b.id,
                f"beam {b.id!r}: tangency plane misses hub {exc.hub_id!r}",
            )

    for i, h1 in enumerate(lattice.hubs):
        for h2 in lattice.hubs[i + 1:]:
            gap = math.dist(h1.center, h2.center)
            if gap < h1.radius + h2.radius:
                report.add_warning(
                    "HUB_OVERLAP",
                    f"{h1.id}+{h2.id}",
                    f"hub spheres {h1.id!r} and {h2.id!r} overlap",
                )

    fillet_wedges: dict[str, list[tuple[LinearForm, LinearForm]]] = {}
    for fs in lattice.fillets:
        subject = f"{fs.hub}:{fs.beam_i}+{fs.beam_j}"
        if fs.beam_i == fs.beam_j:
            report.add_error("FILLET_PAIR_MISMATCH", subject, "fillet names one beam twice")
            continue
        if not (fs.beta > 0.0) or not math.isfinite(fs.beta):
            report.add_error("NONPOSITIVE_BETA", subject, f"fillet beta={fs.beta}")
            continue
        if fs.hub not in seen_hub:
            report.add_error("MISSING_ID", subject, f"fillet names unknown hub {fs.hub!r}")
            continue
        bad = False
        for bid in (fs.beam_i, fs.beam_j):
            if bid not in seen_beam:
                report.add_error("MISSING_ID", subject, f"fillet names unknown beam {bid!r}")
                bad = True
            else:
                beam = lattice.beam(bid)
                if fs.hub not in (beam.hub_a, beam.hub_b):
                    report.add_error(
                        "FILLET_PAIR_MISMATCH",
                        subject,
                        f"beam {bid!r} is not incident to hub {fs.hub!r}",
                    )
                    bad = True
        if bad or fs.beam_i not in geoms or fs.beam_j not in geoms:
            continue

        # Geometric checks need the built patch; import here to avoid a cycle.
        from .fillet import build_fillet_for_spec
        from .errors import QuadorError

        try:
            patch = build_fillet_for_spec(lattice, fs)
        except QuadorError as exc:
            report.add_error(exc.code, subject, str(exc))
            continue
        fillet_wedges.setdefault(fs.hub, []).append((patch.E1, patch.E2))

        hub = lattice.hub(fs.hub)
        rho = _locality_radius(lattice, hub)
        rng = np.random.default_rng(0)
        center = np.asarray(hub.center)
        dirs = rng.normal(size=(wedge_samples, 3))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        boundary = center + rho * dirs
        active = 0
        for p in boundary:
            if patch.E1.value(p) >= 0 and patch.E2.value(p) >= 0 and patch.Q.value(p) <= 0:
                active += 1
        if active:
            report.add_warning(
                "FILLET_ACTIVE_AT_LOCALITY",
                subject,
                f"fillet solid reaches the locality sphere "
                f"({active}/{wedge_samples} sampled directions); it will be clipped",
            )

    for hub_id, wedges in fillet_wedges.items():
        if len(wedges) < 2 or len(lattice.beams_at(hub_id)) <= 2:
            continue
        hub = lattice.hub(hub_id)
        rng = np.random.default_rng(1)
        center = np.asarray(hub.center)
        pts = center + rng.uniform(-2 * hub.radius, 2 * hub.radius, size=(wedge_samples, 3))
        for a in range(len(wedges)):
            for b in range(a + 1, len(wedges)):
                e1a, e2a = wedges[a]
                e1b, e2b = wedges[b]
                hit = any(
                    e1a.value(p) > 0 and e2a.value(p) > 0
                    and e1b.value(p) > 0 and e2b.value(p) > 0
                    for p in pts
                )
                if hit:
                    report.add_warning(
                        "FILLET_WEDGE_OVERLAP",
                        hub_id,
                        f"fillet wedges {a} and {b} at hub {hub_id!r} overlap "
                        "(sampled); tangency between the patches is not guaranteed",
                    )
    return report


def _locality_radius(lattice: Lattice, hub: Hub, multiplier: float = 1.0) -> float:
    """Locality-ball radius for fillet clipping at a hub.

    Minimum center distance to a connected hub (times ``multiplier``);
    ``2r`` for isolated hubs.  Clamped so the ball strictly contains the
    hub sphere.
    """
    dists = []
    for beam in lattice.beams_at(hub.id):
        other = beam.hub_b if beam.hub_a == hub.id else beam.hub_a
        dists.append(math.dist(hub.center, lattice.hub(other).center))
    rho = multiplier * min(dists) if dists else 2.0 * hub.radius
    return max(rho, 1.25 * hub.radius)
