import numpy as np
import pytest

from quador import Beam, FilletSpec, Hub, Lattice


@pytest.fixture
def perp_lattice():
    """Two perpendicular unit-cylinder stubs on a unit hub, fillet beta=1."""
    return Lattice(
        hubs=(
            Hub("h0", (0.0, 0.0, 0.0), 1.0),
            Hub("h1", (4.0, 0.0, 0.0), 1.0),
            Hub("h2", (0.0, 4.0, 0.0), 1.0),
        ),
        beams=(
            Beam("b1", "h0", "h1", 4.0),
            Beam("b2", "h0", "h2", 4.0),
        ),
        fillets=(FilletSpec("h0", "b1", "b2", 1.0),),
    )


@pytest.fixture
def perp_lattice_beta(perp_lattice):
    """Same fixture with a selectable fillet beta."""

    def make(beta: float) -> Lattice:
        return Lattice(
            perp_lattice.hubs,
            perp_lattice.beams,
            (FilletSpec("h0", "b1", "b2", beta),),
        )

    return make


@pytest.fixture
def asym_hubs():
    """r=1 and r=2 hubs at distance 4 (k=4 beam is a circular paraboloid)."""
    return Hub("h0", (0.0, 0.0, 0.0), 1.0), Hub("h1", (4.0, 0.0, 0.0), 2.0)


def random_rotation(rng) -> np.ndarray:
    m = rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(m)
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def transformed_quadric(A, b, c, rotation, translation):
    """The quadric Q'(x) = Q(R^T (x - t)) as explicit coefficients."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    A2 = rotation @ A @ rotation.T
    b2 = -A2 @ translation + rotation @ b
    c2 = (
        float(translation @ A2 @ translation)
        - 2.0 * float((rotation @ b) @ translation)
        + c
    )
    return A2, b2, c2


def watertight(mesh) -> bool:
    """Every undirected edge incident to exactly two triangles."""
    from collections import Counter

    edges = Counter()
    for t in mesh.triangles:
        for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            edges[(min(a, b), max(a, b))] += 1
    return bool(edges) and set(edges.values()) == {2}
