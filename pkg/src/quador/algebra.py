"""Linear and quadratic forms on R^3.

A :class:`LinearForm` is the affine function ``L(x) = g . x + c0``; its zero
set is a plane whenever ``|g| > 0``.  A :class:`Quadric` is the quadratic
function ``Q(x) = x^T A x + 2 b^T x + c`` with ``A`` stored exactly
symmetric.  Both are immutable values; every operation here is pure, so the
whole module is safe for concurrent use.

The sign convention throughout the kernel: implicit functions are negative
inside the solid and increase outward, so ``+grad`` is the outward normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AllZeroError, SingularPointError
from .tolerances import (
    CLASSIFY_TOL,
    JACOBI_OFFDIAG_TOL,
    JACOBI_SWEEP_CAP,
)

__all__ = [
    "LinearForm",
    "Quadric",
    "QuadricClass",
    "QuadricClassification",
    "subtract_square",
    "jacobi_eigen3",
    "classify_quadric",
    "principal_curvatures",
]


def _vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    return v


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LinearForm:
    """Affine function ``L(x) = g . x + c0``."""

    g: np.ndarray
    c0: float

    def __post_init__(self):
        object.__setattr__(self, "g", _freeze(_vec(self.g)))
        object.__setattr__(self, "c0", float(self.c0))

    def value(self, x) -> float:
        return float(self.g @ _vec(x) + self.c0)

    def gradient(self) -> np.ndarray:
        return self.g

    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.g))

    def scaled(self, s: float) -> "LinearForm":
        return LinearForm(self.g * s, self.c0 * s)

    def __neg__(self) -> "LinearForm":
        return self.scaled(-1.0)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.g + other.g, self.c0 + other.c0)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.g - other.g, self.c0 - other.c0)

    def __repr__(self):
        gx, gy, gz = self.g
        return f"LinearForm(g=({gx:g}, {gy:g}, {gz:g}), c0={self.c0:g})"


@dataclass(frozen=True, eq=False)
class Quadric:
    """Quadratic function ``Q(x) = x^T A x + 2 b^T x + c``."""

    A: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (3, 3):
            raise ValueError(f"A must be 3x3, got {A.shape}")
        # Store exactly symmetric: averaging makes A[i,j] == A[j,i] bitwise.
        object.__setattr__(self, "A", _freeze(0.5 * (A + A.T)))
        object.__setattr__(self, "b", _freeze(_vec(self.b)))
        object.__setattr__(self, "c", float(self.c))

    def value(self, x) -> float:
        v = _vec(x)
        return float(v @ self.A @ v + 2.0 * (self.b @ v) + self.c)

    def gradient(self, x) -> np.ndarray:
        return 2.0 * (self.A @ _vec(x)) + 2.0 * self.b

    def hessian(self) -> np.ndarray:
        return 2.0 * self.A

    def coeffs(self) -> np.ndarray:
        """Canonical 10-vector (A diagonal, off-diagonals, b, c) for comparisons."""
        A, b = self.A, self.b
        return np.array(
            [A[0, 0], A[1, 1], A[2, 2], A[0, 1], A[0, 2], A[1, 2],
             b[0], b[1], b[2], self.c]
        )

    def scaled(self, s: float) -> "Quadric":
        return Quadric(self.A * s, self.b * s, self.c * s)

    def __sub__(self, other: "Quadric") -> "Quadric":
        return Quadric(self.A - other.A, self.b - other.b, self.c - other.c)

    def __repr__(self):
        return f"Quadric(c={self.c:g}, b={tuple(self.b)}, A={self.A.tolist()})"


def subtract_square(q: Quadric, lin: LinearForm) -> Quadric:
    """Return the quadric ``Q - L^2``.

    ``(g.x + c0)^2`` expands to ``x^T g g^T x + 2 c0 g.x + c0^2``, so the
    result is ``(A - g g^T, b - c0 g, c - c0^2)``.  The result is invariant
    under flipping the sign of ``lin``.
    """
    g, c0 = lin.g, lin.c0
    return Quadric(q.A - np.outer(g, g), q.b - c0 * g, q.c - c0 * c0)


def linear_product(p: LinearForm, q: LinearForm) -> Quadric:
    """The quadric ``P(x) * Q(x)`` of two linear forms."""
    A = 0.5 * (np.outer(p.g, q.g) + np.outer(q.g, p.g))
    b = 0.5 * (p.c0 * q.g + q.c0 * p.g)
    return Quadric(A, b, p.c0 * q.c0)


# ---------------------------------------------------------------------------
# Symmetric 3x3 eigen-decomposition (cyclic Jacobi)
# ---------------------------------------------------------------------------

def jacobi_eigen3(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a symmetric 3x3 matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, V)`` with eigenvalues sorted descending and the
    columns of ``V`` the matching eigenvectors.  ``V`` is right-handed;
    column signs are fixed so each column's largest-magnitude component is
    positive (the last column yields to right-handedness when the two rules
    conflict).  Off-diagonal mass is reduced below
    ``JACOBI_OFFDIAG_TOL * ||A||_F`` within ``JACOBI_SWEEP_CAP`` sweeps,
    which always suffices for 3x3 symmetric input.
    """
    a = np.array(A, dtype=float)
    if a.shape != (3, 3):
        raise ValueError("jacobi_eigen3 expects a 3x3 matrix")
    a = 0.5 * (a + a.T)
    v = np.eye(3)
    norm = np.linalg.norm(a)
    thresh = JACOBI_OFFDIAG_TOL * max(norm, 1e-300)

    for _ in range(JACOBI_SWEEP_CAP):
        off = math.sqrt(a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2)
        if off <= thresh:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            apq = a[p, q]
            if abs(apq) <= thresh / 10.0:
                continue
            theta = 0.5 * (a[q, q] - a[p, p]) / apq
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
            cs = 1.0 / math.sqrt(1.0 + t * t)
            sn = t * cs
            rot = np.eye(3)
            rot[p, p] = rot[q, q] = cs
            rot[p, q] = sn
            rot[q, p] = -sn
            a = rot.T @ a @ rot
            a = 0.5 * (a + a.T)
            v = v @ rot

    evals = np.diag(a).copy()
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    v = v[:, order]
    # Deterministic signs: largest-magnitude component of each column positive.
    for j in range(3):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0.0:
            v[:, j] = -v[:, j]
    if np.linalg.det(v) < 0.0:
        v[:, 2] = -v[:, 2]
    return evals, v


# ---------------------------------------------------------------------------
# Classification into canonical form
# ---------------------------------------------------------------------------

class QuadricClass(Enum):
    ELLIPSOID = "ELLIPSOID"
    HYPERBOLOID_ONE_SHEET = "HYPERBOLOID_ONE_SHEET"
    HYPERBOLOID_TWO_SHEETS = "HYPERBOLOID_TWO_SHEETS"
    ELLIPTIC_PARABOLOID = "ELLIPTIC_PARABOLOID"
    HYPERBOLIC_PARABOLOID = "HYPERBOLIC_PARABOLOID"
    ELLIPTIC_CYLINDER = "ELLIPTIC_CYLINDER"
    HYPERBOLIC_CYLINDER = "HYPERBOLIC_CYLINDER"
    PARABOLIC_CYLINDER = "PARABOLIC_CYLINDER"
    CONE = "CONE"
    PARALLEL_PLANES = "PARALLEL_PLANES"
    CROSSING_PLANES = "CROSSING_PLANES"
    SINGLE_PLANE = "SINGLE_PLANE"
    LINE = "LINE"
    POINT = "POINT"
    EMPTY = "EMPTY"


#: Classes with a closed-form surface chart.
CHARTED_CLASSES = frozenset(
    {
        QuadricClass.ELLIPSOID,
        QuadricClass.HYPERBOLOID_ONE_SHEET,
        QuadricClass.HYPERBOLOID_TWO_SHEETS,
        QuadricClass.ELLIPTIC_PARABOLOID,
        QuadricClass.HYPERBOLIC_PARABOLOID,
        QuadricClass.ELLIPTIC_CYLINDER,
        QuadricClass.HYPERBOLIC_CYLINDER,
        QuadricClass.PARABOLIC_CYLINDER,
        QuadricClass.CONE,
    }
)


@dataclass(frozen=True, eq=False)
class QuadricClassification:
    """Canonical frame and coefficients of a classified quadric.

    In canonical coordinates ``y = R^T (x - t)`` the quadric reads

        diag[0] y0^2 + diag[1] y1^2 + diag[2] y2^2
            (+ 2 * scalar * y[parabolic_axis])  if parabolic_axis is not None
            (+ scalar)                          otherwise

    ``diag`` is sorted descending with sub-tolerance entries snapped to 0.
    """

    label: QuadricClass
    rotation: np.ndarray
    translation: np.ndarray
    diag: tuple[float, float, float]
    scalar: float
    parabolic_axis: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "rotation", _freeze(self.rotation))
        object.__setattr__(self, "translation", _freeze(self.translation))
        object.__setattr__(self, "diag", tuple(float(d) for d in self.diag))
        object.__setattr__(self, "scalar", float(self.scalar))

    def to_canonical(self, x) -> np.ndarray:
        return self.rotation.T @ (_vec(x) - self.translation)

    def to_world(self, y) -> np.ndarray:
        return self.translation + self.rotation @ np.asarray(y, dtype=float)

    def reconstruct(self) -> Quadric:
        """Rebuild the quadric from frame + canonical coefficients."""
        R, t = self.rotation, self.translation
        lam = np.asarray(self.diag)
        A = R @ np.diag(lam) @ R.T
        b = -A @ t
        c = float(t @ A @ t)
        if self.parabolic_axis is not None:
            u = R[:, self.parabolic_axis]
            b = b + self.scalar * u
            c -= 2.0 * self.scalar * float(u @ t)
        else:
            c += self.scalar
        return Quadric(A, b, c)


def _axis_complement(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``n`` to a right-handed orthonormal basis.

    The first is built from the global axis least aligned with ``n``
    (ties broken x before y before z) for reproducible output.
    """
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    u = np.cross(n, e)
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v


def classify_quadric(q: Quadric, tol: float = CLASSIFY_TOL) -> QuadricClassification:
    """Classify a quadric into one of 15 canonical classes.

    ``tol`` is the relative rank threshold: eigenvalues with
    ``|lam| <= tol * max|lam|`` are treated as zero, and residual linear and
    constant terms are zeroed relative to the overall coefficient scale.
    Degenerate translations are resolved by the least-squares center (zero
    component along null axes).  Raises :class:`AllZeroError` when every
    coefficient is negligible.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    evals, V = jacobi_eigen3(q.A)
    lam_max = float(np.max(np.abs(evals)))
    b_norm = float(np.linalg.norm(q.b))
    coeff_scale = max(lam_max, b_norm, abs(q.c))
    if coeff_scale <= 1e-300:
        raise AllZeroError("all quadric coefficients are zero")
    thr = tol * coeff_scale

    if lam_max <= thr:
        # No quadratic part: a plane, or empty, depending on the linear part.
        if b_norm > thr:
            n = q.b / b_norm
            t = -q.c * q.b / (2.0 * b_norm * b_norm)
            u, v = _axis_complement(n)
            R = np.column_stack([n, u, v])
            if np.linalg.det(R) < 0.0:
                R[:, 2] = -R[:, 2]
            return QuadricClassification(
                QuadricClass.SINGLE_PLANE, R, t, (0.0, 0.0, 0.0), b_norm, 0
            )
        return QuadricClassification(
            QuadricClass.EMPTY, np.eye(3), np.zeros(3), (0.0, 0.0, 0.0), q.c
        )

    zero = np.abs(evals) <= tol * lam_max
    lam = np.where(zero, 0.0, evals)
    nz = [i for i in range(3) if not zero[i]]
    null = [i for i in range(3) if zero[i]]
    rank = len(nz)

    b2 = V.T @ q.b
    # Least-squares center: complete the square along non-null axes only.
    y0 = np.zeros(3)
    for i in nz:
        y0[i] = -b2[i] / lam[i]
    c_t = q.c + sum(b2[i] * y0[i] for i in nz)
    lin = np.array([b2[i] if i in null else 0.0 for i in range(3)])
    lin_mag = float(np.linalg.norm(lin))
    has_linear = lin_mag > thr
    c_zero = abs(c_t) <= thr

    R = V
    t = V @ y0
    diag = tuple(lam)

    if rank == 3:
        pos = sum(1 for i in nz if lam[i] > 0)
        neg = 3 - pos
        if pos == 3 or neg == 3:
            sgn = 1.0 if pos == 3 else -1.0
            if c_zero:
                label = QuadricClass.POINT
            elif c_t * sgn < 0:
                label = QuadricClass.ELLIPSOID
            else:
                label = QuadricClass.EMPTY
        else:
            # Mixed signature: normalize so two coefficients are positive.
            flip = -1.0 if pos == 1 else 1.0
            if c_zero:
                label = QuadricClass.CONE
            elif -c_t * flip > 0:
                label = QuadricClass.HYPERBOLOID_ONE_SHEET
            else:
                label = QuadricClass.HYPERBOLOID_TWO_SHEETS
        return QuadricClassification(label, R, t, diag, 0.0 if c_zero else c_t)

    if rank == 2:
        same_sign = lam[nz[0]] * lam[nz[1]] > 0
        if has_linear:
            d = null[0]
            s = b2[d]
            # Translate along the null axis so the constant vanishes.
            y0[d] = -c_t / (2.0 * s)
            t = V @ y0
            label = (
                QuadricClass.ELLIPTIC_PARABOLOID
                if same_sign
                else QuadricClass.HYPERBOLIC_PARABOLOID
            )
            return QuadricClassification(label, R, t, diag, s, d)
        if same_sign:
            sgn = math.copysign(1.0, lam[nz[0]])
            if c_zero:
                label = QuadricClass.LINE
            elif c_t * sgn < 0:
                label = QuadricClass.ELLIPTIC_CYLINDER
            else:
                label = QuadricClass.EMPTY
        else:
            label = (
                QuadricClass.CROSSING_PLANES if c_zero else QuadricClass.HYPERBOLIC_CYLINDER
            )
        return QuadricClassification(label, R, t, diag, 0.0 if c_zero else c_t)

    # rank == 1
    qx = nz[0]
    if has_linear:
        # Rotate within the null plane so the linear term lies along one axis.
        d_world = (lin[null[0]] * V[:, null[0]] + lin[null[1]] * V[:, null[1]]) / lin_mag
        q_world = V[:, qx]
        f_world = np.cross(q_world, d_world)
        cols = [None, None, None]
        cols[qx] = q_world
        cols[null[0]] = d_world
        cols[null[1]] = f_world
        R = np.column_stack(cols)
        if np.linalg.det(R) < 0.0:
            R[:, null[1]] = -R[:, null[1]]
        y0n = R.T @ (V @ y0)
        y0n[null[0]] -= c_t / (2.0 * lin_mag)
        t = R @ y0n
        return QuadricClassification(
            QuadricClass.PARABOLIC_CYLINDER, R, t, diag, lin_mag, null[0]
        )
    sgn = math.copysign(1.0, lam[qx])
    if c_zero:
        label = QuadricClass.SINGLE_PLANE
    elif c_t * sgn < 0:
        label = QuadricClass.PARALLEL_PLANES
    else:
        label = QuadricClass.EMPTY
    return QuadricClassification(label, R, t, diag, 0.0 if c_zero else c_t)


# ---------------------------------------------------------------------------
# Principal curvatures
# ---------------------------------------------------------------------------

def principal_curvatures(q: Quadric, x, tol: float = 1e-12) -> tuple[float, float]:
    """Principal curvatures of the level set of ``q`` through ``x``.

    Eigenvalues of the tangent-plane-projected Hessian divided by the
    gradient norm, sorted so ``|k1| >= |k2|``; the normal is ``+grad``, so a
    sphere reported with this convention has curvature ``+1/r``.  Raises
    :class:`SingularPointError` when the gradient vanishes at ``x``.
    """
    p = _vec(x)
    grad = q.gradient(p)
    gn = float(np.linalg.norm(grad))
    scale = max(1.0, float(np.linalg.norm(q.A)), float(np.linalg.norm(q.b)))
    if gn <= tol * scale:
        raise SingularPointError(f"gradient vanishes at {tuple(p)}")
    n = grad / gn
    u, v = _axis_complement(n)
    H = q.hessian()
    m11 = float(u @ H @ u)
    m12 = float(u @ H @ v)
    m22 = float(v @ H @ v)
    half_tr = 0.5 * (m11 + m22)
    disc = math.sqrt(max(0.0, (0.5 * (m11 - m22)) ** 2 + m12 * m12))
    k1 = (half_tr + disc) / gn
    k2 = (half_tr - disc) / gn
    if abs(k2) > abs(k1):
        k1, k2 = k2, k1
    return k1, k2
