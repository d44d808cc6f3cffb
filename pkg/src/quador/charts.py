"""Closed-form parametrizations of non-degenerate quadric surfaces.

Every chart works in the canonical frame of a
:class:`~quador.algebra.QuadricClassification`: the forward map sends
parameters ``(u, v)`` to a world point on the surface, the inverse recovers
parameters for an on-surface world point, and ``forward(inverse(p))``
reproduces ``p``.  Angular parameters are flagged so trimming curves can be
unwrapped across the 2*pi seam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import CHARTED_CLASSES, Quadric, QuadricClass, QuadricClassification
from .errors import UnsupportedClassError

__all__ = ["SurfaceChart", "parametrize"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class SurfaceChart:
    """Exact parametric form of one quadric surface class."""

    label: QuadricClass
    classification: QuadricClassification
    domain: str
    u_period: float  # 0.0 when the parameter is not angular
    v_period: float
    _forward: Callable[[float, float], np.ndarray]
    _inverse: Callable[[np.ndarray], tuple[float, float]]

    def forward(self, u: float, v: float) -> np.ndarray:
        y = self._forward(float(u), float(v))
        return self.classification.to_world(y)

    def inverse(self, p) -> tuple[float, float]:
        y = self.classification.to_canonical(p)
        return self._inverse(y)


def _clamped_asin(x: float) -> float:
    return math.asin(min(1.0, max(-1.0, x)))


def parametrize(q: Quadric, cls: QuadricClassification) -> SurfaceChart:
    """Build the standard chart for a classified quadric.

    Supported classes: ellipsoid, both hyperboloids, both paraboloids, the
    three cylinders, and the cone.  Raises :class:`UnsupportedClassError`
    for plane pairs, lines, points, and empty sets.
    """
    label = cls.label
    if label not in CHARTED_CLASSES:
        raise UnsupportedClassError(f"no chart for class {label.value}")

    lam = np.asarray(cls.diag)
    nz = [i for i in range(3) if lam[i] != 0.0]
    null = [i for i in range(3) if lam[i] == 0.0]
    c_t = cls.scalar if cls.parabolic_axis is None else 0.0

    def build(fwd, inv, domain, u_period=0.0, v_period=0.0):
        return SurfaceChart(label, cls, domain, u_period, v_period, fwd, inv)

    if label is QuadricClass.ELLIPSOID:
        a = np.sqrt(-c_t / lam)

        def fwd(u, v):
            cv = math.cos(v)
            return np.array(
                [a[0] * math.cos(u) * cv, a[1] * math.sin(u) * cv, a[2] * math.sin(v)]
            )

        def inv(y):
            v = _clamped_asin(y[2] / a[2])
            u = math.atan2(y[1] / a[1], y[0] / a[0]) if abs(math.cos(v)) > 0 else 0.0
            return u, v

        return build(fwd, inv, "u in [-pi, pi), v in [-pi/2, pi/2]", TWO_PI, 0.0)

    if label is QuadricClass.HYPERBOLOID_ONE_SHEET:
        pair = [i for i in nz if lam[i] * c_t < 0]
        (o,) = [i for i in nz if i not in pair]
        a = [math.sqrt(-c_t / lam[i]) for i in pair]
        co = math.sqrt(c_t / lam[o])

        def fwd(u, v):
            y = np.zeros(3)
            ch = math.cosh(v)
            y[pair[0]] = a[0] * math.cos(u) * ch
            y[pair[1]] = a[1] * math.sin(u) * ch
            y[o] = co * math.sinh(v)
            return y

        def inv(y):
            v = math.asinh(y[o] / co)
            u = math.atan2(y[pair[1]] / a[1], y[pair[0]] / a[0])
            return u, v

        return build(fwd, inv, "u in [-pi, pi), v in R", TWO_PI, 0.0)

    if label is QuadricClass.HYPERBOLOID_TWO_SHEETS:
        pair = [i for i in nz if lam[i] * c_t > 0]
        (o,) = [i for i in nz if i not in pair]
        a = [math.sqrt(c_t / lam[i]) for i in pair]
        co = math.sqrt(-c_t / lam[o])

        # sec/tan chart: v in (-pi/2, pi/2) covers the +axis sheet, the
        # complementary branch of sec covers the other sheet.
        def fwd(u, v):
            y = np.zeros(3)
            tv = math.tan(v)
            y[pair[0]] = a[0] * tv * math.cos(u)
            y[pair[1]] = a[1] * tv * math.sin(u)
            y[o] = co / math.cos(v)
            return y

        def inv(y):
            r = math.hypot(y[pair[0]] / a[0], y[pair[1]] / a[1])
            t = co / y[o]
            v = math.atan2(r * t, t)
            if r > 0.0:
                u = math.atan2(y[pair[1]] / a[1], y[pair[0]] / a[0])
            else:
                u = 0.0
            return u, v

        return build(
            fwd, inv, "u in [-pi, pi), v in (-pi/2, pi/2) u (pi/2, 3pi/2)", TWO_PI, TWO_PI
        )

    if label is QuadricClass.ELLIPTIC_PARABOLOID:
        d = cls.parabolic_axis
        s = cls.scalar
        p1, p2 = nz
        sq = [math.sqrt(abs(lam[p1])), math.sqrt(abs(lam[p2]))]
        sgn = math.copysign(1.0, lam[p1])

        def fwd(u, v):
            # u is the angle, v >= 0 the radial parameter.
            y = np.zeros(3)
            y[p1] = v * math.cos(u) / sq[0]
            y[p2] = v * math.sin(u) / sq[1]
            y[d] = -sgn * v * v / (2.0 * s)
            return y

        def inv(y):
            c1 = y[p1] * sq[0]
            c2 = y[p2] * sq[1]
            v = math.hypot(c1, c2)
            u = math.atan2(c2, c1) if v > 0.0 else 0.0
            return u, v

        return build(fwd, inv, "u in [-pi, pi), v in [0, inf)", TWO_PI, 0.0)

    if label is QuadricClass.HYPERBOLIC_PARABOLOID:
        d = cls.parabolic_axis
        s = cls.scalar
        p1, p2 = nz

        def fwd(u, v):
            y = np.zeros(3)
            y[p1] = u
            y[p2] = v
            y[d] = -(lam[p1] * u * u + lam[p2] * v * v) / (2.0 * s)
            return y

        def inv(y):
            return float(y[p1]), float(y[p2])

        return build(fwd, inv, "(u, v) in R^2")

    if label is QuadricClass.ELLIPTIC_CYLINDER:
        p1, p2 = nz
        (n,) = null
        a = [math.sqrt(-c_t / lam[p1]), math.sqrt(-c_t / lam[p2])]

        def fwd(u, v):
            y = np.zeros(3)
            y[p1] = a[0] * math.cos(u)
            y[p2] = a[1] * math.sin(u)
            y[n] = v
            return y

        def inv(y):
            u = math.atan2(y[p2] / a[1], y[p1] / a[0])
            return u, float(y[n])

        return build(fwd, inv, "u in [-pi, pi), v in R", TWO_PI, 0.0)

    if label is QuadricClass.HYPERBOLIC_CYLINDER:
        (n,) = null
        (m,) = [i for i in nz if lam[i] * c_t < 0]
        (w,) = [i for i in nz if i != m]
        am = math.sqrt(-c_t / lam[m])
        bw = math.sqrt(c_t / lam[w])

        # sec/tan chart: u in (-pi/2, pi/2) is one branch, the complementary
        # interval the other.
        def fwd(u, v):
            y = np.zeros(3)
            y[m] = am / math.cos(u)
            y[w] = bw * math.tan(u)
            y[n] = v
            return y

        def inv(y):
            t = am / y[m]
            u = math.atan2((y[w] / bw) * t, t)
            return u, float(y[n])

        return build(
            fwd, inv, "u in (-pi/2, pi/2) u (pi/2, 3pi/2), v in R", TWO_PI, 0.0
        )

    if label is QuadricClass.PARABOLIC_CYLINDER:
        (qx,) = nz
        d = cls.parabolic_axis
        (f,) = [i for i in null if i != d]
        s = cls.scalar

        def fwd(u, v):
            y = np.zeros(3)
            y[qx] = u
            y[d] = -lam[qx] * u * u / (2.0 * s)
            y[f] = v
            return y

        def inv(y):
            return float(y[qx]), float(y[f])

        return build(fwd, inv, "(u, v) in R^2")

    # CONE
    pos = [i for i in nz if lam[i] > 0]
    neg = [i for i in nz if lam[i] < 0]
    pair, (o,) = (pos, neg) if len(pos) == 2 else (neg, pos)
    a = [math.sqrt(-lam[o] / lam[i]) for i in pair]

    def fwd(u, v):
        y = np.zeros(3)
        y[pair[0]] = a[0] * v * math.cos(u)
        y[pair[1]] = a[1] * v * math.sin(u)
        y[o] = v
        return y

    def inv(y):
        v = float(y[o])
        if v != 0.0:
            u = math.atan2(y[pair[1]] / (a[1] * v), y[pair[0]] / (a[0] * v))
        else:
            u = 0.0
        return u, v

    return build(fwd, inv, "u in [-pi, pi), v in R (apex at v=0)", TWO_PI, 0.0)
