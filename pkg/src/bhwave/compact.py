"""Local charts at infinity and the inventory of infinite equilibria.

The plane is compactified onto a disk whose boundary circle holds the
directions at infinity.  Four charts cover the circle: U1/V1 around the
(+x)/(-x) directions with coordinates (u, v) = (y/x, 1/|x|), and U2/V2
around (+y)/(-y) with (u, v) = (x/y, 1/|y|); v = 0 is infinity.

The chart vector fields are hardcoded per (n, k) case, already multiplied
by the positive time rescaling v**(d-1) (d the polynomial degree) that
makes them polynomial.  :func:`pushforward_residual` certifies each
hardcoded system against the chain rule of the chart map applied to the
plane field, which is the guard against transcription slips.
"""
from __future__ import annotations

import math

import numpy as np

from .core import Params, ValidationError, degree, eval_field, ipow
from .equilibria import DEGENERATE, SADDLE_NODE, STABLE_NODE, UNSTABLE_NODE, Equilibrium

CHARTS = ("U1", "V1", "U2", "V2")


def antipodal_sign(p: Params) -> float:
    """Parity factor (-1)**(d-1) relating antipodal chart fields, d the degree.

    On the circle at infinity the V-chart field at (u, 0) equals this sign
    times the U-chart field there, so opposite boundary points have
    reversed-time local portraits exactly when d is even.
    """
    return -1.0 if (degree(p) - 1) % 2 else 1.0


def _u1_field(p: Params, u: float, v: float) -> np.ndarray:
    c, k = p.c, p.k
    vk = ipow(v, k)
    if p.n == 1:
        du = u + ipow(v, k - 1) - vk - c * u * vk - u * u * vk
        dv = -u * ipow(v, k + 1)
    elif p.k == 1:
        du = 1.0 + v * (u - (1.0 + u * (c + u)) * v)
        dv = -u * v * v * v
    else:
        du = u + ipow(v, k - 2) - vk - c * u * vk - u * u * vk
        dv = -u * ipow(v, k + 1)
    return np.array([du, dv])


def _u2_field(p: Params, u: float, v: float) -> np.ndarray:
    c, k = p.c, p.k
    if p.n == 1:
        du = (-ipow(u, 3) * ipow(v, k - 1) + ipow(v, k) + c * u * ipow(v, k)
              + u * u * ipow(v, k) - ipow(u, k + 1))
        dv = (-u * u * ipow(v, k) + c * ipow(v, k + 1) + u * ipow(v, k + 1)
              - ipow(u, k) * v)
    elif p.k == 1:
        du = -ipow(u, 4) + u * u * (v - 1.0) * v + v * v * (1.0 + c * u)
        dv = v * (-ipow(u, 3) + u * (v - 1.0) * v + c * v * v)
    else:
        du = (-ipow(u, 4) * ipow(v, k - 2) + ipow(v, k) + c * u * ipow(v, k)
              + u * u * ipow(v, k) - ipow(u, k + 1))
        dv = (-ipow(u, 3) * ipow(v, k - 1) + c * ipow(v, k + 1)
              + u * ipow(v, k + 1) - ipow(u, k) * v)
    return np.array([du, dv])


def chart_field(p: Params, chart: str, u: float, v: float) -> np.ndarray:
    """Rescaled chart field (du, dv) at (u, v) for one of the four charts.

    The V charts parameterize the x < 0 (resp. y < 0) half of the plane
    faithfully via (x, y) = (-1/v, -u/v) (resp. (-u/v, -1/v)), so their
    fields are the U-chart expressions evaluated at (u, -v), with the dv
    component negated and the whole vector scaled by the antipodal parity
    factor.  This keeps v**(d-1) the exact positive time rescaling of the
    plane flow in every chart, and at v = 0 it reduces to the parity rule
    relating opposite boundary points.
    """
    if chart not in CHARTS:
        raise ValidationError(f"unknown chart {chart!r}")
    base = _u1_field if chart in ("U1", "V1") else _u2_field
    if chart.startswith("U"):
        return base(p, u, v)
    du, dv = base(p, u, -v)
    return antipodal_sign(p) * np.array([du, -dv])


def chart_to_finite(chart: str, u: float, v: float) -> np.ndarray:
    """Map a chart point with v > 0 to its finite-plane image."""
    if v <= 0:
        raise ValidationError("chart point maps to a finite point only for v > 0")
    if chart == "U1":
        return np.array([1.0 / v, u / v])
    if chart == "V1":
        return np.array([-1.0 / v, -u / v])
    if chart == "U2":
        return np.array([u / v, 1.0 / v])
    if chart == "V2":
        return np.array([-u / v, -1.0 / v])
    raise ValidationError(f"unknown chart {chart!r}")


def finite_to_chart(pt) -> tuple[str, float, float]:
    """Chart covering the direction of pt, chosen by the dominant coordinate.

    |x| >= |y| picks U1 (x > 0) or V1 (x < 0); otherwise U2/V2 by the sign
    of y.  The returned u then satisfies |u| <= 1.
    """
    x, y = float(pt[0]), float(pt[1])
    if x == 0.0 and y == 0.0:
        raise ValidationError("the origin has no direction at infinity")
    if abs(x) >= abs(y):
        return ("U1" if x > 0 else "V1"), y / x, 1.0 / abs(x)
    return ("U2" if y > 0 else "V2"), x / y, 1.0 / abs(y)


def pushforward_residual(p: Params, chart: str, u: float, v: float) -> float:
    """Mismatch between the hardcoded chart field and the chain rule.

    For v > 0 the chart point is a finite point; pushing the plane field
    through the chart map and multiplying by the v**(d-1) time rescaling
    must reproduce the hardcoded system exactly.  Returns
    ||hardcoded - predicted|| / max(1, ||hardcoded||); correct systems
    give rounding-level values.
    """
    if v <= 0:
        raise ValidationError("pushforward comparison requires v > 0")
    x, y = chart_to_finite(chart, u, v)
    fx, fy = eval_field(p, (x, y))
    if chart in ("U1", "V1"):
        sgn = 1.0 if chart == "U1" else -1.0
        raw = np.array([sgn * v * (fy - u * fx), -sgn * v * v * fx])
    else:
        sgn = 1.0 if chart == "U2" else -1.0
        raw = np.array([sgn * v * (fx - u * fy), -sgn * v * v * fy])
    predicted = ipow(v, degree(p) - 1) * raw
    published = chart_field(p, chart, u, v)
    diff = float(np.hypot(*(published - predicted)))
    return diff / max(1.0, float(np.hypot(*published)))


def chart_infinity_points(p: Params, chart: str) -> list[tuple[float, str]]:
    """All v = 0 equilibria visible in one chart, as (u, global label).

    A chart can see a neighbor's point: e.g. for n=1, k=1 the U2 chart has
    equilibria at u = 0 (its own) and u = -1 (the saddle-node owned by the
    x-direction charts).
    """
    if chart not in CHARTS:
        raise ValidationError(f"unknown chart {chart!r}")
    k = p.k
    if p.n == 1:
        u_sn = -1.0 if k == 1 else 0.0
        table = {
            "U1": [(u_sn, "I1")],
            "V1": [(u_sn, "I2")],
            "U2": [(0.0, "I3")] + ([(-1.0, "I2")] if k == 1 else []),
            "V2": [(0.0, "I4")] + ([(-1.0, "I1")] if k == 1 else []),
        }
        return table[chart]
    if k == 1:
        table = {"U1": [], "V1": [], "U2": [(0.0, "I7")], "V2": [(0.0, "I8")]}
        return table[chart]
    u_node = -1.0 if k == 2 else 0.0
    table = {
        "U1": [(u_node, "I5")],
        "V1": [(u_node, "I6")],
        "U2": [(0.0, "I9")] + ([(-1.0, "I6")] if k == 2 else []),
        "V2": [(0.0, "I10")] + ([(-1.0, "I5")] if k == 2 else []),
    }
    return table[chart]


def infinite_equilibria(p: Params) -> list[Equilibrium]:
    """Inventory of infinite equilibria with their sector classification.

    n=1: saddle-nodes I1/I2 on the x-direction charts and a degenerate
    pair I3/I4 on the y-direction charts whose sectors depend on the
    parity of k.  n=2, k=1: only I7/I8, each with two elliptic and two
    parabolic sectors.  n=2, k>1: nodes I5/I6 plus the degenerate pair
    I9/I10 with the same parity rule as I3/I4.
    """
    odd = p.k % 2 == 1
    out: list[Equilibrium] = []
    if p.n == 1:
        u_sn = -1.0 if p.k == 1 else 0.0
        out.append(Equilibrium("I1", "U1", (u_sn, 0.0), SADDLE_NODE))
        out.append(Equilibrium("I2", "V1", (u_sn, 0.0), SADDLE_NODE))
        sectors = ("elliptic", "hyperbolic") if odd else ("parabolic",)
        suffix = "^0" if odd else "^e"
        out.append(Equilibrium("I3", "U2", (0.0, 0.0), DEGENERATE,
                               sectors=sectors, display="I3" + suffix))
        out.append(Equilibrium("I4", "V2", (0.0, 0.0), DEGENERATE,
                               sectors=sectors, display="I4" + suffix))
        return out
    if p.k == 1:
        sectors = ("elliptic", "parabolic", "elliptic", "parabolic")
        out.append(Equilibrium("I7", "U2", (0.0, 0.0), DEGENERATE, sectors=sectors))
        out.append(Equilibrium("I8", "V2", (0.0, 0.0), DEGENERATE, sectors=sectors))
        return out
    u_node = -1.0 if p.k == 2 else 0.0
    out.append(Equilibrium("I5", "U1", (u_node, 0.0), UNSTABLE_NODE,
                           stability="unstable"))
    # antipodal parity: same stability for even k, reversed for odd k > 1
    i6_kind = UNSTABLE_NODE if not odd else STABLE_NODE
    out.append(Equilibrium("I6", "V1", (u_node, 0.0), i6_kind,
                           stability="unstable" if not odd else "stable"))
    sectors = ("elliptic", "hyperbolic") if odd else ("parabolic",)
    suffix = "^0" if odd else "^e"
    out.append(Equilibrium("I9", "U2", (0.0, 0.0), DEGENERATE,
                           sectors=sectors, display="I9" + suffix))
    out.append(Equilibrium("I10", "V2", (0.0, 0.0), DEGENERATE,
                           sectors=sectors, display="I10" + suffix))
    return out


def boundary_direction(chart: str, u: float) -> np.ndarray:
    """Unit direction in the plane represented by (u, v=0) of a chart."""
    norm = math.hypot(1.0, u)
    if chart == "U1":
        return np.array([1.0, u]) / norm
    if chart == "V1":
        return np.array([-1.0, -u]) / norm
    if chart == "U2":
        return np.array([u, 1.0]) / norm
    if chart == "V2":
        return np.array([-u, -1.0]) / norm
    raise ValidationError(f"unknown chart {chart!r}")


def from_finite(pt) -> np.ndarray:
    """Disk rendering coordinates of a finite point: pt / (1 + |pt|).

    Continuous and injective, maps the plane onto the open unit disk; the
    boundary circle is the limit of directions at infinity.  This choice
    is fixed because rendered output depends on it.
    """
    pt = np.asarray(pt, dtype=float)
    rho = math.hypot(pt[0], pt[1])
    return pt / (1.0 + rho)


def to_disk(chart: str, u: float, v: float) -> np.ndarray:
    """Disk coordinates of a chart point; v = 0 lands on the unit circle."""
    if v < 0:
        raise ValidationError("chart points require v >= 0")
    if v == 0.0:
        return boundary_direction(chart, u)
    return from_finite(chart_to_finite(chart, u, v))
