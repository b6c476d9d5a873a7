"""Polar blow-ups of the degenerate equilibria on the y-direction charts.

The degenerate infinite points sit at the origin of the U2-type charts and
are inflated onto a circle r = 0 by a weighted polar substitution:
(u, v) = (r**k cos t, r**(k+1) sin t) for the generic cases, (r cos t,
r**2 sin t) for n=2, k=1.  After cancelling a positive common factor the
blown-up systems are polynomial in (r, cos t, sin t) and are hardcoded
here; :func:`blowdown_residual` checks them against the chart fields.

Circle equilibria solve a trigonometric equation per case; two of them are
closed-form angles, the rest are found by bracketed bisection.  Their
Jacobians are evaluated by central finite differences of the hardcoded
field (safer than transcribing the general matrix entries), and their
saddle/node pattern determines the sector structure of the blown-down
points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NumericalError, Params, ValidationError, ipow
from .compact import chart_field

CASE_N1 = "n1-weighted"      # n = 1, k > 1, weights (k, k+1)
CASE_N2_K1 = "n2-quadratic"  # n = 2, k = 1, weights (1, 2)
CASE_N2 = "n2-weighted"      # n = 2, k > 1, weights (k, k+1)

_BRACKET_NUDGE = 1e-9
_BISECT_TOL = 1e-14


def blowup_case(p: Params) -> str:
    """Blow-up case selected by (n, k); n=1, k=1 is nilpotent, not blown up."""
    if p.n == 1:
        if p.k == 1:
            raise ValidationError("n=1, k=1 has no blow-up case (nilpotent point)")
        return CASE_N1
    return CASE_N2_K1 if p.k == 1 else CASE_N2


def weights(case: str, k: int) -> tuple[int, int]:
    return (1, 2) if case == CASE_N2_K1 else (k, k + 1)


def _check_case(p: Params, case: str) -> str:
    expected = blowup_case(p)
    if case != expected:
        raise ValidationError(f"case {case!r} does not match (n={p.n}, k={p.k})")
    return case


def blowup_field(p: Params, case: str, r: float, theta: float) -> np.ndarray:
    """Blown-up field (dr, dtheta) after removing the common factor."""
    _check_case(p, case)
    c, k = p.c, p.k
    ct, st = math.cos(theta), math.sin(theta)
    if case == CASE_N2_K1:
        dr = (r / 4.0) * (
            2.0 * c * r
            + (-2.0 + r * r) * ct
            - 2.0 * c * r * math.cos(2.0 * theta)
            - (2.0 + r * r) * math.cos(3.0 * theta)
            - 2.0 * math.sin(2.0 * theta)
        )
        dth = (
            st * (ipow(ct, 4) + ct * ct * st - 2.0 * st * st)
            - r * ct * (c + r * ct) * ipow(st, 3)
        )
        return np.array([dr, dth])
    if case == CASE_N1:
        dr = (
            r * (ct * ipow(st, k) - ipow(ct, k))
            - ipow(r, 2 * k) * ct * ct * ipow(st, k - 1)
            + c * ipow(r, k + 1) * ipow(st, k)
            + ipow(r, 2 * k + 1) * ct * ipow(st, k)
        )
        dth = (
            st * (ipow(ct, k + 1) - (1 + k) * ipow(st, k))
            + ipow(r, 2 * k - 1) * ipow(ct, 3) * ipow(st, k)
            - c * ipow(r, k) * ct * ipow(st, k + 1)
            - ipow(r, 2 * k) * ct * ct * ipow(st, k + 1)
        )
        return np.array([dr, dth])
    # CASE_N2: same weights as CASE_N1, extra advection-free reaction terms
    dr = (
        r * (ct * ipow(st, k) - ipow(ct, k))
        + ipow(r, 2 * k - 1) * (ct * ipow(st, k) - ct * ipow(st, k - 2))
        + c * ipow(r, k + 1) * ipow(st, k)
        + ipow(r, 2 * k + 1) * ct * ipow(st, k)
    )
    dth = (
        st * (ipow(ct, k + 1) - (1 + k) * ipow(st, k))
        + ipow(r, 2 * k - 2) * (ct * ct * ipow(st, k - 1) - ct * ct * ipow(st, k + 1))
        - ipow(r, k) * (c * ct * ipow(st, k + 1) + ipow(r, k) * ct * ct * ipow(st, k + 1))
    )
    return np.array([dr, dth])


def circle_equation(p: Params, case: str, theta: float) -> float:
    """Value of the circle equation whose roots are the r=0 equilibria."""
    _check_case(p, case)
    ct, st = math.cos(theta), math.sin(theta)
    if case == CASE_N2_K1:
        return st * (ipow(ct, 4) + ct * ct * st - 2.0 * st * st)
    k = p.k
    return st * (ipow(ct, k + 1) - (1 + k) * ipow(st, k))


@dataclass
class CircleEquilibrium:
    """Equilibrium on the blow-up circle r = 0.

    ``radial_sign``/``angular_sign`` are the signs of the diagonal of the
    Jacobian there (it is lower triangular, so these are the eigenvalue
    signs); a saddle is exactly a mixed-sign pair.
    """

    theta: float
    label: str
    radial_sign: int
    angular_sign: int
    kind: str  # "saddle" or "node-or-focus"


def _bisect(g, lo: float, hi: float) -> float:
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0:
        raise NumericalError(f"no sign change on bracket [{lo}, {hi}]")
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if glo * gm < 0:
            hi = mid
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)


def circle_equilibria(p: Params, case: str) -> list[CircleEquilibrium]:
    """All roots of the circle equation in [0, 2*pi), with classification.

    The weighted cases have four: 0 and pi from the sin factor, one root
    in (0, pi/2), and one in (pi/2, pi) for odd k or (3*pi/2, 2*pi) for
    even k.  The n=2, k=1 case has six roots, all closed-form.
    """
    _check_case(p, case)
    if case == CASE_N2_K1:
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        a1 = math.asin(golden)
        a4 = math.asin(1.0 - math.sqrt(2.0))  # negative angle
        angles = [
            (0.0, "theta0"),
            (a1, "theta1"),
            (math.pi - a1, "theta2"),
            (math.pi, "theta3"),
            (math.pi - a4, "theta4"),
            (2.0 * math.pi + a4, "theta5"),
        ]
    else:
        k = p.k

        def g(theta: float) -> float:
            return ipow(math.cos(theta), k + 1) - (1 + k) * ipow(math.sin(theta), k)

        t1 = _bisect(g, _BRACKET_NUDGE, math.pi / 2.0 - _BRACKET_NUDGE)
        if k % 2 == 1:
            t3 = _bisect(g, math.pi / 2.0 + _BRACKET_NUDGE, math.pi - _BRACKET_NUDGE)
        else:
            t3 = _bisect(g, 1.5 * math.pi + _BRACKET_NUDGE,
                         2.0 * math.pi - _BRACKET_NUDGE)
        angles = [(0.0, "theta0"), (t1, "theta1"), (math.pi, "theta2"), (t3, "theta3")]
    out = []
    for theta, label in angles:
        jac = _circle_jacobian_matrix(p, case, theta)
        rs = int(math.copysign(1.0, jac[0, 0]))
        As = int(math.copysign(1.0, jac[1, 1]))
        kind = "saddle" if rs * As < 0 else "node-or-focus"
        out.append(CircleEquilibrium(theta, label, rs, As, kind))
    out.sort(key=lambda ce: ce.theta)
    return out


def _circle_jacobian_matrix(p: Params, case: str, theta: float,
                            h: float = 1e-6) -> np.ndarray:
    # the field is polynomial in r, so central differences across r = 0 are fine
    fr_p = blowup_field(p, case, h, theta)
    fr_m = blowup_field(p, case, -h, theta)
    ft_p = blowup_field(p, case, 0.0, theta + h)
    ft_m = blowup_field(p, case, 0.0, theta - h)
    return np.column_stack([(fr_p - fr_m) / (2 * h), (ft_p - ft_m) / (2 * h)])


def circle_jacobian(p: Params, case: str, ce: CircleEquilibrium) -> tuple[np.ndarray, str]:
    """Finite-difference Jacobian at (0, theta) and its saddle/node tag."""
    _check_case(p, case)
    if abs(circle_equation(p, case, ce.theta)) > 1e-9:
        raise ValidationError("theta is not a circle equilibrium")
    jac = _circle_jacobian_matrix(p, case, ce.theta)
    kind = "saddle" if jac[0, 0] * jac[1, 1] < 0 else "node-or-focus"
    return jac, kind


def blowdown_residual(p: Params, case: str, r: float, theta: float) -> float:
    """Consistency of the hardcoded blow-up system with the chart field.

    Pushes the U2-chart field through the polar substitution and rescales
    by the cancelled factor; the result must match :func:`blowup_field`.
    Returns a relative mismatch, rounding-level when the transcriptions
    agree.  Requires r > 0 (the substitution is singular on the circle).
    """
    _check_case(p, case)
    if r <= 0:
        raise ValidationError("blow-down comparison requires r > 0")
    a, b = weights(case, p.k)
    ct, st = math.cos(theta), math.sin(theta)
    u = ipow(r, a) * ct
    v = ipow(r, b) * st
    du, dv = chart_field(p, "U2", u, v)
    det = ipow(r, a + b - 1) * (a * ct * ct + b * st * st)
    raw_r = (ipow(r, b) * ct * du + ipow(r, a) * st * dv) / det
    raw_t = (-b * ipow(r, b - 1) * st * du + a * ipow(r, a - 1) * ct * dv) / det
    if case == CASE_N2_K1:
        factor = (1.0 + st * st) / ipow(r, 3)
    else:
        factor = (p.k * ct * ct + (p.k + 1) * st * st) / ipow(r, p.k * p.k)
    predicted = factor * np.array([raw_r, raw_t])
    published = blowup_field(p, case, r, theta)
    diff = float(np.hypot(*(published - predicted)))
    return diff / max(1.0, float(np.hypot(*published)))


def sector_structure(p: Params) -> dict[str, tuple[str, ...]]:
    """Sector inventory of the infinite points, keyed by label.

    Deterministic lookup on (n, parity of k): the blow-up circle for the
    weighted cases always carries exactly two saddles, and their
    arrangement gives one elliptic plus one hyperbolic sector for odd k or
    a single parabolic sector for even k; the n=2, k=1 point combines two
    elliptic and two parabolic sectors.
    """
    odd = p.k % 2 == 1
    if p.n == 1:
        sectors = ("elliptic", "hyperbolic") if odd else ("parabolic",)
        return {
            "I1": ("saddle-node",),
            "I2": ("saddle-node",),
            "I3": sectors,
            "I4": sectors,
        }
    if p.k == 1:
        quad = ("elliptic", "parabolic", "elliptic", "parabolic")
        return {"I7": quad, "I8": quad}
    sectors = ("elliptic", "hyperbolic") if odd else ("parabolic",)
    return {
        "I5": ("unstable-node",),
        "I6": ("unstable-node",) if not odd else ("stable-node",),
        "I9": sectors,
        "I10": sectors,
    }
