"""Parameter space and the planar vector field everything else evaluates.

The system under study is the planar polynomial family

    x' = y
    y' = -c*y + x**k * y + x*(x**n - 1)

arising from the traveling-wave substitution in a reaction-advection-
diffusion equation (the reaction exponent is pinned to 1, ``n`` to 1 or 2).
This module owns the conventions: the :class:`Params` tuple, evaluation of
the field, its Jacobian and divergence, and the divergence-sign region used
to rule out closed orbits.
"""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical step that must succeed for valid inputs failed."""


def ipow(x, k: int):
    """x**k for integer k >= 0 by repeated squaring.

    Multiplication-only powers keep evaluations reproducible (no libm
    ``pow``) and work elementwise on arrays.
    """
    k = operator.index(k)
    if k < 0:
        raise ValidationError("ipow expects a non-negative integer exponent")
    out = None
    base = x
    while k:
        if k & 1:
            out = base if out is None else out * base
        k >>= 1
        if k:
            base = base * base
    if out is None:
        return x * 0 + 1.0
    return out


@dataclass(frozen=True)
class Params:
    """Parameter tuple (n, k, c); the reaction exponent m is frozen at 1.

    n selects the reaction nonlinearity (1 or 2), k the advection power
    (any positive integer), c > 0 the wave speed.
    """

    n: int
    k: int
    c: float
    m: int = 1

    def __post_init__(self):
        if self.m != 1:
            raise ValidationError("m is fixed at 1; other values are out of scope")
        if self.n not in (1, 2):
            raise ValidationError("n must be 1 or 2")
        try:
            k = operator.index(self.k)
        except TypeError:
            raise ValidationError("k must be an integer") from None
        if k < 1:
            raise ValidationError("k must be a positive integer")
        c = float(self.c)
        if not math.isfinite(c) or c <= 0:
            raise ValidationError("c must be a positive finite real")


def degree(p: Params) -> int:
    """Total polynomial degree of the field: max(k+1, n+1)."""
    return max(p.k + 1, p.n + 1)


def eval_field(p: Params, pt) -> np.ndarray:
    """Right-hand side (x', y') at pt = (x, y)."""
    x, y = pt
    return np.array([y, (ipow(x, p.k) - p.c) * y + x * (ipow(x, p.n) - 1.0)])


def jacobian(p: Params, pt) -> np.ndarray:
    """Jacobian matrix of the field at pt = (x, y)."""
    x, y = pt
    return np.array(
        [
            [0.0, 1.0],
            [(1 + p.n) * ipow(x, p.n) + p.k * ipow(x, p.k - 1) * y - 1.0,
             ipow(x, p.k) - p.c],
        ]
    )


def divergence(p: Params, pt) -> float:
    """Divergence of the field, x**k - c (independent of y)."""
    x, _ = pt
    return float(ipow(x, p.k) - p.c)


@dataclass(frozen=True)
class Region:
    """Open vertical strip on which the divergence keeps a strict sign."""

    tag: str  # "B1" (k odd) or "B2" (k even)
    x_min: float
    x_max: float

    def contains(self, pt) -> bool:
        x = float(pt[0])
        return self.x_min < x < self.x_max


def bendixson_region(p: Params) -> Region:
    """Strip where the divergence is strictly negative.

    For odd k that is {x < c**(1/k)}; for even k the symmetric strip
    {|x| < c**(1/k)}.  Points on the boundary are excluded: the divergence
    vanishes there and the closed-orbit exclusion needs a strict sign.
    """
    bound = p.c ** (1.0 / p.k)
    if p.k % 2 == 1:
        return Region("B1", -math.inf, bound)
    return Region("B2", -bound, bound)


def in_bendixson_region(p: Params, pt) -> tuple[bool, str]:
    """Membership of pt in the divergence-negative strip, plus its tag."""
    region = bendixson_region(p)
    return region.contains(pt), region.tag
