"""Finite equilibria: enumeration, closed-form eigen-structure, classification.

The field vanishes at (0,0) and (1,0) always, and additionally at (-1,0)
when n is even.  All three are hyperbolic for every admissible parameter
choice, so classification reduces to the closed-form eigenvalues of the
2x2 Jacobians.  The closed forms are authoritative here; a generic
numerical eigensolver is used only as a test oracle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import Params, ValidationError, eval_field

EQUILIBRIUM_ATOL = 1e-12

STABLE_FOCUS = "stable-focus"
STABLE_NODE = "stable-node"
UNSTABLE_NODE = "unstable-node"
SADDLE = "saddle"
SADDLE_NODE = "saddle-node"
DEGENERATE = "degenerate"

# classification band around the focus/node boundary: |c - 2| below this
# resolves to the node branch
NODE_BAND = 1e-12


@dataclass
class Equilibrium:
    """An equilibrium with its chart tag and topological type.

    ``chart`` is "finite" for plane equilibria, or one of U1/V1/U2/V2 for
    points on the circle at infinity (``location`` is then (u, 0) in that
    chart).  ``sectors`` lists the local sector decomposition for the
    degenerate infinite points; ``display`` carries the parity-decorated
    name used in reports.
    """

    label: str
    chart: str
    location: np.ndarray
    kind: str
    sectors: tuple[str, ...] = ()
    stability: str | None = None
    display: str = ""

    def __post_init__(self):
        self.location = np.asarray(self.location, dtype=float)
        if not self.display:
            self.display = self.label


@dataclass(frozen=True)
class EigenData:
    """Eigenvalue pair and, when the pair is real, the eigenvectors.

    Eigenvectors use the (component, 1) normalization so their slopes are
    immediate; in the complex (focus) case ``vectors`` is None since
    nothing downstream consumes complex directions.
    """

    values: tuple[complex, complex]
    vectors: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def is_real(self) -> bool:
        return self.vectors is not None


def finite_equilibria(p: Params) -> list[Equilibrium]:
    """All finite equilibria: E0, E1, and E2 when n is even."""
    eqs = [
        Equilibrium("E0", "finite", (0.0, 0.0), classify_label(p, "E0")),
        Equilibrium("E1", "finite", (1.0, 0.0), classify_label(p, "E1")),
    ]
    if p.n % 2 == 0:
        eqs.append(Equilibrium("E2", "finite", (-1.0, 0.0), classify_label(p, "E2")))
    return eqs


def _require_finite_equilibrium(p: Params, e: Equilibrium) -> str:
    known = {eq.label for eq in finite_equilibria(p)}
    if e.chart != "finite" or e.label not in known:
        raise ValidationError(f"{e.label} is not a finite equilibrium for n={p.n}")
    residual = np.abs(eval_field(p, e.location)).max()
    if residual > 1e-10:
        raise ValidationError(
            f"point {tuple(e.location)} does not zero the field (|F|={residual:.3e})"
        )
    return e.label


def eigen_data(p: Params, e: Equilibrium) -> EigenData:
    """Closed-form eigenvalues/eigenvectors of the Jacobian at e.

    At (0,0) the pair is (-c -+ sqrt(c^2-4))/2, complex for c < 2.  At
    (+-1,0) the trace is x0^k - c and the determinant -n, so both points
    are saddles with real pairs for every parameter choice.
    """
    label = _require_finite_equilibrium(p, e)
    c = float(p.c)
    if label == "E0":
        disc = c * c - 4.0
        if disc < 0:
            root = cmath.sqrt(complex(disc))
            return EigenData(((-c - root) / 2.0, (-c + root) / 2.0), None)
        root = math.sqrt(disc)
        lam = ((-c - root) / 2.0, (-c + root) / 2.0)
        vectors = (
            np.array([(-c + root) / 2.0, 1.0]),
            np.array([(-c - root) / 2.0, 1.0]),
        )
        return EigenData((complex(lam[0]), complex(lam[1])), vectors)
    # E1 and E2 share the structure: trace t = x0^k - c, determinant -n.
    t = (1.0 if label == "E1" else (-1.0) ** p.k) - c
    root = math.sqrt(t * t + 4.0 * p.n)
    mu = ((t - root) / 2.0, (t + root) / 2.0)
    vectors = (
        np.array([(t - root) / (2.0 * p.n), 1.0]),
        np.array([(t + root) / (2.0 * p.n), 1.0]),
    )
    return EigenData((complex(mu[0]), complex(mu[1])), vectors)


def classify_label(p: Params, label: str) -> str:
    if label == "E0":
        return STABLE_NODE if p.c >= 2.0 - NODE_BAND else STABLE_FOCUS
    return SADDLE


def classify(p: Params, e: Equilibrium) -> str:
    """Topological type: E0 is a stable focus (c<2) or node (c>=2), E1/E2 saddles."""
    return classify_label(p, _require_finite_equilibrium(p, e))
