"""Phase portraits, compactified dynamics and traveling waves for the
planar family x' = y, y' = -c*y + x**k*y + x*(x**n - 1)."""

from .core import (
    NumericalError,
    Params,
    Region,
    ValidationError,
    bendixson_region,
    divergence,
    eval_field,
    in_bendixson_region,
    jacobian,
)
from .equilibria import EigenData, Equilibrium, classify, eigen_data, finite_equilibria
from .compact import (
    chart_field,
    chart_to_finite,
    finite_to_chart,
    from_finite,
    infinite_equilibria,
    pushforward_residual,
    to_disk,
)
from .blowup import (
    CircleEquilibrium,
    blowup_case,
    blowup_field,
    circle_equilibria,
    circle_jacobian,
    sector_structure,
)
from .flow import IntegratorControls, Trajectory, cycle_search, integrate, limit_set
from .portrait import classify_portrait, export_portrait, seed_manifold, trace_separatrices
from .wave import WaveProfile, shoot_heteroclinic, verify_asymptotics, wave_residual
from .pde import PdeConfig, PdeState, front_position, speed_estimate, step

__version__ = "0.1.0"

__all__ = [
    "Params", "Region", "ValidationError", "NumericalError",
    "eval_field", "jacobian", "divergence", "bendixson_region",
    "in_bendixson_region",
    "Equilibrium", "EigenData", "finite_equilibria", "eigen_data", "classify",
    "chart_field", "chart_to_finite", "finite_to_chart", "from_finite",
    "to_disk", "pushforward_residual", "infinite_equilibria",
    "CircleEquilibrium", "blowup_case", "blowup_field", "circle_equilibria",
    "circle_jacobian", "sector_structure",
    "IntegratorControls", "Trajectory", "integrate", "limit_set", "cycle_search",
    "seed_manifold", "trace_separatrices", "classify_portrait", "export_portrait",
    "WaveProfile", "shoot_heteroclinic", "wave_residual", "verify_asymptotics",
    "PdeConfig", "PdeState", "step", "front_position", "speed_estimate",
    "__version__",
]
