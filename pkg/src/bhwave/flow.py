"""Adaptive integration of the plane flow with event-driven termination.

Trajectories run on an embedded Runge-Kutta 5(4) pair (scipy's RK45) with
three kinds of terminal events: capture inside a small ball around a known
finite equilibrium (the event fires on inward crossings only), escape past
a large radius, and the time budget.  Limit sets of escaped trajectories
are identified by following the orbit further out until the escape is
confirmed well beyond the swing-by scale, then handing off to the chart at
infinity that covers the exit direction and integrating the chart field
until a v = 0 equilibrium captures it.  Orbits that swing near infinity
and come back are re-entered into the plane integration instead, so
passes through hyperbolic sectors are never misread as convergence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from .core import NumericalError, Params, ValidationError, eval_field, ipow, jacobian
from .compact import (
    chart_field,
    chart_infinity_points,
    chart_to_finite,
    finite_to_chart,
    infinite_equilibria,
)
from .equilibria import finite_equilibria

FORWARD = "forward"
BACKWARD = "backward"

CAPTURED = "captured"
ESCAPED = "escaped"
MAX_TIME = "max-time"
STEP_FAILURE = "step-failure"

INCONCLUSIVE = "inconclusive"


@dataclass
class IntegratorControls:
    """Tolerances and thresholds for integration and limit-set tracing."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.1
    capture_radius: float = 1e-8
    escape_radius: float = 1e6
    max_s: float = 1e4
    # limit-set tracing knobs
    handoff_radius: float = 1e3       # leave the finite frame beyond this radius
    reentry_factor: float = 2.0       # hysteresis: re-enter below handoff/factor
    chart_capture_radius: float = 0.05
    chart_u_escape: float = 2.5       # switch charts when |u| exceeds this
    chart_max_s: float = 1e4          # budget in rescaled chart time
    confirm_radius: float = 1e12      # escape is definitive beyond this radius
    confirm_max_s: float = 200.0
    max_handoffs: int = 64
    trace_leg_max_s: float = 400.0    # per-leg budget while tracing manifolds
    crawl_radius: float = 30.0        # beyond this, a timed-out leg is an escape
    connection_seed_v: float = 1e-3   # chart v for separatrix-connection shots
    connection_ball: float = 1e-3     # hit radius for the connection audit
    connection_max_s: float = 400.0

    def validate(self) -> None:
        for name in ("rel_tol", "abs_tol", "max_step", "capture_radius",
                     "escape_radius", "max_s", "handoff_radius",
                     "chart_capture_radius", "chart_u_escape", "chart_max_s",
                     "confirm_radius", "confirm_max_s"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.reentry_factor <= 1:
            raise ValidationError("reentry_factor must exceed 1")
        if self.max_handoffs < 1:
            raise ValidationError("max_handoffs must be at least 1")


@dataclass
class ExitRecord:
    """Where and how a trajectory left the finite frame."""

    chart: str
    u: float
    v: float
    point: np.ndarray
    s: float


@dataclass
class Termination:
    kind: str                    # captured | escaped | max-time | step-failure
    label: str | None = None     # equilibrium label for captures
    exit: ExitRecord | None = None
    detail: str = ""


@dataclass
class Trajectory:
    """Sampled orbit with its termination cause.

    ``s`` is strictly increasing for forward runs and strictly decreasing
    for backward runs; consecutive samples are at most ``max_step`` apart
    and each step satisfied the integrator's local error control.
    """

    s: np.ndarray
    points: np.ndarray          # shape (m, 2)
    direction: str
    termination: Termination

    @property
    def end_point(self) -> np.ndarray:
        return self.points[-1]

    @property
    def end_s(self) -> float:
        return float(self.s[-1])


def _direction_sign(direction: str) -> float:
    if direction == FORWARD:
        return 1.0
    if direction == BACKWARD:
        return -1.0
    raise ValidationError(f"direction must be {FORWARD!r} or {BACKWARD!r}")


def _capture_events(p: Params, ctl: IntegratorControls):
    events = []
    labels = []
    for eq in finite_equilibria(p):
        loc = eq.location

        def dist(t, y, loc=loc):
            return math.hypot(y[0] - loc[0], y[1] - loc[1]) - ctl.capture_radius

        dist.terminal = True
        dist.direction = -1.0   # fires only on inward crossings
        events.append(dist)
        labels.append(eq.label)
    return events, labels


def integrate(p: Params, start, direction: str = FORWARD,
              ctl: IntegratorControls | None = None, s0: float = 0.0) -> Trajectory:
    """Integrate the plane field from ``start`` until an event stops it.

    Termination is ``captured`` when the orbit enters the capture ball of
    a finite equilibrium moving inward, ``escaped`` past ``escape_radius``
    (with a record of the chart covering the exit direction), ``max-time``
    at the s budget, and ``step-failure`` if the stepper gives up (reported
    as a termination, not an exception).
    """
    ctl = ctl or IntegratorControls()
    ctl.validate()
    sgn = _direction_sign(direction)
    start = np.asarray(start, dtype=float)
    if start.shape != (2,) or not np.all(np.isfinite(start)):
        raise ValidationError("start must be a finite point (x, y)")

    cap_events, cap_labels = _capture_events(p, ctl)
    for i, ev in enumerate(cap_events):
        if ev(0.0, start) < 0:
            term = Termination(CAPTURED, label=cap_labels[i])
            return Trajectory(np.array([s0]), start[None, :], direction, term)
    rho0 = math.hypot(*start)
    if rho0 >= ctl.escape_radius:
        term = Termination(ESCAPED, exit=_exit_record(start, s0))
        return Trajectory(np.array([s0]), start[None, :], direction, term)

    def escape(t, y):
        return math.hypot(y[0], y[1]) - ctl.escape_radius

    escape.terminal = True
    escape.direction = 1.0
    events = cap_events + [escape]

    def rhs(t, y):
        return sgn * eval_field(p, y)

    sol = solve_ivp(rhs, (0.0, ctl.max_s), start, method="RK45",
                    rtol=ctl.rel_tol, atol=ctl.abs_tol, max_step=ctl.max_step,
                    events=events, dense_output=False)

    ts = sol.t
    ys = sol.y.T
    if sol.status == -1:
        term = Termination(STEP_FAILURE, detail=sol.message)
    elif sol.status == 1:
        hit = [i for i, te in enumerate(sol.t_events) if te.size > 0]
        idx = hit[0]
        t_ev = sol.t_events[idx][0]
        y_ev = sol.y_events[idx][0]
        if ts[-1] < t_ev:
            ts = np.append(ts, t_ev)
            ys = np.vstack([ys, y_ev])
        else:
            ys[-1] = y_ev
        if idx < len(cap_labels):
            term = Termination(CAPTURED, label=cap_labels[idx])
        else:
            term = Termination(ESCAPED, exit=_exit_record(y_ev, s0 + sgn * t_ev))
    else:
        term = Termination(MAX_TIME)
    return Trajectory(s0 + sgn * ts, ys, direction, term)


def _exit_record(point, s: float) -> ExitRecord:
    chart, u, v = finite_to_chart(point)
    return ExitRecord(chart, u, v, np.asarray(point, dtype=float), s)


def _confirm_escape(p: Params, start, sgn: float, ctl: IntegratorControls):
    """Push an escaping orbit far enough out that the escape is definitive.

    Swing-bys through hyperbolic sectors at infinity turn back within a
    few decades of the handoff radius, so reaching ``confirm_radius``
    (capped so field evaluations stay inside double range for large k)
    settles the question.  Far from the origin the flow is stiff in the
    transverse direction, so this leg runs on LSODA with the analytic
    Jacobian rather than the explicit pair.

    Returns ("confirmed", point), ("returned", point) below the re-entry
    radius, or ("stalled", point) when neither happened in the budget.
    Stalls are meaningful: approaches to the semi-hyperbolic points whose
    center direction lies at u = 0 creep only algebraically in physical
    time, so those orbits sit at large radius without crossing either
    threshold and are identified in chart time instead.
    """
    rho_confirm = min(ctl.confirm_radius, 10.0 ** (250.0 / (p.k + 2)))
    rho_return = ctl.handoff_radius / ctl.reentry_factor

    def confirmed(t, y):
        return math.hypot(y[0], y[1]) - rho_confirm

    confirmed.terminal = True
    confirmed.direction = 1.0

    def returned(t, y):
        return math.hypot(y[0], y[1]) - rho_return

    returned.terminal = True
    returned.direction = -1.0

    def rhs(t, y):
        return sgn * eval_field(p, y)

    def jac(t, y):
        return sgn * jacobian(p, y)

    sol = solve_ivp(rhs, (0.0, ctl.confirm_max_s), np.asarray(start, dtype=float),
                    method="LSODA", jac=jac, rtol=ctl.rel_tol, atol=ctl.abs_tol,
                    events=[confirmed, returned], dense_output=False)
    if sol.status == 1:
        if sol.t_events[0].size > 0:
            return "confirmed", sol.y_events[0][0]
        return "returned", sol.y_events[1][0]
    return "stalled", sol.y[:, -1]


def _switch_chart(chart: str, u: float, v: float) -> tuple[str, float, float]:
    """Move a chart point with large |u| to the transverse chart family."""
    x, y = chart_to_finite(chart, u, v)
    new_chart, nu, nv = finite_to_chart((x, y))
    return new_chart, nu, nv


def _identify_at_infinity(p: Params, point, sgn: float, ctl: IntegratorControls) -> str:
    """Name the infinite equilibrium a confirmed-escaping orbit tends to.

    Converts to the chart covering the exit direction and integrates the
    (rescaled, direction-preserving) chart field until a v = 0 equilibrium
    ball captures the orbit, switching charts if u runs off the patch.
    """
    chart, u, v = finite_to_chart(point)
    for _ in range(8):
        candidates = chart_infinity_points(p, chart)
        if candidates:
            dists = [math.hypot(u - uc, v) for uc, _ in candidates]
            i = int(np.argmin(dists))
            if dists[i] < ctl.chart_capture_radius:
                return candidates[i][1]

        events = []
        for uc, _ in candidates:
            def enter(t, w, uc=uc):
                return math.hypot(w[0] - uc, w[1]) - ctl.chart_capture_radius

            enter.terminal = True
            enter.direction = -1.0
            events.append(enter)

        def overflow(t, w):
            return abs(w[0]) - ctl.chart_u_escape

        overflow.terminal = True
        overflow.direction = 1.0
        events.append(overflow)

        def rhs(t, w):
            return sgn * chart_field(p, chart, w[0], w[1])

        sol = solve_ivp(rhs, (0.0, ctl.chart_max_s), [u, v], method="RK45",
                        rtol=ctl.rel_tol, atol=ctl.abs_tol, events=events)
        if sol.status == 1:
            hit = [i for i, te in enumerate(sol.t_events) if te.size > 0][0]
            if hit < len(candidates):
                return candidates[hit][1]
            u, v = sol.y_events[hit][0]
            chart, u, v = _switch_chart(chart, u, v)
            continue
        u, v = sol.y[:, -1]
        if candidates:
            dists = [math.hypot(u - uc, v) for uc, _ in candidates]
            i = int(np.argmin(dists))
            if dists[i] < 2 * ctl.chart_capture_radius:
                return candidates[i][1]
        return INCONCLUSIVE
    return INCONCLUSIVE


def _continue_from(p: Params, state, direction: str, ctl: IntegratorControls) -> str:
    """Resolve the limit of an orbit that has left (or stalled leaving) the
    finite frame, alternating outward confirmation, chart identification
    and re-entered plane legs until something decides."""
    sgn = _direction_sign(direction)
    for _ in range(ctl.max_handoffs):
        outcome, state = _confirm_escape(p, state, sgn, ctl)
        if outcome == "confirmed":
            return _identify_at_infinity(p, state, sgn, ctl)
        if outcome == "stalled":
            # algebraic creep toward infinity: decide in rescaled chart time
            if math.hypot(state[0], state[1]) < ctl.handoff_radius / ctl.reentry_factor:
                return INCONCLUSIVE
            return _identify_at_infinity(p, state, sgn, ctl)
        leg = integrate(p, state, direction, ctl)
        if leg.termination.kind == CAPTURED:
            return leg.termination.label
        if leg.termination.kind == MAX_TIME and \
                math.hypot(*leg.end_point) > ctl.crawl_radius:
            state = leg.end_point
            continue
        if leg.termination.kind != ESCAPED:
            return INCONCLUSIVE
        state = leg.end_point
    return INCONCLUSIVE


def limit_set(p: Params, traj: Trajectory, ctl: IntegratorControls | None = None) -> str:
    """Limit-set tag of a captured or escaped trajectory.

    Captured trajectories resolve to their equilibrium label.  Escaped
    ones are continued: outward legs are confirmed far beyond the
    swing-by scale and identified in a chart at infinity; legs that swing
    back re-enter plane integration with capture events active.  When the
    trajectory starts beside a finite saddle, a connection audit shoots
    the entering separatrices of the saddle-nodes at infinity at the
    saddle; a hit on the matching side overrides the traced label, since
    riding such a connection backward is exponentially ill-conditioned
    while shooting it forward is stable.  Returns "inconclusive" on
    max-time input or exhausted budgets.
    """
    ctl = ctl or IntegratorControls()
    ctl.validate()
    term = traj.termination
    if term.kind == CAPTURED:
        return term.label
    if term.kind != ESCAPED:
        return INCONCLUSIVE
    audit = _saddle_connection_audit(p, traj, ctl)
    if audit is not None:
        return audit
    return _continue_from(p, traj.end_point, traj.direction, ctl)


def trace_to_limit(p: Params, start, direction: str,
                   ctl: IntegratorControls | None = None) -> tuple[Trajectory, str]:
    """Integrate from ``start`` and resolve the trajectory's limit set.

    Tracing leaves the finite frame at the handoff radius (not the plain
    escape radius): beyond it the transverse stiffness makes the explicit
    pair crawl, and the confirm/chart machinery owns the far field.  A
    plane leg that exhausts its budget far from the finite structures is
    treated as an outward creep and continued the same way.
    """
    ctl = ctl or IntegratorControls()
    trace_ctl = replace(ctl,
                        escape_radius=min(ctl.escape_radius, ctl.handoff_radius),
                        max_s=min(ctl.max_s, ctl.trace_leg_max_s))
    traj = integrate(p, start, direction, trace_ctl)
    term = traj.termination
    if term.kind == MAX_TIME and math.hypot(*traj.end_point) > trace_ctl.crawl_radius:
        audit = _saddle_connection_audit(p, traj, trace_ctl)
        if audit is not None:
            return traj, audit
        return traj, _continue_from(p, traj.end_point, traj.direction, trace_ctl)
    return traj, limit_set(p, traj, trace_ctl)


def _saddle_connection_audit(p: Params, traj: Trajectory,
                             ctl: IntegratorControls) -> str | None:
    """Detect a separatrix connection between a finite saddle and a
    saddle-node at infinity by shooting from the saddle-node.

    Only meaningful when the input trajectory emanates from a saddle
    (manifold tracing); for each saddle-node on the circle at infinity,
    the single orbit leaving it through the disk is followed toward the
    saddle, and a pass within ``connection_ball`` on the side the
    trajectory was seeded at identifies the connection.
    """
    start = traj.points[0]
    saddle = None
    for eq in finite_equilibria(p):
        if eq.kind != "saddle":
            continue
        if math.hypot(start[0] - eq.location[0], start[1] - eq.location[1]) < 1e-4:
            saddle = eq
            break
    if saddle is None:
        return None
    nodes = [e for e in infinite_equilibria(p) if e.kind == "saddle-node"]
    if not nodes:
        return None
    # trajectory traced backward = alpha limit wanted = shoot candidates forward
    shoot_sgn = -_direction_sign(traj.direction)
    seed_offset = start - saddle.location
    for cand in nodes:
        hit = _shoot_separatrix_at(p, cand, shoot_sgn, saddle.location, ctl)
        if hit is None:
            continue
        if float(np.dot(hit - saddle.location, seed_offset)) > 0:
            return cand.label
    return None


def _shoot_separatrix_at(p: Params, eq, sgn: float, target,
                         ctl: IntegratorControls):
    """Follow the orbit entering the disk from a saddle-node at infinity;
    return its closest-approach point to ``target`` if it comes within the
    connection ball, else None."""
    u0 = float(eq.location[0])
    v0 = ctl.connection_seed_v
    # seed on the center-manifold approximation (u' = 0 at v = v0)
    if u0 == 0.0:
        u_seed = -(ipow(v0, p.k - 1) - ipow(v0, p.k))
    else:
        u_seed = u0
    try:
        pt = chart_to_finite(eq.chart, u_seed, v0)
    except ValidationError:
        return None

    def rhs(t, y):
        return sgn * eval_field(p, y)

    def jac(t, y):
        return sgn * jacobian(p, y)

    def near_target(t, y):
        return math.hypot(y[0] - target[0], y[1] - target[1]) - ctl.connection_ball

    near_target.terminal = True
    near_target.direction = -1.0

    others = []
    for other in finite_equilibria(p):
        if np.allclose(other.location, target):
            continue
        loc = other.location

        def stop(t, y, loc=loc):
            return math.hypot(y[0] - loc[0], y[1] - loc[1]) - 1e-6

        stop.terminal = True
        stop.direction = -1.0
        others.append(stop)

    def gone(t, y):
        return math.hypot(y[0], y[1]) - 10.0 * ctl.handoff_radius

    gone.terminal = True
    gone.direction = 1.0

    sol = solve_ivp(rhs, (0.0, ctl.connection_max_s), pt, method="LSODA", jac=jac,
                    rtol=1e-12, atol=1e-14, events=[near_target, gone] + others)
    if sol.status == 1 and sol.t_events[0].size > 0:
        return sol.y_events[0][0]
    return None


@dataclass
class CycleSearchResult:
    """Outcome of a return-map cycle hunt on the section y = 0, 0 < x < 1."""

    witness: dict | None
    seeds_tested: int
    crossings_seen: int
    best_gap: float = math.inf

    @property
    def found(self) -> bool:
        return self.witness is not None


def cycle_search(p: Params, window=((0.05, 0.95), (-0.6, 0.6)),
                 grid: tuple[int, int] = (20, 20),
                 ctl: IntegratorControls | None = None,
                 witness_tol: float = 1e-8, min_x: float = 1e-2) -> CycleSearchResult:
    """Grid-seeded hunt for a periodic orbit via Poincare returns.

    A closed orbit must enclose the origin equilibrium alone, so it crosses
    the section y = 0, x in (0, 1) moving downward; successive downward
    crossings of every seeded orbit are compared and a near-return at
    distance below ``witness_tol`` (away from the origin, where spiral
    convergence shrinks returns trivially) is reported as a cycle witness.
    Exhaustion of the grid without a witness is the negative result.
    """
    if ctl is None:
        ctl = replace(IntegratorControls(), rel_tol=1e-9, abs_tol=1e-11,
                      max_step=np.inf, max_s=400.0)
    ctl.validate()
    (x0, x1), (y0, y1) = window
    nx, ny = grid
    if not (x1 > x0 and y1 > y0) or nx < 1 or ny < 1:
        return CycleSearchResult(None, 0, 0)

    def section(t, y):
        return y[1]

    section.terminal = False
    section.direction = -1.0

    cap_events, _ = _capture_events(p, ctl)

    def escape(t, y):
        return math.hypot(y[0], y[1]) - ctl.escape_radius

    escape.terminal = True
    escape.direction = 1.0

    def rhs(t, y):
        return eval_field(p, y)

    best_gap = math.inf
    witness = None
    crossings_total = 0
    seeds = 0
    for sx in np.linspace(x0, x1, nx):
        for sy in np.linspace(y0, y1, ny):
            seeds += 1
            start = np.array([sx, sy])
            if any(ev(0.0, start) < 0 for ev in cap_events):
                continue
            sol = solve_ivp(rhs, (0.0, ctl.max_s), start, method="RK45",
                            rtol=ctl.rel_tol, atol=ctl.abs_tol,
                            events=[section, escape] + cap_events)
            hits = sol.y_events[0]
            xs = [float(h[0]) for h in hits if 0.0 < h[0] < 1.0]
            crossings_total += len(xs)
            for a, b in zip(xs, xs[1:]):
                gap = abs(b - a)
                if min(a, b) < min_x:
                    continue
                best_gap = min(best_gap, gap)
                if gap < witness_tol and witness is None:
                    witness = {"seed": (float(sx), float(sy)),
                               "section_x": (a, b), "return_gap": gap}
    return CycleSearchResult(witness, seeds, crossings_total, best_gap)
