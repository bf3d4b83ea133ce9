"""Adaptive integration of the complexified Hamilton equations.

The stepper is an embedded Dormand-Prince 5(4) pair with first-same-as-last
stage reuse and a PI step-size controller.  The complex pair (x, p) is
treated as four real components for error control; tolerances follow the
usual mixed absolute/relative scaling.

Terminal events:

* escape   - |Im x| reaches the configured escape radius; the crossing
             time is refined by bisection with short re-integrations, so
             ``escape_time`` is accurate to the integration tolerance.
* closure  - the trajectory returns to its starting phase-space point
             (autonomous models only).  A local minimum of the squared
             phase-space distance to the start triggers a refinement of
             the closest-approach time; the orbit is declared closed when
             the refined miss distance, scaled by the orbit extent, falls
             below ``EventSpec.closure_tol`` and the flow direction at the
             return matches the initial one.
* blow-up  - a state component exceeds the overflow guard, or the stages
             stop being finite.
* horizon  - the time span is exhausted (classification ``open``).
* underflow- the controller wants a step below ``min_step`` (classification
             ``truncated``).

Integration may run backward in time by passing ``t_final`` smaller than
the start time; samples are then ordered by decreasing t.  Optional
``t_checkpoints`` are landed on exactly, which makes runs comparable
point-by-point across step-size choices.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field as dataclass_field

from .models import HamiltonianModel, PhaseState, cell_index

__all__ = [
    "CLOSED",
    "OPEN",
    "ESCAPED",
    "TRUNCATED",
    "BLOWUP",
    "IntegratorConfig",
    "EventSpec",
    "Trajectory",
    "integrate",
    "integrate_driven",
    "locate_return",
]

CLOSED = "closed"
OPEN = "open"
ESCAPED = "escaped"
TRUNCATED = "truncated"
BLOWUP = "blowup"

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

# PI controller constants
_SAFE = 0.9
_BETA = 0.04
_EXPO1 = 0.2 - 0.75 * _BETA
_FAC_SHRINK = 5.0  # largest shrink per step: h / 5
_FAC_GROW = 10.0  # largest growth per step: h * 10


@dataclass
class IntegratorConfig:
    """Tolerances and guards for the adaptive stepper.

    rel_tol, abs_tol   mixed error control per real component
    max_step, min_step step-size bounds (magnitudes)
    escape_radius      |Im x| at which a trajectory counts as escaped
    max_time           default integration horizon from the start time
    max_steps          hard cap on accepted steps
    overflow_guard     |component| bound beyond which the run is a blow-up
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 0.25
    min_step: float = 1e-12
    escape_radius: float = 30.0
    max_time: float = 200.0
    max_steps: int = 1_000_000
    overflow_guard: float = 1e12

    def __post_init__(self) -> None:
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.min_step <= 0.0 or self.max_step < self.min_step:
            raise ValueError("need 0 < min_step <= max_step")
        if self.escape_radius <= 0.0:
            raise ValueError("escape_radius must be positive")
        if self.max_time <= 0.0:
            raise ValueError("max_time must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.overflow_guard <= 1.0:
            raise ValueError("overflow_guard must exceed 1")


@dataclass
class EventSpec:
    """Which terminal events to watch.

    closure_tol is relative to the orbit extent (the largest phase-space
    distance from the start seen so far); min_period ignores returns
    earlier than the given time, guarding against the trivial t = t0 one.
    """

    closure: bool = True
    closure_tol: float = 1e-7
    escape: bool = True
    min_period: float = 0.1

    def __post_init__(self) -> None:
        if self.closure_tol <= 0.0:
            raise ValueError("closure_tol must be positive")
        if self.min_period < 0.0:
            raise ValueError("min_period must be >= 0")


@dataclass
class Trajectory:
    """Result of one integration run.

    samples are ordered along the direction of integration and start at
    the initial state; cell_history holds (t, cell_index) for every
    sample.  period is set exactly when classification == "closed",
    escape_time exactly when classification == "escaped"; termination
    names the event that stopped the run ("closure", "escape", "horizon",
    "max_steps", "step_underflow", "overflow", "non_finite").
    """

    samples: list[PhaseState]
    classification: str
    period: float | None = None
    escape_time: float | None = None
    cell_history: list[tuple[float, int]] = dataclass_field(default_factory=list)
    termination: str = ""
    model: HamiltonianModel | None = None

    def energy_drift(self) -> float:
        """Worst relative energy error over the samples.

        Each sample's deviation |H(t) - H(0)| is measured against the
        local scale max(1, |H(0)|, |p|^2/2 + |V(x)|): on an escape run
        the kinetic and potential terms grow huge while their sum stays
        fixed, and only deviation relative to those terms reflects
        integration error rather than float cancellation.  Meaningful
        for autonomous models, where H is conserved exactly.
        """
        if self.model is None:
            raise ValueError("trajectory carries no model")
        e0 = self.model.energy(self.samples[0])
        worst = 0.0
        for s in self.samples:
            local = 0.5 * abs(s.p) ** 2 + abs(self.model.potential(s.x, s.t))
            dev = abs(self.model.energy(s) - e0) / max(1.0, abs(e0), local)
            worst = max(worst, dev)
        return worst


def _finite(x: complex, p: complex) -> bool:
    return (
        math.isfinite(x.real)
        and math.isfinite(x.imag)
        and math.isfinite(p.real)
        and math.isfinite(p.imag)
    )


def _step(field, t, x, p, h, k1x, k1p):
    """One Dormand-Prince sweep from (t, x, p) with first stage (k1x, k1p).

    Returns the 5th-order state, the embedded error estimate, and the
    final stage, which equals the first stage of the next step.
    """
    k2x, k2p = field(t + _C2 * h, x + h * (_A21 * k1x), p + h * (_A21 * k1p))
    k3x, k3p = field(
        t + _C3 * h,
        x + h * (_A31 * k1x + _A32 * k2x),
        p + h * (_A31 * k1p + _A32 * k2p),
    )
    k4x, k4p = field(
        t + _C4 * h,
        x + h * (_A41 * k1x + _A42 * k2x + _A43 * k3x),
        p + h * (_A41 * k1p + _A42 * k2p + _A43 * k3p),
    )
    k5x, k5p = field(
        t + _C5 * h,
        x + h * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x),
        p + h * (_A51 * k1p + _A52 * k2p + _A53 * k3p + _A54 * k4p),
    )
    k6x, k6p = field(
        t + h,
        x + h * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x + _A65 * k5x),
        p + h * (_A61 * k1p + _A62 * k2p + _A63 * k3p + _A64 * k4p + _A65 * k5p),
    )
    x5 = x + h * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x + _B6 * k6x)
    p5 = p + h * (_B1 * k1p + _B3 * k3p + _B4 * k4p + _B5 * k5p + _B6 * k6p)
    k7x, k7p = field(t + h, x5, p5)
    ex = h * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x + _E6 * k6x + _E7 * k7x)
    ep = h * (_E1 * k1p + _E3 * k3p + _E4 * k4p + _E5 * k5p + _E6 * k6p + _E7 * k7p)
    return x5, p5, ex, ep, k7x, k7p


def _error_norm(x0, p0, x1, p1, ex, ep, abs_tol, rel_tol):
    s = 0.0
    for e, a, b in (
        (ex.real, x0.real, x1.real),
        (ex.imag, x0.imag, x1.imag),
        (ep.real, p0.real, p1.real),
        (ep.imag, p0.imag, p1.imag),
    ):
        sc = abs_tol + rel_tol * max(abs(a), abs(b))
        r = e / sc
        s += r * r
    return math.sqrt(0.25 * s)


def _scaled_norm(x, p, xref, pref, abs_tol, rel_tol):
    s = 0.0
    for v, w in ((x.real, xref.real), (x.imag, xref.imag), (p.real, pref.real), (p.imag, pref.imag)):
        sc = abs_tol + rel_tol * abs(w)
        s += (v / sc) ** 2
    return math.sqrt(0.25 * s)


def _initial_step(field, t, x, p, k1x, k1p, direction, abs_tol, rel_tol, max_step):
    """Automatic first step: trial value from state/slope norms, bounded by
    a one-Euler-step probe of the local derivative change."""
    d0 = _scaled_norm(x, p, x, p, abs_tol, rel_tol)
    d1 = _scaled_norm(k1x, k1p, x, p, abs_tol, rel_tol)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, max_step)
    xe = x + h0 * direction * k1x
    pe = p + h0 * direction * k1p
    k2x, k2p = field(t + h0 * direction, xe, pe)
    d2 = _scaled_norm(k2x - k1x, k2p - k1p, x, p, abs_tol, rel_tol) / h0
    dm = max(d1, d2)
    if dm <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / dm) ** 0.2
    return min(100.0 * h0, h1, max_step)


def _next_h(h, err, facold):
    """PI controller value for the step after an accepted one."""
    if err > 0.0:
        fac = err**_EXPO1 / facold**_BETA
    else:
        fac = 0.0
    fac = max(1.0 / _FAC_GROW, min(_FAC_SHRINK, fac / _SAFE))
    return h / fac


def _reject_h(h, err):
    return h / min(_FAC_SHRINK, err**_EXPO1 / _SAFE)


def _advance(field, t0, x0, p0, t_target, rel_tol, abs_tol, max_step, min_step):
    """Event-free re-integration from (t0, x0, p0) landing exactly on
    t_target; used to polish event times.  Returns (x, p)."""
    if t_target == t0:
        return x0, p0
    direction = 1.0 if t_target > t0 else -1.0
    t, x, p = t0, x0, p0
    k1x, k1p = field(t, x, p)
    h_mag = _initial_step(field, t, x, p, k1x, k1p, direction, abs_tol, rel_tol, max_step)
    h_mag = min(h_mag, abs(t_target - t0))
    facold = 1e-4
    while (t_target - t) * direction > 0.0:
        h = direction * h_mag
        remaining = t_target - t
        landed = False
        if abs(remaining) <= h_mag:
            h = remaining
            landed = True
        elif abs(remaining) < 2.0 * h_mag:
            h = 0.5 * remaining
        x1, p1, ex, ep, k7x, k7p = _step(field, t, x, p, h, k1x, k1p)
        if not (_finite(x1, p1) and _finite(ex, ep)):
            h_mag = 0.5 * abs(h)
            if h_mag < min_step:
                raise ArithmeticError("non-finite values while polishing an event")
            continue
        err = _error_norm(x, p, x1, p1, ex, ep, abs_tol, rel_tol)
        if err > 1.0:
            h_mag = abs(_reject_h(h, err))
            if h_mag < min_step:
                raise ArithmeticError("step underflow while polishing an event")
            continue
        t = t_target if landed else t + h
        x, p = x1, p1
        k1x, k1p = k7x, k7p
        if not landed:
            h_mag = min(abs(_next_h(h, err, facold)), max_step)
        facold = max(err, 1e-4)
    return x, p


def locate_return(
    field,
    t0,
    x0,
    p0,
    k0x,
    k0p,
    a,
    b,
    c,
    scale,
    rel_tol,
    abs_tol,
    max_step,
    min_step,
):
    """Refine a sampled local minimum of the distance to the start point.

    a, b, c are consecutive (t, x, p, d2, kx, kp) records with the sampled
    squared distance d2 minimal at b.  The closest approach solves
    g(t) = <s(t) - s0, v(t)> = 0 (the time derivative of the half squared
    distance).  g changes sign across the minimum and is nearly linear
    at a transversal return, so a bracketed false-position iteration
    (Illinois variant) converges in a handful of short re-integrations.

    Returns (t_min, x, p, distance/scale, flow_aligned).  flow_aligned
    reports whether the velocity at the minimum points along the initial
    velocity, separating true returns from near misses on the opposite
    branch.
    """
    ta, xa, pa, da, kax, kap = a
    tb, xb, pb, db, kbx, kbp = b
    tc, xc, pc, dc, kcx, kcp = c

    def g_of(x, p, kx, kp):
        dx = x - x0
        dp = p - p0
        return dx.real * kx.real + dx.imag * kx.imag + dp.real * kp.real + dp.imag * kp.imag

    def state_at(tau):
        # advance from the nearest bracketing sample for accuracy
        base = a if abs(tau - ta) <= abs(tau - tc) else c
        x, p = _advance(field, base[0], base[1], base[2], tau, rel_tol, abs_tol, max_step, min_step)
        kx, kp = field(tau, x, p)
        return x, p, kx, kp

    def dist(x, p):
        dx = x - x0
        dp = p - p0
        return math.sqrt(
            dx.real * dx.real + dx.imag * dx.imag + dp.real * dp.real + dp.imag * dp.imag
        )

    g_lo = g_of(xa, pa, kax, kap)
    g_hi = g_of(xc, pc, kcx, kcp)
    if g_lo == 0.0:
        t_star = ta
    elif g_hi == 0.0:
        t_star = tc
    elif (g_lo < 0.0) == (g_hi < 0.0):
        # no sign change (flat or asymmetric sampling): settle for the
        # parabolic vertex through the three squared distances
        num = (tb - ta) ** 2 * (db - dc) - (tb - tc) ** 2 * (db - da)
        den = (tb - ta) * (db - dc) - (tb - tc) * (db - da)
        t_hat = tb if den == 0.0 else tb - 0.5 * num / den
        lo_t, hi_t = (ta, tc) if ta < tc else (tc, ta)
        t_star = min(max(t_hat, lo_t), hi_t)
    else:
        lo, g_a = ta, g_lo
        hi, g_b = tc, g_hi
        side = 0
        t_res = 4.0 * sys.float_info.epsilon * max(1.0, abs(ta), abs(tc))
        for _ in range(60):
            if abs(hi - lo) <= t_res:
                break
            den = g_b - g_a
            mid = 0.5 * (lo + hi) if den == 0.0 else (lo * g_b - hi * g_a) / den
            if not (min(lo, hi) < mid < max(lo, hi)):
                mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            xm, pm, kmx, kmp = state_at(mid)
            gm = g_of(xm, pm, kmx, kmp)
            if gm == 0.0:
                lo = hi = mid
                break
            if (gm < 0.0) == (g_a < 0.0):
                lo, g_a = mid, gm
                if side == -1:
                    g_b *= 0.5
                side = -1
            else:
                hi, g_b = mid, gm
                if side == 1:
                    g_a *= 0.5
                side = 1
        t_star = 0.5 * (lo + hi)

    x_star, p_star, kx, kp = state_at(t_star)
    aligned = (
        kx.real * k0x.real + kx.imag * k0x.imag + kp.real * k0p.real + kp.imag * k0p.imag
    ) > 0.0
    return t_star, x_star, p_star, dist(x_star, p_star) / scale, aligned


def _locate_escape(field, ta, xa, pa, tb, radius, rel_tol, abs_tol, max_step, min_step):
    """Bisect the |Im x| = radius crossing inside (ta, tb]; the left end
    is strictly inside.  Returns (t, x, p) at the crossing."""
    lo, hi = ta, tb
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        xm, pm = _advance(field, ta, xa, pa, mid, rel_tol, abs_tol, max_step, min_step)
        if abs(xm.imag) >= radius:
            hi = mid
        else:
            lo = mid
    x, p = _advance(field, ta, xa, pa, hi, rel_tol, abs_tol, max_step, min_step)
    return hi, x, p


def integrate(
    model: HamiltonianModel,
    start: PhaseState,
    config: IntegratorConfig | None = None,
    events: EventSpec | None = None,
    *,
    t_final: float | None = None,
    t_checkpoints=None,
) -> Trajectory:
    """Integrate Hamilton's equations from ``start``.

    The run ends at the first terminal event (see the module docstring)
    or at ``t_final`` (default: start time plus ``config.max_time``;
    values before the start time integrate backward).  ``t_checkpoints``
    lists times the stepper must land on exactly; they appear among the
    samples, making runs comparable across step-size settings.
    """
    cfg = config if config is not None else IntegratorConfig()
    ev = events if events is not None else EventSpec()
    field = model.field

    t0 = float(start.t)
    x0 = complex(start.x)
    p0 = complex(start.p)
    if not _finite(x0, p0):
        raise ValueError("start state must be finite")
    t_end = t0 + cfg.max_time if t_final is None else float(t_final)
    if t_end == t0:
        raise ValueError("empty time span")
    direction = 1.0 if t_end > t0 else -1.0

    watch_escape = ev.escape
    if watch_escape and abs(x0.imag) >= cfg.escape_radius:
        raise ValueError("start lies at or beyond the escape radius")
    watch_closure = ev.closure and model.autonomous

    if t_checkpoints:
        cps = sorted((float(c) for c in t_checkpoints), reverse=direction < 0)
        cps = [c for c in cps if (c - t0) * direction > 0.0 and (t_end - c) * direction > 0.0]
    else:
        cps = []
    cp_idx = 0

    samples = [PhaseState(x0, p0, t0)]
    cells = [(t0, cell_index(x0))]

    k1x, k1p = field(t0, x0, p0)
    if not _finite(complex(k1x), complex(k1p)):
        raise ValueError("vector field is not finite at the start state")
    k0x, k0p = k1x, k1p
    h_mag = _initial_step(field, t0, x0, p0, k1x, k1p, direction, cfg.abs_tol, cfg.rel_tol, cfg.max_step)

    # polish runs use a slightly tighter tolerance so event times are not
    # limited by the refinement itself
    pol_rel = max(cfg.rel_tol * 0.1, 1e-14)
    pol_abs = max(cfg.abs_tol * 0.1, 1e-16)

    t, x, p = t0, x0, p0
    facold = 1e-4
    accepted = 0
    dmax_sq = 0.0
    prev2 = None
    prev1 = (t0, x0, p0, 0.0, k1x, k1p)

    classification = OPEN
    termination = "horizon"
    period = None
    escape_time = None

    while True:
        if (t_end - t) * direction <= 0.0:
            classification, termination = OPEN, "horizon"
            break
        if accepted >= cfg.max_steps:
            classification, termination = TRUNCATED, "max_steps"
            break

        # next stop: horizon or pending checkpoint
        while cp_idx < len(cps) and (cps[cp_idx] - t) * direction <= 0.0:
            cp_idx += 1
        t_stop = cps[cp_idx] if cp_idx < len(cps) else t_end

        h = direction * min(h_mag, cfg.max_step)
        remaining = t_stop - t
        landed = False
        if abs(remaining) <= abs(h):
            h = remaining
            landed = True
        elif abs(remaining) < 2.0 * abs(h):
            h = 0.5 * remaining

        x1, p1, ex, ep, k7x, k7p = _step(field, t, x, p, h, k1x, k1p)
        bad = not (_finite(x1, p1) and _finite(ex, ep))
        err = math.inf if bad else _error_norm(x, p, x1, p1, ex, ep, cfg.abs_tol, cfg.rel_tol)

        if err > 1.0:
            h_mag = 0.5 * abs(h) if bad else abs(_reject_h(h, err))
            if h_mag < cfg.min_step:
                classification, termination = (
                    (BLOWUP, "non_finite") if bad else (TRUNCATED, "step_underflow")
                )
                break
            continue

        t1 = t_stop if landed else t + h

        if (
            max(abs(x1.real), abs(x1.imag), abs(p1.real), abs(p1.imag))
            > cfg.overflow_guard
        ):
            samples.append(PhaseState(x1, p1, t1))
            cells.append((t1, cell_index(x1)))
            classification, termination = BLOWUP, "overflow"
            break

        if watch_escape and abs(x1.imag) >= cfg.escape_radius:
            te, xe, pe = _locate_escape(
                field, t, x, p, t1, cfg.escape_radius, pol_rel, pol_abs, cfg.max_step, cfg.min_step
            )
            samples.append(PhaseState(xe, pe, te))
            cells.append((te, cell_index(xe)))
            classification, termination = ESCAPED, "escape"
            escape_time = abs(te - t0)
            break

        current = None
        if watch_closure:
            dx = x1 - x0
            dp = p1 - p0
            d2 = dx.real * dx.real + dx.imag * dx.imag + dp.real * dp.real + dp.imag * dp.imag
            if d2 > dmax_sq:
                dmax_sq = d2
            current = (t1, x1, p1, d2, k7x, k7p)
            if (
                prev2 is not None
                and prev1[3] < prev2[3]
                and prev1[3] <= d2
                and dmax_sq > 1e-6
                and prev1[3] < 0.25 * dmax_sq
                and (prev1[0] - t0) * direction >= ev.min_period
            ):
                scale = math.sqrt(dmax_sq)
                hit = locate_return(
                    field,
                    t0,
                    x0,
                    p0,
                    k0x,
                    k0p,
                    prev2,
                    prev1,
                    current,
                    scale,
                    pol_rel,
                    pol_abs,
                    cfg.max_step,
                    cfg.min_step,
                )
                if hit is not None:
                    t_star, x_star, p_star, dist_scaled, aligned = hit
                    if dist_scaled <= ev.closure_tol and aligned:
                        while samples and (samples[-1].t - t_star) * direction >= 0.0:
                            samples.pop()
                            cells.pop()
                        samples.append(PhaseState(x_star, p_star, t_star))
                        cells.append((t_star, cell_index(x_star)))
                        classification, termination = CLOSED, "closure"
                        period = abs(t_star - t0)
                        break

        samples.append(PhaseState(x1, p1, t1))
        cells.append((t1, cell_index(x1)))
        accepted += 1
        if watch_closure:
            prev2, prev1 = prev1, current

        hnew = abs(_next_h(h, err, facold))
        facold = max(err, 1e-4)
        if not (landed or abs(h) < h_mag):
            # clipped steps say nothing about the error-optimal size
            h_mag = min(hnew, cfg.max_step)
            if h_mag < cfg.min_step:
                # the controller itself wants sub-floor steps: the local
                # timescale has collapsed (approaching a singularity)
                classification, termination = TRUNCATED, "step_underflow"
                t, x, p = t1, x1, p1
                break
        k1x, k1p = k7x, k7p
        t, x, p = t1, x1, p1

    return Trajectory(
        samples=samples,
        classification=classification,
        period=period,
        escape_time=escape_time,
        cell_history=cells,
        termination=termination,
        model=model,
    )


def integrate_driven(
    model: HamiltonianModel,
    start: PhaseState,
    config: IntegratorConfig | None = None,
    *,
    t_final: float | None = None,
    t_checkpoints=None,
) -> Trajectory:
    """Integrate a driven (non-autonomous) model.

    Closure detection is switched off, since the flow has no conserved
    energy and phase-space returns are not periodic orbits; escape and
    blow-up guards stay active, and cell_history records the strip index
    at every sample.
    """
    if model.autonomous:
        raise ValueError("integrate_driven expects a non-autonomous model")
    return integrate(
        model,
        start,
        config,
        EventSpec(closure=False, escape=True),
        t_final=t_final,
        t_checkpoints=t_checkpoints,
    )
