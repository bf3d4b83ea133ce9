"""Turning points: complex roots of V(x) = E.

Where the potential inverts in closed form the roots are enumerated
analytically and then polished by a Newton step or two, so every returned
point satisfies |V(x0) - E| <= residual_tol * max(1, |E|) regardless of
how it was produced:

* pendulum (any complex g, E):  cos x = -E/g, so x = +/- acos(-E/g) + 2 pi k
  with the principal complex arccosine; this covers real roots (|E/g| <= 1
  real), the conjugate pairs off the real axis, and the staggered
  single-root-per-column pattern of purely imaginary g in one formula.
* harmonic:                     x = +/- sqrt(2 E)
* imaginary cubic:              x^3 = -i E, the three cube roots

For anything else (or when no closed form applies) a Newton search runs
from a rectangular grid of seeds with spacing ``seed_grid``; duplicates
are merged within ``dedupe_tol`` and the window filter is applied after
refinement, inclusively, so roots that polish onto the boundary are kept.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

from .models import HamiltonianModel, Harmonic, ImaginaryCubic, Pendulum

__all__ = ["TurningPoint", "NonConvergence", "turning_points", "refine_root"]

logger = logging.getLogger(__name__)

_TWO_PI = 2.0 * math.pi


class NonConvergence(Exception):
    """Newton refinement failed to reach the residual target."""


@dataclass(frozen=True)
class TurningPoint:
    """A root x0 of V(x0) = E.

    a and b are Re x0 and Im x0.  lattice_index = round(Re x0 / 2 pi)
    tags the containing 2 pi cell; branch_sign is the sign of Im x0
    (0 when the root sits on the real axis).  Tags are informational;
    roots are identified by their value.
    """

    x0: complex
    lattice_index: int
    branch_sign: int

    @property
    def a(self) -> float:
        return self.x0.real

    @property
    def b(self) -> float:
        return self.x0.imag


def _tag(x0: complex) -> TurningPoint:
    b = x0.imag
    sign = 0 if abs(b) < 1e-12 else (1 if b > 0.0 else -1)
    return TurningPoint(x0=x0, lattice_index=round(x0.real / _TWO_PI), branch_sign=sign)


def _newton(model: HamiltonianModel, energy: complex, seed: complex, tol: float, max_iter: int) -> complex:
    """Newton iteration on V(x) - E; returns the refined root or raises."""
    scale = max(1.0, abs(energy))
    z = complex(seed)
    for _ in range(max_iter):
        f = model.potential(z) - energy
        if abs(f) <= tol * scale:
            # one extra step sharpens the root without risk: near a double
            # root f/f' is half the remaining distance, elsewhere smaller
            fp = model.gradient(z)
            if fp != 0.0:
                z -= f / fp
            return z
        fp = model.gradient(z)
        if abs(fp) < 1e-300 or not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise NonConvergence(f"derivative vanished near {z}")
        z -= f / fp
    if abs(model.potential(z) - energy) <= tol * scale:
        return z
    raise NonConvergence(f"no root reached from seed {seed}")


def refine_root(
    model: HamiltonianModel,
    energy: complex,
    seed: complex,
    *,
    residual_tol: float = 1e-12,
    max_iter: int = 50,
) -> TurningPoint:
    """Polish a single root of V(x) = E from ``seed`` by Newton iteration."""
    return _tag(_newton(model, energy, seed, residual_tol, max_iter))


def _pendulum_seeds(model: Pendulum, energy: complex, re_lo: float, re_hi: float):
    if model.g == 0.0:
        raise ValueError("g must be nonzero for turning points of the pendulum")
    alpha = cmath.acos(-energy / model.g)
    k_lo = math.floor((re_lo - abs(alpha.real)) / _TWO_PI) - 1
    k_hi = math.ceil((re_hi + abs(alpha.real)) / _TWO_PI) + 1
    for k in range(k_lo, k_hi + 1):
        yield alpha + _TWO_PI * k
        yield -alpha + _TWO_PI * k


def _closed_form_seeds(model: HamiltonianModel, energy: complex, re_lo: float, re_hi: float):
    """Analytic root candidates covering [re_lo, re_hi], or None."""
    if isinstance(model, Pendulum):  # includes the driven kind: same potential
        return list(_pendulum_seeds(model, energy, re_lo, re_hi))
    if isinstance(model, Harmonic):
        r = cmath.sqrt(2.0 * energy)
        return [r, -r]
    if isinstance(model, ImaginaryCubic):
        if energy == 0.0:
            return [0.0 + 0.0j]
        base = cmath.exp(cmath.log(-1j * energy) / 3.0)
        rot = cmath.exp(2j * math.pi / 3.0)
        return [base, base * rot, base * rot * rot]
    return None


def turning_points(
    model: HamiltonianModel,
    energy: complex,
    window: tuple[float, float, float, float],
    *,
    seed_grid: float = 0.5,
    dedupe_tol: float = 1e-9,
    residual_tol: float = 1e-12,
    max_iter: int = 50,
) -> list[TurningPoint]:
    """All turning points inside a closed rectangle of the complex plane.

    ``window`` is (re_min, re_max, im_min, im_max) and must have positive
    area.  Every root is Newton-polished to the residual target; the
    window filter runs after refinement (inclusive, with a one-nanounit
    grace so boundary roots survive rounding), and near-coincident roots
    merge within ``dedupe_tol``.  The result is sorted by (Re, Im).
    """
    re_lo, re_hi, im_lo, im_hi = (float(v) for v in window)
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValueError("window must have positive area")
    if seed_grid <= 0.0:
        raise ValueError("seed_grid must be positive")

    seeds = _closed_form_seeds(model, complex(energy), re_lo, re_hi)
    if seeds is None:
        seeds = []
        n_re = max(1, math.ceil((re_hi - re_lo) / seed_grid))
        n_im = max(1, math.ceil((im_hi - im_lo) / seed_grid))
        for i in range(n_re + 1):
            sr = re_lo + (re_hi - re_lo) * i / n_re
            for j in range(n_im + 1):
                si = im_lo + (im_hi - im_lo) * j / n_im
                seeds.append(complex(sr, si))

    grace = 1e-9
    found: list[complex] = []
    skipped = 0
    for seed in seeds:
        try:
            z = _newton(model, complex(energy), seed, residual_tol, max_iter)
        except NonConvergence:
            skipped += 1
            continue
        if not (re_lo - grace <= z.real <= re_hi + grace and im_lo - grace <= z.imag <= im_hi + grace):
            continue
        if all(abs(z - w) > dedupe_tol for w in found):
            found.append(z)
    if skipped:
        logger.warning("turning_points: %d of %d seeds did not converge", skipped, len(seeds))
    found.sort(key=lambda z: (z.real, z.imag))
    return [_tag(z) for z in found]
