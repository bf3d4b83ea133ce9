"""Hamiltonian families for complexified classical dynamics.

Position x and momentum p are complex numbers evolving under Hamilton's
equations

    dx/dt = p,      dp/dt = -V'(x) + F(t),

where F(t) is an optional real driving force (zero for the autonomous
kinds).  Four families are provided:

* ``Pendulum``:         V(x) = -g cos x, complex field strength g
* ``Harmonic``:         V(x) = x^2 / 2
* ``ImaginaryCubic``:   V(x) = i x^3
* ``DrivenPendulum``:   pendulum plus the force eps * sin(omega * t)

Complex trigonometric values are computed from the entire extensions

    cos(a + ib) = cos a cosh b - i sin a sinh b
    sin(a + ib) = sin a cosh b + i cos a sinh b

so behaviour far from the real axis is explicit and library-independent.
Models are frozen dataclasses; all methods are pure functions of their
arguments.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "PhaseState",
    "HamiltonianModel",
    "Pendulum",
    "Harmonic",
    "ImaginaryCubic",
    "DrivenPendulum",
    "complex_cos",
    "complex_sin",
    "cell_index",
]


def complex_cos(z: complex) -> complex:
    """Entire extension of the cosine: cos(a+ib) = cos a cosh b - i sin a sinh b."""
    a, b = z.real, z.imag
    return complex(math.cos(a) * math.cosh(b), -math.sin(a) * math.sinh(b))


def complex_sin(z: complex) -> complex:
    """Entire extension of the sine: sin(a+ib) = sin a cosh b + i cos a sinh b."""
    a, b = z.real, z.imag
    return complex(math.sin(a) * math.cosh(b), math.cos(a) * math.sinh(b))


def cell_index(x: complex) -> int:
    """Index of the 2*pi-wide vertical strip containing x.

    Cell k covers (2k-1)*pi <= Re x < (2k+1)*pi, so cell 0 is centred on
    the origin.
    """
    return math.floor((x.real + math.pi) / (2.0 * math.pi))


@dataclass(frozen=True)
class PhaseState:
    """A point of the complexified flow: position x, momentum p, time t."""

    x: complex
    p: complex
    t: float = 0.0


class HamiltonianModel:
    """Base class of the model families.

    Concrete kinds supply ``potential`` and ``gradient``; everything else
    (energy, vector field, momentum reconstruction) is shared.  ``kind``
    is a stable string tag used by configuration files.
    """

    kind: str = ""
    autonomous: bool = True

    def potential(self, x: complex, t: float = 0.0) -> complex:
        """V(x).  The t argument is accepted for interface uniformity but
        unused: driving enters as a force, never as a potential term."""
        raise NotImplementedError

    def gradient(self, x: complex) -> complex:
        """V'(x)."""
        raise NotImplementedError

    def drive_force(self, t: float) -> float:
        """Real driving force on dp/dt; zero unless the model is driven."""
        return 0.0

    def field(self, t: float, x: complex, p: complex) -> tuple[complex, complex]:
        """Right-hand side (dx/dt, dp/dt) at time t."""
        return p, -self.gradient(x) + self.drive_force(t)

    def vector_field(self, state: PhaseState) -> tuple[complex, complex]:
        """Right-hand side evaluated at a phase-space point."""
        return self.field(state.t, state.x, state.p)

    def energy(self, state: PhaseState) -> complex:
        """H = p^2/2 + V(x).

        Conserved along trajectories of the autonomous kinds; for the
        driven kind this is the instantaneous undriven energy and drifts.
        """
        return 0.5 * state.p * state.p + self.potential(state.x, state.t)

    def momentum_from_energy(self, x: complex, energy: complex, branch: int = 1) -> complex:
        """Invert the energy relation: p = branch * sqrt(2 (E - V(x))).

        The square root is the principal one (branch cut along the
        negative real axis, result in the right half plane or on the
        positive imaginary axis); ``branch`` selects the sign in front.
        """
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        return branch * cmath.sqrt(2.0 * (energy - self.potential(x)))

    def pt_reflection(self, x: complex) -> complex:
        """Spatial half of the PT map: x -> -conj(x), reflection through
        the imaginary axis.  Correct whenever conj(V(-conj x)) = V(x), as
        for the harmonic and imaginary-cubic potentials; the pendulum
        overrides this with a g-dependent choice of reflection axis."""
        return -x.conjugate()


@dataclass(frozen=True)
class Pendulum(HamiltonianModel):
    """H = p^2/2 - g cos x with complex field strength g.

    Real g is the ordinary pendulum continued to complex x; purely
    imaginary g gives a PT-symmetric flow whose symmetry axis sits at
    Re x = pi/2 (mod pi).
    """

    g: complex = 1.0

    kind = "pendulum"

    def potential(self, x: complex, t: float = 0.0) -> complex:
        return -self.g * complex_cos(x)

    def gradient(self, x: complex) -> complex:
        return self.g * complex_sin(x)

    def pt_reflection(self, x: complex) -> complex:
        """Spatial half of the PT map.

        Real g: x -> -conj(x) (reflection through the imaginary axis).
        Purely imaginary g: x -> pi - conj(x) (reflection through the
        vertical line Re x = pi/2).
        """
        if self.g.imag == 0.0 and self.g.real != 0.0:
            return -x.conjugate()
        if self.g.real == 0.0 and self.g.imag != 0.0:
            return math.pi - x.conjugate()
        raise ValueError("PT reflection is defined only for real or purely imaginary g")


@dataclass(frozen=True)
class Harmonic(HamiltonianModel):
    """H = p^2/2 + x^2/2; every complex orbit closes with period 2*pi."""

    kind = "harmonic"

    def potential(self, x: complex, t: float = 0.0) -> complex:
        return 0.5 * x * x

    def gradient(self, x: complex) -> complex:
        return x


@dataclass(frozen=True)
class ImaginaryCubic(HamiltonianModel):
    """H = p^2/2 + i x^3, the PT-symmetric cubic oscillator."""

    kind = "cubic-i"

    def potential(self, x: complex, t: float = 0.0) -> complex:
        return 1j * x * x * x

    def gradient(self, x: complex) -> complex:
        return 3j * x * x


@dataclass(frozen=True)
class DrivenPendulum(Pendulum):
    """Pendulum with the additive real force eps * sin(omega * t) on dp/dt.

    The drive couples as a force, not through the potential, so
    ``potential`` and ``energy`` report instantaneous undriven values
    (not conserved along driven trajectories).
    """

    epsilon: float = 0.2
    omega: float = 0.1

    kind = "driven-pendulum"
    autonomous = False

    def __post_init__(self) -> None:
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")
        if self.omega <= 0.0:
            raise ValueError("omega must be > 0")

    def drive_force(self, t: float) -> float:
        return self.epsilon * math.sin(self.omega * t)
