"""Turning-point enumeration: root families, residuals, symmetry pairings."""
import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complexpendulum import (
    Harmonic,
    ImaginaryCubic,
    NonConvergence,
    Pendulum,
    refine_root,
    turning_points,
)

PI = math.pi
WIDE = (-3 * PI, 3 * PI, -2.0, 2.0)
COSH1 = math.cosh(1.0)
SINH1 = math.sinh(1.0)


def roots_of(model, energy, window=WIDE, **kw):
    return [tp.x0 for tp in turning_points(model, energy, window, **kw)]


def assert_same_set(got, want, tol=1e-10):
    assert len(got) == len(want), f"{len(got)} roots, expected {len(want)}: {got}"
    for w in want:
        assert min(abs(g - w) for g in got) < tol, f"missing root near {w}"


class TestPendulumRealG:
    def test_zero_energy_family(self):
        # V = -cos x = 0 on the real axis at odd multiples of pi/2
        want = [s * PI / 2 + 2 * PI * k for k in (-1, 0, 1) for s in (1, -1)]
        got = roots_of(Pendulum(g=1.0), 0.0)
        assert_same_set(got, want)
        assert len(got) == 6

    def test_positive_energy_conjugate_pairs(self):
        # E = cosh 1: cos x = -cosh 1, roots at odd multiples of pi shifted by +-i
        want = [complex((2 * k + 1) * PI, s) for k in (-2, -1, 0, 1) for s in (1, -1)]
        got = roots_of(Pendulum(g=1.0), COSH1)
        assert_same_set(got, want)
        assert len(got) == 8  # the +-3 pi columns sit exactly on the window edge

    def test_negative_energy_conjugate_pairs(self):
        want = [complex(2 * k * PI, s) for k in (-1, 0, 1) for s in (1, -1)]
        got = roots_of(Pendulum(g=1.0), -COSH1)
        assert_same_set(got, want)
        assert len(got) == 6

    def test_residuals(self):
        model = Pendulum(g=1.0)
        for tp in turning_points(model, COSH1, WIDE):
            assert abs(model.potential(tp.x0) - COSH1) <= 1e-12 * max(1.0, COSH1)


class TestPendulumImaginaryG:
    def test_positive_energy_staggered(self):
        # g = i, E = sinh 1: single root per half-lattice column, alternating sheet
        model = Pendulum(g=1j)
        want = [complex(PI / 2 + 2 * PI * k, -1.0) for k in (-1, 0, 1)]
        want += [complex(3 * PI / 2 + 2 * PI * k, 1.0) for k in (-2, -1, 0)]
        got = roots_of(model, SINH1)
        assert_same_set(got, want)
        assert len(got) == 6

    def test_negative_energy_mirror(self):
        model = Pendulum(g=1j)
        want = [complex(PI / 2 + 2 * PI * k, 1.0) for k in (-1, 0, 1)]
        want += [complex(3 * PI / 2 + 2 * PI * k, -1.0) for k in (-2, -1, 0)]
        got = roots_of(model, -SINH1)
        assert_same_set(got, want)

    def test_residuals(self):
        model = Pendulum(g=1j)
        for tp in turning_points(model, SINH1, WIDE):
            assert abs(model.potential(tp.x0) - SINH1) <= 1e-12 * max(1.0, SINH1)

    def test_complex_energy_degenerate_roots(self):
        # E = i forces cos x = -1: double roots on the real axis
        got = roots_of(Pendulum(g=1j), 1j, window=(-7.0, 7.0, -1.0, 1.0), residual_tol=1e-9)
        assert_same_set(got, [-PI + 0j, PI + 0j], tol=1e-4)


class TestOtherPotentials:
    def test_harmonic(self):
        got = roots_of(Harmonic(), 1.0, window=(-2.0, 2.0, -1.0, 1.0))
        assert_same_set(got, [math.sqrt(2.0), -math.sqrt(2.0)])

    def test_cubic(self):
        # i x^3 = 1 has the three cube roots of -i
        want = [1j, complex(math.sqrt(3) / 2, -0.5), complex(-math.sqrt(3) / 2, -0.5)]
        got = roots_of(ImaginaryCubic(), 1.0, window=(-2.0, 2.0, -2.0, 2.0))
        assert_same_set(got, want)

    def test_cubic_residuals(self):
        model = ImaginaryCubic()
        for tp in turning_points(model, 1.0, (-2.0, 2.0, -2.0, 2.0)):
            assert abs(model.potential(tp.x0) - 1.0) <= 1e-12


class TestRefineRoot:
    def test_polishes_nearby_seed(self):
        tp = refine_root(Pendulum(g=1.0), 0.0, 1.5 + 0.05j)
        assert abs(tp.x0 - PI / 2) < 1e-12
        assert tp.branch_sign == 0
        assert tp.lattice_index == 0

    def test_tags(self):
        tp = refine_root(Pendulum(g=1.0), COSH1, complex(3 * PI, 0.9))
        assert abs(tp.x0 - complex(3 * PI, 1.0)) < 1e-12
        assert tp.lattice_index == 2  # round(3 pi / 2 pi) = round(1.5) = 2
        assert tp.branch_sign == 1
        assert tp.a == tp.x0.real and tp.b == tp.x0.imag

    def test_raises_when_stuck(self):
        # seed at the potential maximum of the harmonic well with wrong energy
        with pytest.raises(NonConvergence):
            refine_root(Harmonic(), 1.0, 0j, max_iter=3)


class TestWindowHandling:
    def test_boundary_roots_kept(self):
        got = roots_of(Pendulum(g=1.0), COSH1, window=(-3 * PI, 3 * PI, -1.0, 1.0))
        assert any(abs(z - complex(3 * PI, 1.0)) < 1e-10 for z in got)
        assert any(abs(z - complex(-3 * PI, -1.0)) < 1e-10 for z in got)

    def test_empty_window_area_rejected(self):
        with pytest.raises(ValueError):
            turning_points(Pendulum(g=1.0), 0.0, (1.0, 1.0, -1.0, 1.0))

    def test_bad_seed_grid_rejected(self):
        with pytest.raises(ValueError):
            turning_points(Pendulum(g=1.0), 0.0, WIDE, seed_grid=0.0)

    def test_sorted_output(self):
        got = roots_of(Pendulum(g=1.0), COSH1)
        keys = [(z.real, z.imag) for z in got]
        assert keys == sorted(keys)


@st.composite
def real_energies_off_critical(draw):
    e = draw(st.floats(-5.0, 5.0, allow_nan=False))
    # stay away from |E| = 1 where roots collide on the real axis
    if abs(abs(e) - 1.0) < 0.05:
        e += 0.1
    return e


class TestStructuralProperties:
    @settings(max_examples=60, deadline=None)
    @given(e=real_energies_off_critical())
    def test_conjugate_pairing_real_g(self, e):
        got = roots_of(Pendulum(g=1.0), e)
        for z in got:
            if abs(z.imag) > 1e-9:
                assert min(abs(w - z.conjugate()) for w in got) < 1e-9

    @settings(max_examples=60, deadline=None)
    @given(e=real_energies_off_critical())
    def test_lattice_translation(self, e):
        model = Pendulum(g=1.0)
        # tall window: |Im root| = arccosh|E| reaches ~2.3 for |E| = 5
        got = roots_of(model, e, window=(-3 * PI, 3 * PI, -4.0, 4.0))
        inner = [z for z in got if abs(z.real) <= PI]
        assert inner, "expected roots in the central cell"
        for z in inner:
            shifted = refine_root(model, e, z + 2 * PI).x0
            assert abs(shifted - (z + 2 * PI)) < 1e-9

    @settings(max_examples=60, deadline=None)
    @given(e=st.floats(0.2, 5.0, allow_nan=False))
    def test_reflection_pairing_imaginary_g(self, e):
        # the antiunitary symmetry x -> pi - x* of g = i maps the root set
        # to itself (modulo the 2 pi lattice)
        model = Pendulum(g=1j)
        got = roots_of(model, e)
        for z in got:
            image = PI - z.conjugate()
            shifted = min(
                (image + 2 * PI * k for k in range(-3, 4)),
                key=lambda w: abs(w.real),
            )
            candidates = [w for w in got]
            assert min(abs(((w - shifted).real + PI) % (2 * PI) - PI) + abs(w.imag - shifted.imag) for w in candidates) < 1e-9

    @settings(max_examples=40, deadline=None)
    @given(e=real_energies_off_critical())
    def test_refine_root_is_fixed_point(self, e):
        model = Pendulum(g=1.0)
        for tp in turning_points(model, e, WIDE):
            again = refine_root(model, e, tp.x0)
            assert abs(again.x0 - tp.x0) < 1e-12
