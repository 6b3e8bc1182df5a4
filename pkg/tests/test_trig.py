"""Tests for exact trigonometric polynomials and box integrals."""

import math

import numpy as np
import pytest
import sympy

from cavity_eh.exceptions import GeometryError, HarmonicOverflowError, QuadratureError
from cavity_eh.models import CavityGeometry, ModeId
from cavity_eh.modes import electric_profile, magnetic_profile
from cavity_eh.trig import (
    MAX_HARMONIC,
    ExactValue,
    TrigKind,
    TrigPoly,
    VectorTrigPoly,
    dot,
    integrate_box,
    integrate_numeric,
    integrate_product,
    is_exact_zero,
    multiply,
)

S, C = TrigKind.SIN, TrigKind.COS


def sin_x(m: int, coef=1) -> TrigPoly:
    return TrigPoly.monomial(coef, x=(S, m))


class TestTrigPoly:
    """Tests for TrigPoly arithmetic."""

    def test_sin_squared(self):
        """Test sin² reduces to (1 - cos 2θ)/2."""
        product = sin_x(1) * sin_x(1)

        expected = TrigPoly.constant(sympy.Rational(1, 2)) - TrigPoly.monomial(
            sympy.Rational(1, 2), x=(C, 2)
        )
        assert product == expected
        assert len(product) == 2

    def test_sin_cos_product(self):
        """Test sin a · cos b = (sin(a+b) + sin(a-b))/2."""
        product = multiply(sin_x(3), TrigPoly.monomial(1, x=(C, 1)))

        expected = TrigPoly.monomial(sympy.Rational(1, 2), x=(S, 4)) + TrigPoly.monomial(
            sympy.Rational(1, 2), x=(S, 2)
        )
        assert product == expected

    def test_negative_harmonic_flips_sine(self):
        """Test sin a · cos b with b > a keeps a canonical positive harmonic."""
        product = multiply(sin_x(1), TrigPoly.monomial(1, x=(C, 3)))

        expected = TrigPoly.monomial(sympy.Rational(1, 2), x=(S, 4)) - TrigPoly.monomial(
            sympy.Rational(1, 2), x=(S, 2)
        )
        assert product == expected

    def test_zero_sine_is_zero_polynomial(self):
        """Test that sin with harmonic 0 gives the zero polynomial."""
        assert not TrigPoly.monomial(5, y=(S, 0))
        assert TrigPoly.monomial(5, y=(C, 0)) == TrigPoly.constant(5)

    def test_cancellation_drops_terms(self):
        """Test that exactly cancelling terms leave no entries."""
        assert len(sin_x(2) - sin_x(2)) == 0

    def test_scale(self):
        """Test scalar multiplication from both sides."""
        assert 3 * sin_x(1) == sin_x(1, 3)
        assert sin_x(1) * 0 == TrigPoly.zero()

    def test_harmonic_overflow(self):
        """Test that products beyond MAX_HARMONIC are rejected."""
        half = MAX_HARMONIC // 2 + 1
        with pytest.raises(HarmonicOverflowError):
            multiply(sin_x(half), sin_x(half))

    def test_monomial_overflow(self):
        """Test that building a factor beyond MAX_HARMONIC is rejected."""
        with pytest.raises(HarmonicOverflowError):
            sin_x(MAX_HARMONIC + 1)

    def test_derivative(self):
        """Test d/dx sin(πx/L) = (π/L) cos(πx/L)."""
        length = sympy.Symbol("L_x", positive=True)

        derivative = sin_x(2).derivative(0, length)

        assert derivative == TrigPoly.monomial(2 * sympy.pi / length, x=(C, 2))

    def test_as_expr(self):
        """Test conversion to a plain sympy expression."""
        x = sympy.Symbol("x", real=True)
        lx = sympy.Symbol("L_x", positive=True)

        assert sin_x(1).as_expr() == sympy.sin(sympy.pi * x / lx)


class TestIntegrateBox:
    """Tests for exact box integrals."""

    def test_constant(self):
        """Test that a constant integrates to value times volume."""
        geom = CavityGeometry.from_ratio(1, 2, 3)

        value = integrate_box(TrigPoly.constant(4), geom)

        assert is_exact_zero(value.expr - 4 * geom.volume)
        assert value.inverse_pi_degree == 0

    def test_odd_sine(self):
        """Test ∫ sin(πx/L) over a unit cube is 2/π."""
        value = integrate_box(sin_x(1), CavityGeometry.cube(1))

        assert value.expr == 2 / sympy.pi
        assert value.inverse_pi_degree == 1

    def test_even_sine_and_cosine_vanish(self):
        """Test that even sines and cosines integrate to zero."""
        geom = CavityGeometry.symbolic()

        assert integrate_box(sin_x(2), geom).is_zero
        assert integrate_box(TrigPoly.monomial(1, z=(C, 3)), geom).is_zero

    def test_sin_cubed_sin_three(self):
        """Test ∫ sin³θ sin 3θ over [0, L] is -L/8."""
        geom = CavityGeometry.symbolic()
        integrand = sin_x(1) * sin_x(1) * sin_x(1) * sin_x(3)

        value = integrate_box(integrand, geom)

        assert is_exact_zero(value.expr + geom.volume / 8)

    def test_integrate_product_matches_multiply(self):
        """Test that the separable product integral equals the expanded one."""
        geom = CavityGeometry.symbolic()
        a = TrigPoly.monomial(2, x=(S, 1), y=(C, 2)) + TrigPoly.monomial(1, z=(S, 3))
        b = TrigPoly.monomial(sympy.Rational(1, 3), x=(S, 3), y=(C, 2), z=(S, 1))

        direct = integrate_box(multiply(a, b), geom)
        separable = integrate_product(a, b, geom)

        assert is_exact_zero(direct.expr - separable.expr)


class TestIntegrateNumeric:
    """Tests for the Gauss-Legendre cross-check."""

    def test_matches_exact(self):
        """Test quadrature against the exact integral."""
        geom = CavityGeometry.from_ratio(1, 2, 3)
        integrand = sin_x(1) * sin_x(1) * sin_x(1) * sin_x(3) + TrigPoly.monomial(
            1, y=(S, 5), z=(S, 1)
        )

        exact = integrate_box(integrand, geom).to_float()
        numeric = integrate_numeric(integrand, geom)

        assert numeric == pytest.approx(exact, rel=1e-10)

    def test_symbolic_geometry_with_values(self):
        """Test quadrature with numeric values for symbolic lengths."""
        geom = CavityGeometry.symbolic()
        subs = {symbol: 2 for symbol in geom.free_symbols}

        numeric = integrate_numeric(sin_x(1), geom, subs=subs)

        assert numeric == pytest.approx(16 / math.pi)

    def test_too_few_points(self):
        """Test that under-resolved quadrature is rejected."""
        with pytest.raises(QuadratureError):
            integrate_numeric(sin_x(10), CavityGeometry.cube(1), points_per_axis=20)

    def test_symbolic_geometry_without_values(self):
        """Test that free symbols must be given values."""
        with pytest.raises(GeometryError):
            integrate_numeric(sin_x(1), CavityGeometry.symbolic())


class TestExactValue:
    """Tests for ExactValue arithmetic."""

    def test_degree_propagation(self):
        """Test that sums keep the max degree and products add degrees."""
        a = ExactValue(2 / sympy.pi, 1)
        b = ExactValue(sympy.Integer(3), 0)

        assert (a + b).inverse_pi_degree == 1
        assert (a * a).inverse_pi_degree == 2

    def test_zero(self):
        """Test exact-zero detection after simplification."""
        value = ExactValue(sympy.sqrt(2) ** 2 - 2)

        assert value.is_zero
        assert value.simplify().expr == 0

    def test_to_float_requires_numbers(self):
        """Test that free symbols block numeric conversion."""
        lx = sympy.Symbol("L_x", positive=True)

        with pytest.raises(GeometryError):
            ExactValue(lx).to_float()
        assert ExactValue(lx).to_float({lx: 2}) == 2.0


def test_is_exact_zero():
    """Test the exact-zero test on zero and nonzero expressions."""
    lx = sympy.Symbol("L_x", positive=True)

    assert is_exact_zero(sympy.sin(lx) ** 2 + sympy.cos(lx) ** 2 - 1)
    assert not is_exact_zero(lx)
    assert not is_exact_zero(sympy.Float(1e-3))


def test_dot_requires_same_geometry():
    """Test that profiles from different boxes cannot be combined."""
    one = VectorTrigPoly((sin_x(1), TrigPoly.zero(), TrigPoly.zero()), CavityGeometry.cube(1))
    two = VectorTrigPoly((sin_x(1), TrigPoly.zero(), TrigPoly.zero()), CavityGeometry.cube(2))

    with pytest.raises(GeometryError):
        dot(one, two)


def test_dot_folds_prefactors():
    """Test that dot multiplies both prefactors in."""
    geom = CavityGeometry.cube(1)
    u = VectorTrigPoly((sin_x(1), TrigPoly.zero(), TrigPoly.zero()), geom, sympy.sqrt(2))

    assert dot(u, u) == sin_x(1) * sin_x(1) * 2


def _golden_volume(lx, ly, lz):
    return lx * ly * lz


GOLDEN_CASES = [
    ("A130.A110 A011.A011", "A130", "A110", "A011", "A011",
     lambda lx, ly, lz: -_golden_volume(lx, ly, lz) / 2),
    ("A130.A011 A110.A011", "A130", "A011", "A110", "A011",
     lambda lx, ly, lz: sympy.Integer(0)),
    ("R130.R110 R011.R011", "R130", "R110", "R011", "R011",
     lambda lx, ly, lz: _golden_volume(lx, ly, lz) / 2 * sympy.pi**4
     * (lx**-2 + 3 * ly**-2) * (ly**-2 - lz**-2)),
    ("R130.R011 R110.R011", "R130", "R011", "R110", "R011",
     lambda lx, ly, lz: -_golden_volume(lx, ly, lz) / 2 * sympy.pi**4 * lx**-2 * lz**-2),
    ("R130.R110 A011.A011", "R130", "R110", "A011", "A011",
     lambda lx, ly, lz: -_golden_volume(lx, ly, lz) / 2 * sympy.pi**2 * (lx**-2 + 3 * ly**-2)),
    ("R011.R011 A130.A110", "R011", "R011", "A130", "A110",
     lambda lx, ly, lz: _golden_volume(lx, ly, lz) / 2 * sympy.pi**2 * (ly**-2 - lz**-2)),
    ("R130.A011 R110.A011", "R130", "A011", "R110", "A011",
     lambda lx, ly, lz: -3 * _golden_volume(lx, ly, lz) / 2 * sympy.pi**2 * ly**-2),
    ("R011.A130 R011.A110", "R011", "A130", "R011", "A110",
     lambda lx, ly, lz: _golden_volume(lx, ly, lz) / 2 * sympy.pi**2 * ly**-2),
    ("R130.A011 R011.A110", "R130", "A011", "R011", "A110",
     lambda lx, ly, lz: 3 * _golden_volume(lx, ly, lz) / 2 * sympy.pi**2 * ly**-2),
    ("R130.R011 A110.A011", "R130", "R011", "A110", "A011",
     lambda lx, ly, lz: sympy.Integer(0)),
]

PROFILE_MODES = {"011": "TE011", "110": "TM110", "130": "TM130"}


def _profile(geom: CavityGeometry, name: str):
    mode = ModeId.parse(PROFILE_MODES[name[1:]])
    if name[0] == "A":
        return electric_profile(geom, mode)
    return magnetic_profile(geom, mode)


def _golden_integrand(geom: CavityGeometry, u: str, v: str, w: str, z: str) -> TrigPoly:
    return multiply(
        dot(_profile(geom, u), _profile(geom, v)), dot(_profile(geom, w), _profile(geom, z))
    )


class TestGoldenIntegrals:
    """Tests for the quartic overlap integrals of the TE011/TM110/TM130 channel."""

    @pytest.mark.parametrize(
        "u,v,w,z,expected", [case[1:] for case in GOLDEN_CASES], ids=[c[0] for c in GOLDEN_CASES]
    )
    def test_exact_value(self, u, v, w, z, expected):
        """Test the exact box integral with symbolic side lengths."""
        geom = CavityGeometry.symbolic()

        value = integrate_box(_golden_integrand(geom, u, v, w, z), geom)

        assert is_exact_zero(value.expr - expected(*geom.lengths))

    @pytest.mark.parametrize(
        "u,v,w,z,expected", [case[1:] for case in GOLDEN_CASES], ids=[c[0] for c in GOLDEN_CASES]
    )
    def test_quadrature_value(self, u, v, w, z, expected):
        """Test Gauss-Legendre quadrature against the same value in a 1:2:3 box."""
        geom = CavityGeometry.from_ratio(1, 2, 3)
        volume = float(geom.volume)

        numeric = integrate_numeric(_golden_integrand(geom, u, v, w, z), geom)
        target = float(sympy.N(expected(*geom.lengths)))

        assert abs(numeric - target) <= 1e-8 * max(abs(target), volume)


def test_random_quadrature_agrees_with_exact():
    """Test quadrature against exact integrals of random mode products."""
    geom = CavityGeometry.from_ratio(1, 2, 3)
    volume = float(geom.volume)
    rng = np.random.default_rng(7)

    def factor():
        kind = C if rng.random() < 0.5 else S
        low = 1 if kind == S else 0
        return kind, int(rng.integers(low, 4))

    for _ in range(500):
        integrand = TrigPoly.constant(1)
        for _ in range(int(rng.integers(2, 5))):
            coef = sympy.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
            integrand = multiply(
                integrand, TrigPoly.monomial(coef or 1, x=factor(), y=factor(), z=factor())
            )

        exact = integrate_box(integrand, geom).to_float()
        numeric = integrate_numeric(integrand, geom)

        assert abs(exact - numeric) <= 1e-8 * max(abs(exact), volume)
