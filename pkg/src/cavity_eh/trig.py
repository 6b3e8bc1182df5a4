"""
Exact trigonometric polynomials over a rectangular box.

A TrigPoly is a sum of terms, each a sympy coefficient times at most one
factor per axis. A factor is sin(πm·x/L), cos(πm·x/L) or the constant 1,
where L is the box side along that axis. Products are reduced with the
product-to-sum identities, so every polynomial stays in canonical form:
one entry per distinct factor triple, no zero entries.

Box integrals are exact. A tensor-product Gauss-Legendre rule provides an
independent numeric estimate of the same integrals.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from cavity_eh.exceptions import GeometryError, HarmonicOverflowError, QuadratureError
from cavity_eh.models import CavityGeometry

logger = logging.getLogger(__name__)

MAX_HARMONIC = 64
AXES = ("x", "y", "z")

_HALF = sympy.Rational(1, 2)


class TrigKind(str, Enum):
    SIN = "sin"
    COS = "cos"
    CONST = "const"


AxisFactor = Tuple[TrigKind, int]
TermKey = Tuple[AxisFactor, AxisFactor, AxisFactor]

_CONST: AxisFactor = (TrigKind.CONST, 0)
_UNIT_KEY: TermKey = (_CONST, _CONST, _CONST)


@dataclass(frozen=True)
class TrigFactor:
    """
    One trigonometric factor along a single axis.

    ``cos`` with harmonic 0 is the constant; ``sin`` with harmonic 0 is
    the zero factor.
    """

    axis: int
    kind: TrigKind
    harmonic: int = 0

    def __post_init__(self):
        if self.axis not in (0, 1, 2):
            raise ValueError(f"axis must be 0, 1 or 2, got {self.axis}")
        if self.harmonic < 0:
            raise ValueError("harmonic must be nonnegative")
        if self.harmonic > MAX_HARMONIC:
            raise HarmonicOverflowError(
                f"harmonic {self.harmonic} exceeds the bound {MAX_HARMONIC}"
            )

    @property
    def is_zero(self) -> bool:
        return self.kind == TrigKind.SIN and self.harmonic == 0

    def canonical(self) -> AxisFactor:
        if self.kind == TrigKind.CONST or (self.kind == TrigKind.COS and self.harmonic == 0):
            return _CONST
        return (self.kind, self.harmonic)


def _check_harmonic(m: int) -> None:
    if m > MAX_HARMONIC:
        raise HarmonicOverflowError(f"harmonic {m} exceeds the bound {MAX_HARMONIC}")


def _signed_factor(kind: TrigKind, m: int) -> List[Tuple[sympy.Expr, AxisFactor]]:
    """Canonical form of sin/cos with a possibly negative harmonic."""
    if kind == TrigKind.CONST:
        return [(sympy.Integer(1), _CONST)]
    if m == 0:
        if kind == TrigKind.SIN:
            return []
        return [(sympy.Integer(1), _CONST)]
    sign = 1
    if m < 0:
        m = -m
        if kind == TrigKind.SIN:
            sign = -1
    _check_harmonic(m)
    return [(sympy.Integer(sign), (kind, m))]


def _axis_product(a: AxisFactor, b: AxisFactor) -> List[Tuple[sympy.Expr, AxisFactor]]:
    """Product of two single-axis factors as a list of (coefficient, factor)."""
    if a[0] == TrigKind.CONST:
        return [(sympy.Integer(1), b)]
    if b[0] == TrigKind.CONST:
        return [(sympy.Integer(1), a)]

    (ka, ma), (kb, mb) = a, b
    if ka == TrigKind.SIN and kb == TrigKind.SIN:
        # sin a sin b = (cos(a-b) - cos(a+b))/2
        parts = [(_HALF, TrigKind.COS, ma - mb), (-_HALF, TrigKind.COS, ma + mb)]
    elif ka == TrigKind.COS and kb == TrigKind.COS:
        parts = [(_HALF, TrigKind.COS, ma - mb), (_HALF, TrigKind.COS, ma + mb)]
    elif ka == TrigKind.SIN:
        # sin a cos b = (sin(a+b) + sin(a-b))/2
        parts = [(_HALF, TrigKind.SIN, ma + mb), (_HALF, TrigKind.SIN, ma - mb)]
    else:
        parts = [(_HALF, TrigKind.SIN, ma + mb), (_HALF, TrigKind.SIN, mb - ma)]

    out: List[Tuple[sympy.Expr, AxisFactor]] = []
    for coef, kind, m in parts:
        for sign, factor in _signed_factor(kind, m):
            out.append((coef * sign, factor))
    return out


def is_exact_zero(expr: sympy.Expr) -> bool:
    if expr == 0:
        return True
    expanded = sympy.expand(expr)
    if expanded == 0:
        return True
    if expanded.has(sympy.Float):
        return False
    # a clearly nonzero sample settles it without simplification
    symbols = sorted(expanded.free_symbols, key=str)
    sample = expanded.subs({s: sympy.Rational(7 + 3 * i, 5) for i, s in enumerate(symbols)})
    if abs(complex(sympy.N(sample, 30))) > 1e-20:
        return False
    if sympy.simplify(expanded) == 0:
        return True
    return expanded.is_number and expanded.equals(0) is True


class TrigPoly:
    """
    Canonical sum of separable trigonometric terms.

    Examples:
        >>> s = TrigPoly.monomial(1, x=(TrigKind.SIN, 1))
        >>> sorted(str(c) for c in (s * s).terms.values())
        ['-1/2', '1/2']
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[TermKey, sympy.Expr]] = None):
        self.terms: Dict[TermKey, sympy.Expr] = {}
        for key, coef in (terms or {}).items():
            if coef != 0:
                self.terms[key] = coef

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls()

    @classmethod
    def constant(cls, value: Any) -> "TrigPoly":
        return cls({_UNIT_KEY: sympy.sympify(value)})

    @classmethod
    def monomial(
        cls,
        coefficient: Any,
        x: Tuple[TrigKind, int] = _CONST,
        y: Tuple[TrigKind, int] = _CONST,
        z: Tuple[TrigKind, int] = _CONST,
    ) -> "TrigPoly":
        """
        Single term ``coefficient · f_x(x) f_y(y) f_z(z)``.

        A sine with harmonic 0 on any axis yields the zero polynomial.
        """
        key = []
        coef = sympy.sympify(coefficient)
        for axis, (kind, m) in enumerate((x, y, z)):
            factor = TrigFactor(axis, TrigKind(kind), m)
            if factor.is_zero:
                return cls.zero()
            key.append(factor.canonical())
        return cls({tuple(key): coef})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"TrigPoly({self.as_expr()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        terms = dict(self.terms)
        for key, coef in other.terms.items():
            terms[key] = terms.get(key, 0) + coef
        return TrigPoly(terms).canonical()

    def __neg__(self) -> "TrigPoly":
        return TrigPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def __mul__(self, other: Union["TrigPoly", Any]) -> "TrigPoly":
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor: Any) -> "TrigPoly":
        factor = sympy.sympify(factor)
        if factor == 0:
            return TrigPoly.zero()
        return TrigPoly({k: c * factor for k, c in self.terms.items()})

    def canonical(self) -> "TrigPoly":
        """Merge nothing further, expand coefficients and drop exact zeros."""
        terms = {}
        for key, coef in self.terms.items():
            coef = sympy.expand(coef)
            if coef != 0:
                terms[key] = coef
        return TrigPoly(terms)

    def is_zero(self) -> bool:
        return all(is_exact_zero(c) for c in self.terms.values())

    def max_harmonic(self) -> int:
        return max(
            (m for key in self.terms for (_, m) in key),
            default=0,
        )

    def factors(self, key: TermKey) -> List[TrigFactor]:
        return [TrigFactor(axis, kind, m) for axis, (kind, m) in enumerate(key)]

    def derivative(self, axis: int, length: sympy.Expr) -> "TrigPoly":
        """
        Partial derivative along ``axis`` for a side of ``length``.

        d/dx sin(πm x/L) = (πm/L) cos(πm x/L) and
        d/dx cos(πm x/L) = -(πm/L) sin(πm x/L).
        """
        terms: Dict[TermKey, sympy.Expr] = {}
        for key, coef in self.terms.items():
            kind, m = key[axis]
            if kind == TrigKind.CONST:
                continue
            k = sympy.pi * m / length
            new_kind = TrigKind.COS if kind == TrigKind.SIN else TrigKind.SIN
            sign = 1 if kind == TrigKind.SIN else -1
            new_key = list(key)
            new_key[axis] = (new_kind, m)
            new_key_t: TermKey = tuple(new_key)  # type: ignore[assignment]
            terms[new_key_t] = terms.get(new_key_t, 0) + sign * k * coef
        return TrigPoly(terms).canonical()

    def subs(self, values: Dict[Any, Any]) -> "TrigPoly":
        return TrigPoly({k: c.subs(values) for k, c in self.terms.items()})

    def as_expr(self, coords: Optional[Sequence[sympy.Symbol]] = None,
                lengths: Optional[Sequence[sympy.Expr]] = None) -> sympy.Expr:
        """Plain sympy expression in x, y, z (for display and checks)."""
        coords = coords or sympy.symbols("x y z", real=True)
        lengths = lengths or sympy.symbols("L_x L_y L_z", positive=True)
        total = sympy.Integer(0)
        for key, coef in self.terms.items():
            term = coef
            for axis, (kind, m) in enumerate(key):
                arg = sympy.pi * m * coords[axis] / lengths[axis]
                if kind == TrigKind.SIN:
                    term *= sympy.sin(arg)
                elif kind == TrigKind.COS:
                    term *= sympy.cos(arg)
            total += term
        return total

    def evaluate(
        self,
        points: np.ndarray,
        lengths: Sequence[float],
        subs: Optional[Dict[Any, Any]] = None,
    ) -> np.ndarray:
        """
        Evaluate at an (N, 3) array of points.

        Args:
            points: Cartesian points
            lengths: Float side lengths
            subs: Values for symbols appearing in the coefficients

        Returns:
            Complex array of shape (N,)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.zeros(points.shape[0], dtype=complex)
        for key, coef in self.terms.items():
            c = complex(sympy.N(coef.subs(subs) if subs else coef))
            term = np.full(points.shape[0], c, dtype=complex)
            for axis, (kind, m) in enumerate(key):
                arg = np.pi * m * points[:, axis] / lengths[axis]
                if kind == TrigKind.SIN:
                    term *= np.sin(arg)
                elif kind == TrigKind.COS:
                    term *= np.cos(arg)
            values += term
        return values


def multiply(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    """
    Product of two trigonometric polynomials in canonical form.

    Args:
        a: Left factor
        b: Right factor

    Returns:
        Canonical product

    Raises:
        HarmonicOverflowError: If a harmonic exceeds MAX_HARMONIC

    Examples:
        >>> one = TrigPoly.constant(1)
        >>> s = TrigPoly.monomial(2, y=(TrigKind.SIN, 3))
        >>> multiply(one, s) == s
        True
    """
    terms: Dict[TermKey, sympy.Expr] = {}
    for key_a, coef_a in a.terms.items():
        for key_b, coef_b in b.terms.items():
            per_axis = [_axis_product(fa, fb) for fa, fb in zip(key_a, key_b)]
            if any(not parts for parts in per_axis):
                continue
            base = coef_a * coef_b
            for combo in itertools.product(*per_axis):
                coef = base
                key = []
                for c, factor in combo:
                    coef = coef * c
                    key.append(factor)
                key_t: TermKey = tuple(key)  # type: ignore[assignment]
                terms[key_t] = terms.get(key_t, 0) + coef
    return TrigPoly(terms).canonical()


@dataclass(frozen=True)
class VectorTrigPoly:
    """
    Three-component field profile over a box.

    The scalar ``prefactor`` multiplies every component; it is kept apart
    so normalization factors stay readable.

    Attributes:
        components: TrigPoly for the x, y and z components
        prefactor: Common scalar factor
        geometry: Box the profile lives in
    """

    components: Tuple[TrigPoly, TrigPoly, TrigPoly]
    geometry: CavityGeometry
    prefactor: sympy.Expr = field(default_factory=lambda: sympy.Integer(1))

    def __getitem__(self, axis: int) -> TrigPoly:
        return self.components[axis]

    def scaled_components(self) -> Tuple[TrigPoly, TrigPoly, TrigPoly]:
        return tuple(c.scale(self.prefactor) for c in self.components)  # type: ignore[return-value]

    def scale(self, factor: Any) -> "VectorTrigPoly":
        return VectorTrigPoly(self.components, self.geometry, self.prefactor * sympy.sympify(factor))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def max_harmonic(self) -> int:
        return max(c.max_harmonic() for c in self.components)

    def curl(self) -> "VectorTrigPoly":
        """Curl computed term by term; the prefactor carries over."""
        lx, ly, lz = self.geometry.lengths
        ax, ay, az = self.components
        cx = az.derivative(1, ly) - ay.derivative(2, lz)
        cy = ax.derivative(2, lz) - az.derivative(0, lx)
        cz = ay.derivative(0, lx) - ax.derivative(1, ly)
        return VectorTrigPoly((cx, cy, cz), self.geometry, self.prefactor)

    def divergence(self) -> TrigPoly:
        lx, ly, lz = self.geometry.lengths
        ax, ay, az = self.components
        div = ax.derivative(0, lx) + ay.derivative(1, ly) + az.derivative(2, lz)
        return div.scale(self.prefactor)

    def evaluate(
        self, points: np.ndarray, subs: Optional[Dict[Any, Any]] = None
    ) -> np.ndarray:
        """Evaluate at (N, 3) points; returns an (N, 3) complex array."""
        lengths = self.geometry.numeric_lengths(subs)
        pref = complex(sympy.N(self.prefactor.subs(subs) if subs else self.prefactor))
        return np.stack(
            [pref * c.evaluate(points, lengths, subs) for c in self.components], axis=-1
        )


def dot(u: VectorTrigPoly, v: VectorTrigPoly) -> TrigPoly:
    """
    Pointwise dot product u·v with both prefactors folded in.

    Raises:
        GeometryError: If the profiles live in different boxes
    """
    if u.geometry != v.geometry:
        raise GeometryError("cannot combine profiles from different geometries")
    total = TrigPoly.zero()
    for a, b in zip(u.components, v.components):
        if a and b:
            total = total + multiply(a, b)
    return total.scale(u.prefactor * v.prefactor)


@dataclass(frozen=True)
class ExactValue:
    """
    Exact result of a box integral.

    ``inverse_pi_degree`` is the largest power of 1/π produced by odd sine
    integrals among the contributing terms.
    """

    expr: sympy.Expr
    inverse_pi_degree: int = 0

    @classmethod
    def zero(cls) -> "ExactValue":
        return cls(sympy.Integer(0), 0)

    @property
    def is_zero(self) -> bool:
        return is_exact_zero(self.expr)

    def is_close_to_zero(
        self, tolerance: float = 1e-12, subs: Optional[Dict[Any, Any]] = None
    ) -> bool:
        if self.is_zero:
            return True
        return abs(self.to_complex(subs)) < tolerance

    def __add__(self, other: Union["ExactValue", Any]) -> "ExactValue":
        if isinstance(other, ExactValue):
            return ExactValue(self.expr + other.expr, max(self.inverse_pi_degree, other.inverse_pi_degree))
        return ExactValue(self.expr + sympy.sympify(other), self.inverse_pi_degree)

    __radd__ = __add__

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.expr, self.inverse_pi_degree)

    def __sub__(self, other: Union["ExactValue", Any]) -> "ExactValue":
        return self + (-other)

    def __mul__(self, other: Union["ExactValue", Any]) -> "ExactValue":
        if isinstance(other, ExactValue):
            return ExactValue(self.expr * other.expr, self.inverse_pi_degree + other.inverse_pi_degree)
        return ExactValue(self.expr * sympy.sympify(other), self.inverse_pi_degree)

    __rmul__ = __mul__

    def simplify(self) -> "ExactValue":
        if self.is_zero:
            return ExactValue.zero()
        return ExactValue(sympy.simplify(self.expr), self.inverse_pi_degree)

    def subs(self, values: Dict[Any, Any]) -> "ExactValue":
        return ExactValue(self.expr.subs(values), self.inverse_pi_degree)

    def to_complex(self, subs: Optional[Dict[Any, Any]] = None) -> complex:
        expr = self.expr.subs(subs) if subs else self.expr
        if expr.free_symbols:
            raise GeometryError(
                f"value depends on {sorted(map(str, expr.free_symbols))}; provide numbers"
            )
        return complex(sympy.N(expr, 20))

    def to_float(self, subs: Optional[Dict[Any, Any]] = None) -> float:
        return self.to_complex(subs).real

    def __float__(self) -> float:
        return self.to_float()

    def __str__(self) -> str:
        return str(self.expr)


def _axis_integral(
    kind: TrigKind, m: int, length: sympy.Expr
) -> Tuple[sympy.Expr, int]:
    """∫_0^L of one factor, with the 1/π degree it contributes."""
    if kind == TrigKind.CONST:
        return length, 0
    if kind == TrigKind.COS:
        return sympy.Integer(0), 0
    if m % 2 == 0:
        return sympy.Integer(0), 0
    return 2 * length / (sympy.pi * m), 1


def integrate_box(p: TrigPoly, geom: CavityGeometry) -> ExactValue:
    """
    Exact integral over the box [0,L_x]×[0,L_y]×[0,L_z].

    Per axis ∫cos(πm x/L) = L·δ_m0 and ∫sin(πm x/L) = L(1-(-1)^m)/(πm).

    Examples:
        >>> geom = CavityGeometry.cube(1)
        >>> integrate_box(TrigPoly.constant(3), geom).expr
        3
    """
    total = sympy.Integer(0)
    degree = 0
    for key, coef in p.terms.items():
        value = coef
        term_degree = 0
        for axis, (kind, m) in enumerate(key):
            integral, d = _axis_integral(kind, m, geom.lengths[axis])
            if integral == 0:
                value = None
                break
            value = value * integral
            term_degree += d
        if value is None:
            continue
        total += value
        degree = max(degree, term_degree)
    value = ExactValue(total, degree)
    if value.is_zero:
        return ExactValue.zero()
    return value


def _pair_integral(
    fa: AxisFactor, fb: AxisFactor, length: sympy.Expr
) -> Tuple[sympy.Expr, int]:
    """∫_0^L of the product of two single-axis factors."""
    total = sympy.Integer(0)
    degree = 0
    for coef, (kind, m) in _axis_product(fa, fb):
        integral, d = _axis_integral(kind, m, length)
        if integral != 0:
            total += coef * integral
            degree = max(degree, d)
    return total, degree


def integrate_product(a: TrigPoly, b: TrigPoly, geom: CavityGeometry) -> ExactValue:
    """
    Exact box integral of ``a·b`` without forming the product.

    Equal to ``integrate_box(multiply(a, b), geom)``; separability lets
    each pair of terms factor into three one-dimensional integrals.
    """
    lengths = geom.lengths
    pair_cache: Dict[Tuple[int, AxisFactor, AxisFactor], Tuple[sympy.Expr, int]] = {}
    total = sympy.Integer(0)
    degree = 0
    for key_a, coef_a in a.terms.items():
        for key_b, coef_b in b.terms.items():
            value = coef_a * coef_b
            term_degree = 0
            for axis in range(3):
                ck = (axis, key_a[axis], key_b[axis])
                if ck not in pair_cache:
                    pair_cache[ck] = _pair_integral(key_a[axis], key_b[axis], lengths[axis])
                integral, d = pair_cache[ck]
                if integral == 0:
                    value = None
                    break
                value = value * integral
                term_degree += d
            if value is None:
                continue
            total += value
            degree = max(degree, term_degree)
    value = ExactValue(total, degree)
    if value.is_zero:
        return ExactValue.zero()
    return value


def _default_points(max_harmonic: int) -> int:
    return max(2 * max_harmonic + 1, 3 * max_harmonic + 16)


def integrate_numeric(
    p: TrigPoly,
    geom: CavityGeometry,
    points_per_axis: Optional[int] = None,
    subs: Optional[Dict[Any, Any]] = None,
) -> Union[float, complex]:
    """
    Tensor-product Gauss-Legendre estimate of the box integral.

    Args:
        p: Polynomial to integrate
        geom: Box geometry
        points_per_axis: Nodes per axis (default max(2h+1, 3h+16))
        subs: Values for symbols in lengths and coefficients

    Returns:
        The integral as a float (complex if the imaginary part survives)

    Raises:
        QuadratureError: If fewer than 2h+1 nodes are requested
    """
    h = p.max_harmonic()
    required = 2 * h + 1
    n = points_per_axis if points_per_axis is not None else _default_points(h)
    if n < required:
        raise QuadratureError(
            f"{n} points per axis cannot resolve harmonic {h}; need at least {required}"
        )

    lengths = geom.numeric_lengths(subs)
    nodes, weights = np.polynomial.legendre.leggauss(n)
    axis_rules = []
    for length in lengths:
        axis_rules.append(((nodes + 1.0) * length / 2.0, weights * length / 2.0))

    factor_cache: Dict[Tuple[int, AxisFactor], float] = {}

    def axis_value(axis: int, factor: AxisFactor) -> float:
        if (axis, factor) not in factor_cache:
            x, w = axis_rules[axis]
            kind, m = factor
            if kind == TrigKind.CONST:
                f = np.ones_like(x)
            elif kind == TrigKind.SIN:
                f = np.sin(np.pi * m * x / lengths[axis])
            else:
                f = np.cos(np.pi * m * x / lengths[axis])
            factor_cache[(axis, factor)] = float(np.dot(w, f))
        return factor_cache[(axis, factor)]

    total = 0j
    for key, coef in p.terms.items():
        c = complex(sympy.N(coef.subs(subs) if subs else coef))
        total += c * axis_value(0, key[0]) * axis_value(1, key[1]) * axis_value(2, key[2])

    logger.debug("quadrature with %d points per axis over %d terms", n, len(p))
    if total.imag == 0 or abs(total.imag) <= 1e-15 * max(1.0, abs(total.real)):
        return total.real
    return total


def sum_values(values: Iterable[ExactValue]) -> ExactValue:
    total = ExactValue.zero()
    for v in values:
        total = total + v
    return total
