"""
Cavity eigenmodes of a rectangular box and of the 1-D slab.

Profiles are exact VectorTrigPoly values normalised so that the box
integral of |A|² equals the volume. Magnetic profiles are the curl of the
electric profile computed term by term.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from cavity_eh.cache import get_cache
from cavity_eh.exceptions import ModeValidationError
from cavity_eh.models import CavityGeometry, ModeFamily, ModeId
from cavity_eh.trig import TrigKind, TrigPoly, VectorTrigPoly

logger = logging.getLogger(__name__)

S, C = TrigKind.SIN, TrigKind.COS


def validate_mode(mode: ModeId) -> ModeId:
    """
    Check that the mode eigenfunction is not identically zero.

    Args:
        mode: Mode label

    Returns:
        The same mode

    Raises:
        ModeValidationError: TM with n = 0 or p = 0, TE with q = 0 or
            n = p = 0, or a 1-D mode with n = 0

    Examples:
        >>> validate_mode(ModeId.parse("TE011")).label
        'TE011'
    """
    n, p, q = mode.indices
    if mode.is_one_d:
        if n < 1:
            raise ModeValidationError(f"{mode.label}: 1-D modes need n >= 1")
        if p or q:
            raise ModeValidationError(f"{mode.label}: 1-D modes carry a single index")
    elif mode.family == ModeFamily.TM:
        if n == 0 or p == 0:
            raise ModeValidationError(f"{mode.label}: TM modes need n >= 1 and p >= 1")
    elif mode.family == ModeFamily.TE:
        if q == 0:
            raise ModeValidationError(f"{mode.label}: TE modes need q >= 1")
        if n == 0 and p == 0:
            raise ModeValidationError(f"{mode.label}: TE modes need n or p nonzero")
    return mode


def wavevector(
    geom: CavityGeometry, mode: ModeId
) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
    """Exact (k_x, k_y, k_z) = (πn/L_x, πp/L_y, πq/L_z)."""
    validate_mode(mode)
    n, p, q = mode.indices
    return (
        sympy.pi * n / geom.lx,
        sympy.pi * p / geom.ly,
        sympy.pi * q / geom.lz,
    )


def mode_frequency(geom: CavityGeometry, mode: ModeId) -> sympy.Expr:
    """
    Angular frequency ω = |k|.

    Examples:
        >>> geom = CavityGeometry.cube(1)
        >>> mode_frequency(geom, ModeId.parse("TE011"))
        sqrt(2)*pi
    """
    kx, ky, kz = wavevector(geom, mode)
    if mode.is_one_d:
        return kx
    return sympy.sqrt(kx**2 + ky**2 + kz**2)


def _one_d_profile(geom: CavityGeometry, mode: ModeId) -> VectorTrigPoly:
    components = [TrigPoly.zero(), TrigPoly.zero(), TrigPoly.zero()]
    components[mode.polarization_axis] = TrigPoly.monomial(1, x=(S, mode.n))
    return VectorTrigPoly(tuple(components), geom, sympy.sqrt(2))


def _box_profile(geom: CavityGeometry, mode: ModeId) -> VectorTrigPoly:
    n, p, q = mode.indices
    kx, ky, kz = wavevector(geom, mode)
    kt = sympy.sqrt(kx**2 + ky**2)

    if mode.family == ModeFamily.TM:
        prefactor = sympy.sqrt(4 * (2 - (1 if q == 0 else 0))) / mode_frequency(geom, mode)
        components = (
            TrigPoly.monomial(kx * kz / kt, x=(C, n), y=(S, p), z=(S, q)),
            TrigPoly.monomial(ky * kz / kt, x=(S, n), y=(C, p), z=(S, q)),
            TrigPoly.monomial(-kt, x=(S, n), y=(S, p), z=(C, q)),
        )
    else:
        deltas = (1 if n == 0 else 0) + (1 if p == 0 else 0)
        prefactor = sympy.sqrt(4 * (2 - deltas))
        components = (
            TrigPoly.monomial(ky / kt, x=(C, n), y=(S, p), z=(S, q)),
            TrigPoly.monomial(-kx / kt, x=(S, n), y=(C, p), z=(S, q)),
            TrigPoly.zero(),
        )
    return VectorTrigPoly(components, geom, prefactor)


def electric_profile(geom: CavityGeometry, mode: ModeId) -> VectorTrigPoly:
    """
    Normalised eigenprofile 𝓐 of a mode.

    TM modes carry √(4(2-δ_q0))/ω, TE modes √(4(2-δ_n0-δ_p0)); the 1-D
    profile is √2·sin(k_n x) along the polarisation axis. In every case
    ∫_V |𝓐|² = V.

    Raises:
        ModeValidationError: If the mode is invalid
    """
    validate_mode(mode)

    def build() -> VectorTrigPoly:
        if mode.is_one_d:
            return _one_d_profile(geom, mode)
        return _box_profile(geom, mode)

    return get_cache().get_or_compute(("electric_profile", geom.cache_key(), mode), build)


def magnetic_profile(geom: CavityGeometry, mode: ModeId) -> VectorTrigPoly:
    """Curl of the electric profile; satisfies ∫|curl 𝓐|² = V·ω²."""
    return get_cache().get_or_compute(
        ("magnetic_profile", geom.cache_key(), mode),
        lambda: electric_profile(geom, mode).curl(),
    )


def divergence(profile: VectorTrigPoly) -> TrigPoly:
    return profile.divergence()


def evaluate(
    profile: VectorTrigPoly, points: np.ndarray, subs: Optional[Dict[Any, Any]] = None
) -> np.ndarray:
    return profile.evaluate(points, subs)


@dataclass(frozen=True)
class PlaneWaveComponent:
    """
    One travelling-wave piece of a standing mode.

    The mode profile equals the sum of
    ``coefficient · polarization · exp(i k·x)`` over its components.
    ``harmonics`` holds the signed integer indices behind ``wavevector``.
    """

    coefficient: sympy.Expr
    wavevector: Tuple[sympy.Expr, sympy.Expr, sympy.Expr]
    polarization: Tuple[sympy.Expr, sympy.Expr, sympy.Expr]
    harmonics: Tuple[int, int, int]

    def is_transverse(self) -> bool:
        k_dot_e = sum(k * e for k, e in zip(self.wavevector, self.polarization))
        return sympy.simplify(k_dot_e) == 0


def _expansion(kind: TrigKind, sign: int) -> sympy.Expr:
    """Weight of exp(i·sign·θ) in sin θ or cos θ."""
    if kind == TrigKind.SIN:
        return sympy.Integer(sign) / (2 * sympy.I)
    if kind == TrigKind.COS:
        return sympy.Rational(1, 2)
    return sympy.Integer(1)


def decompose_plane_waves(
    geom: CavityGeometry, mode: ModeId
) -> List[PlaneWaveComponent]:
    """
    Split a mode profile into travelling plane waves.

    Each axis with a nonzero harmonic splits into ±k; the coefficient is
    the product of the sine weights ±1/(2i) over those axes, and the
    polarisation absorbs the remaining profile amplitude. 1-D modes give
    two entries, TE011 gives four and a general 3-D mode gives eight.

    Returns:
        Components ordered by their signed harmonics
    """
    profile = electric_profile(geom, mode)
    k = wavevector(geom, mode)
    indices = (mode.n, 0, 0) if mode.is_one_d else mode.indices
    active = [axis for axis in range(3) if indices[axis] != 0]

    result: List[PlaneWaveComponent] = []
    for signs in itertools.product((1, -1), repeat=len(active)):
        sign_of = dict(zip(active, signs))
        coefficient = sympy.Integer(1)
        for axis in active:
            coefficient *= _expansion(TrigKind.SIN, sign_of[axis])

        polarization = []
        for component in profile.components:
            amplitude = sympy.Integer(0)
            for key, coef in component.terms.items():
                weight = coef
                for axis, (kind, _) in enumerate(key):
                    if axis in sign_of:
                        weight *= _expansion(kind, sign_of[axis]) / _expansion(
                            TrigKind.SIN, sign_of[axis]
                        )
                amplitude += weight
            polarization.append(sympy.simplify(profile.prefactor * amplitude))

        harmonics = tuple(sign_of.get(axis, 0) * indices[axis] for axis in range(3))
        result.append(
            PlaneWaveComponent(
                coefficient=coefficient,
                wavevector=tuple(sign_of.get(axis, 0) * k[axis] for axis in range(3)),
                polarization=tuple(polarization),
                harmonics=harmonics,
            )
        )
    result.sort(key=lambda c: tuple(-h for h in c.harmonics))
    return result


def plane_wave_sum(
    components: Sequence[PlaneWaveComponent],
    points: np.ndarray,
    subs: Optional[Dict[Any, Any]] = None,
) -> np.ndarray:
    """Evaluate Σ c·ε·exp(i k·x) at (N, 3) points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    total = np.zeros(points.shape, dtype=complex)
    for comp in components:
        c = complex(sympy.N(comp.coefficient))
        k = np.array([float(sympy.N(v.subs(subs) if subs else v)) for v in comp.wavevector])
        e = np.array([complex(sympy.N(v.subs(subs) if subs else v)) for v in comp.polarization])
        phase = np.exp(1j * points @ k)
        total += c * phase[:, None] * e[None, :]
    return total


def enumerate_modes(
    max_index: int, families: Iterable[ModeFamily] = (ModeFamily.TE, ModeFamily.TM)
) -> List[ModeId]:
    """
    All valid modes with every index at most ``max_index``.

    1-D families yield n = 1..max_index.
    """
    modes: List[ModeId] = []
    for family in families:
        if family.is_one_d:
            modes.extend(ModeId(family=family, n=n) for n in range(1, max_index + 1))
            continue
        for n, p, q in itertools.product(range(max_index + 1), repeat=3):
            mode = ModeId(family=family, n=n, p=p, q=q)
            try:
                validate_mode(mode)
            except ModeValidationError:
                continue
            modes.append(mode)
    logger.debug("enumerated %d modes up to index %d", len(modes), max_index)
    return modes
