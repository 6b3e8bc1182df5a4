"""
Energy matching 2ω_pump = ω_sig1 + ω_sig2 over box geometries.

Within a family L_x:L_y:L_z = ρ/r : 1/r : 1 every box mode has
ω·L_z/π = √(r²A + B) with A = n²/ρ² + p² and B = q², so a mode triple
reduces to a scalar equation in r.
"""

import logging
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize

from cavity_eh.exceptions import DegenerateResonanceError, IncompatibleModesError
from cavity_eh.models import GeometryFamily, ModeId
from cavity_eh.modes import enumerate_modes, validate_mode

logger = logging.getLogger(__name__)

R_MIN = 1e-3
R_MAX = 1e2
GRID_POINTS = 10000
TANGENT_TOLERANCE = 1e-12
MAX_SCAN_INDEX = 8

FrequencyKey = Tuple[float, float]


class ResonanceHit(BaseModel):
    """
    A mode triple that is resonant at aspect ratio r.

    ``residual`` is |2ω_p - ω_1 - ω_2| in units of π/L_z.
    """

    model_config = ConfigDict(frozen=True)

    pump: ModeId = Field(..., description="Pump mode")
    sig1: ModeId = Field(..., description="First signal mode")
    sig2: ModeId = Field(..., description="Second signal mode")
    family: GeometryFamily = Field(default_factory=GeometryFamily, description="Geometry family")
    r: float = Field(..., gt=0, description="Aspect ratio L_z/L_y")
    residual: float = Field(..., ge=0, description="Energy mismatch in units of π/L_z")

    def to_row(self) -> Dict[str, object]:
        return {
            "pump": self.pump.label,
            "sig1": self.sig1.label,
            "sig2": self.sig2.label,
            "r": self.r,
            "residual": self.residual,
            "family": self.family.label,
        }

    @property
    def sort_key(self) -> Tuple[float, str, str, str]:
        return (self.r, self.pump.label, self.sig1.label, self.sig2.label)


def frequency_key(mode: ModeId, family: GeometryFamily) -> FrequencyKey:
    """(A, B) with ω·L_z/π = √(r²A + B)."""
    validate_mode(mode)
    if mode.is_one_d:
        raise IncompatibleModesError(f"{mode.label}: resonance scans use box modes")
    n, p, q = mode.indices
    return (n**2 / family.xy_ratio**2 + p**2, float(q**2))


def scaled_frequency(key: FrequencyKey, r: np.ndarray) -> np.ndarray:
    """ω·L_z/π for an array of aspect ratios."""
    a, b = key
    return np.sqrt(np.asarray(r, dtype=float) ** 2 * a + b)


def _mismatch(keys: Sequence[FrequencyKey]):
    pump, first, second = keys

    def f(r):
        return (
            2 * scaled_frequency(pump, r)
            - scaled_frequency(first, r)
            - scaled_frequency(second, r)
        )

    return f


def _grid(r_min: float, r_max: float, grid_points: int) -> np.ndarray:
    return np.logspace(np.log10(r_min), np.log10(r_max), grid_points)


def _scale(keys: Sequence[FrequencyKey], r: float) -> float:
    pump, first, second = keys
    return float(
        2 * scaled_frequency(pump, r) + scaled_frequency(first, r) + scaled_frequency(second, r)
    )


def _bisect(f, a: float, b: float) -> Tuple[float, float]:
    root = optimize.bisect(lambda x: float(f(x)), a, b, xtol=1e-14 * a, rtol=1e-14)
    return root, abs(float(f(root)))


def _dip_roots(
    f, keys: Sequence[FrequencyKey], a: float, middle: float, b: float
) -> List[Tuple[float, float]]:
    """
    Roots hidden around a grid minimum of |Δ| whose neighbours share its sign.

    The extremum of Δ on [a, b] either crosses zero, giving a root on each
    side, or touches it within TANGENT_TOLERANCE, giving a tangent root.
    """
    sign = 1.0 if f(middle) > 0 else -1.0
    best = optimize.minimize_scalar(
        lambda x: sign * float(f(x)),
        bounds=(a, b),
        method="bounded",
        options={"xatol": 1e-11 * b},
    )
    extremum = float(best.x)
    value = float(f(extremum))
    if abs(value) <= TANGENT_TOLERANCE * _scale(keys, extremum):
        return [(extremum, abs(value))]
    if sign * value < 0:
        return [_bisect(f, a, extremum), _bisect(f, extremum, b)]
    return []


def _dedupe(roots: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    unique: List[Tuple[float, float]] = []
    for root, residual in sorted(roots):
        if unique and abs(root - unique[-1][0]) <= 1e-10 * root:
            if residual < unique[-1][1]:
                unique[-1] = (root, residual)
            continue
        unique.append((root, residual))
    return unique


def _dips(values: np.ndarray) -> List[Tuple[int, int, int]]:
    """(lo, i, hi) for grid minima of |Δ| whose neighbours share the sign of Δ."""
    if len(values) < 2:
        return []
    magnitude = np.abs(values)
    same_left = values[1:-1] * values[:-2] > 0
    same_right = values[1:-1] * values[2:] > 0
    lower = (magnitude[1:-1] <= magnitude[:-2]) & (magnitude[1:-1] <= magnitude[2:])
    dips = [(i - 1, i, i + 1) for i in np.flatnonzero(same_left & same_right & lower) + 1]
    if values[0] * values[1] > 0 and magnitude[0] <= magnitude[1]:
        dips.append((0, 0, 1))
    if values[-1] * values[-2] > 0 and magnitude[-1] <= magnitude[-2]:
        dips.append((len(values) - 2, len(values) - 1, len(values) - 1))
    return dips


def roots_for_keys(
    keys: Sequence[FrequencyKey], r_min: float, r_max: float, grid_points: int
) -> List[Tuple[float, float]]:
    """
    Roots (r, |Δ|) of 2ω_p - ω_1 - ω_2 for three frequency keys.

    Sign changes between grid points are bisected. Every grid minimum of
    |Δ| whose neighbours share its sign is searched for a pair of close
    roots or a tangent root.
    """
    f = _mismatch(keys)
    grid = _grid(r_min, r_max, grid_points)
    values = f(grid)
    roots: List[Tuple[float, float]] = []
    for i in np.flatnonzero(values == 0):
        roots.append((float(grid[i]), 0.0))
    for i in np.flatnonzero(values[:-1] * values[1:] < 0):
        roots.append(_bisect(f, float(grid[i]), float(grid[i + 1])))

    for lo, i, hi in _dips(values):
        roots.extend(_dip_roots(f, keys, float(grid[lo]), float(grid[i]), float(grid[hi])))

    roots = _dedupe(roots)
    logger.debug("keys %s: %d roots on [%g, %g]", keys, len(roots), r_min, r_max)
    return roots


def resonance_roots(
    pump: ModeId,
    sig1: ModeId,
    sig2: ModeId,
    family: Optional[GeometryFamily] = None,
    r_min: float = R_MIN,
    r_max: float = R_MAX,
    grid_points: int = GRID_POINTS,
) -> List[ResonanceHit]:
    """
    Every root of 2ω_p - ω_1 - ω_2 in [r_min, r_max].

    Sign changes on the grid are refined with scipy's bisection to
    relative 10⁻¹⁴; grid minima of |Δ| are refined with a bounded scalar
    minimisation to find close root pairs and tangent roots.

    Raises:
        DegenerateResonanceError: If the condition holds for every r
        ModeValidationError: If a mode is invalid
    """
    family = family or GeometryFamily()
    keys = [frequency_key(m, family) for m in (pump, sig1, sig2)]
    if keys[0] == keys[1] == keys[2]:
        logger.warning("%s, %s, %s: resonance holds at every r", pump, sig1, sig2)
        raise DegenerateResonanceError(
            f"{pump.label}, {sig1.label}, {sig2.label} share one frequency function"
        )
    if not r_min < r_max:
        return []
    return [
        ResonanceHit(pump=pump, sig1=sig1, sig2=sig2, family=family, r=root, residual=residual)
        for root, residual in roots_for_keys(keys, r_min, r_max, grid_points)
    ]


def aspect_ratio_for_resonance(
    pump: ModeId,
    sig1: ModeId,
    sig2: ModeId,
    family: Optional[GeometryFamily] = None,
    r_min: float = R_MIN,
    r_max: float = R_MAX,
    grid_points: int = GRID_POINTS,
) -> Optional[float]:
    """
    Smallest resonant aspect ratio, or None.

    Examples:
        >>> r = aspect_ratio_for_resonance(
        ...     ModeId.parse("TE011"), ModeId.parse("TM110"), ModeId.parse("TM130"))
        >>> round(r, 10)
        0.4858682718
    """
    hits = resonance_roots(pump, sig1, sig2, family, r_min, r_max, grid_points)
    return hits[0].r if hits else None


def _candidate_pairs(
    pump: FrequencyKey,
    pairs: np.ndarray,
    keys: np.ndarray,
    s_min: float,
    s_max: float,
) -> np.ndarray:
    """
    Indices of signal pairs whose squared condition has a root s = r² in range.

    Squaring 2√(sA0+B0) = √(sA1+B1) + √(sA2+B2) twice gives a quadratic
    in s; genuine roots also satisfy α·s + γ >= 0.
    """
    a0, b0 = pump
    a1, b1 = keys[pairs[:, 0], 0], keys[pairs[:, 0], 1]
    a2, b2 = keys[pairs[:, 1], 0], keys[pairs[:, 1], 1]
    alpha = 4 * a0 - a1 - a2
    gamma = 4 * b0 - b1 - b2
    qa = alpha**2 - 4 * a1 * a2
    qb = 2 * alpha * gamma - 4 * (a1 * b2 + a2 * b1)
    qc = gamma**2 - 4 * b1 * b2

    keep = np.zeros(len(pairs), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = qb**2 - 4 * qa * qc
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        linear = np.where(qb != 0, -qc / qb, np.nan)
        candidates = [
            np.where(qa != 0, (-qb + sq) / (2 * qa), linear),
            np.where(qa != 0, (-qb - sq) / (2 * qa), np.nan),
        ]
    slack = 1e-9
    for s in candidates:
        valid = (
            np.isfinite(s)
            & (s >= s_min * (1 - slack))
            & (s <= s_max * (1 + slack))
            & (alpha * s + gamma >= -slack * (np.abs(alpha * s) + np.abs(gamma) + 1))
        )
        keep |= valid
    return np.flatnonzero(keep)


def scan_resonances(
    max_index: int = 4,
    r_range: Tuple[float, float] = (R_MIN, R_MAX),
    family: Optional[GeometryFamily] = None,
    grid_points: int = GRID_POINTS,
) -> List[ResonanceHit]:
    """
    All resonant (pump; sig1, sig2) box-mode triples with indices <= max_index.

    Frequency functions are grouped by (A, B); a vectorised quadratic
    screen over key triples selects candidates, which are confirmed with
    ``resonance_roots``. Unordered signal pairs appear once and triples
    sharing one frequency function are skipped.

    Returns:
        Hits sorted by (r, pump, sig1, sig2)

    Raises:
        ValueError: If max_index is outside 1..8
    """
    if not 1 <= max_index <= MAX_SCAN_INDEX:
        raise ValueError(f"max_index must be between 1 and {MAX_SCAN_INDEX}")
    family = family or GeometryFamily()
    r_min, r_max = r_range
    if not 0 < r_min < r_max:
        return []

    by_key: Dict[FrequencyKey, List[ModeId]] = defaultdict(list)
    for mode in enumerate_modes(max_index):
        by_key[frequency_key(mode, family)].append(mode)
    key_list = sorted(by_key)
    keys = np.array(key_list, dtype=float)
    first, second = np.triu_indices(len(key_list))
    pairs = np.stack([first, second], axis=1)
    logger.debug("%d frequency classes, %d signal pairs", len(key_list), len(pairs))

    hits: Dict[Tuple[str, str, str, float], ResonanceHit] = {}
    for pump_index, pump_key in enumerate(key_list):
        for pair_index in _candidate_pairs(pump_key, pairs, keys, r_min**2, r_max**2):
            i, j = pairs[pair_index]
            if pump_index == i == j:
                continue
            triple = (pump_key, key_list[i], key_list[j])
            for root, residual in roots_for_keys(triple, r_min, r_max, grid_points):
                for pump in by_key[pump_key]:
                    for a in by_key[key_list[i]]:
                        for b in by_key[key_list[j]]:
                            sig1, sig2 = sorted((a, b), key=lambda m: m.label)
                            key = (pump.label, sig1.label, sig2.label, round(root, 12))
                            if key not in hits:
                                hits[key] = ResonanceHit(
                                    pump=pump,
                                    sig1=sig1,
                                    sig2=sig2,
                                    family=family,
                                    r=root,
                                    residual=residual,
                                )
    return sorted(hits.values(), key=lambda h: h.sort_key)
