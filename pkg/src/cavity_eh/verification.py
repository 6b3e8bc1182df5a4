"""
Cross-checks of the engine against independently known results.

Each check recomputes a quantity with the engine and compares it with a
closed form, a tabulated constant or a structural identity. The suite
backs the ``cavity-eh verify`` command.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import sympy
from pydantic import BaseModel, Field

from cavity_eh.amplitudes import (
    TE011,
    TM110,
    TM130,
    matrix_element,
    merge_3to1_1d_spec,
    merge_3to1_3d_spec,
    scatter_2to2_closed_form,
    scatter_2to2_spec,
)
from cavity_eh.experiment import (
    audit_dimensions,
    g1_squared,
    g1_tilde_squared,
    mean_signal_quanta,
    mean_signal_quanta_closed_form,
)
from cavity_eh.models import CavityGeometry, Couplings, ExperimentConfig, ModeId
from cavity_eh.modes import electric_profile, magnetic_profile, mode_frequency
from cavity_eh.planewave import planewave_consistency
from cavity_eh.resonance import aspect_ratio_for_resonance
from cavity_eh.trig import dot, integrate_box, is_exact_zero
from cavity_eh.units import convert_units, get_constants

logger = logging.getLogger(__name__)

RESONANT_R = sympy.sqrt(sympy.sqrt(5) - 2)


class CheckResult(BaseModel):
    """Outcome of one cross-check."""

    name: str = Field(..., description="Check name")
    passed: bool = Field(..., description="Whether the check passed")
    detail: str = Field("", description="Computed value or failure reason")


def _close(value: float, expected: float, rel: float) -> bool:
    return abs(value - expected) <= rel * abs(expected)


def check_profile_normalisation() -> Tuple[bool, str]:
    geom = CavityGeometry.from_ratio(1, 2, 3)
    for mode in (TE011, TM110, ModeId.te(1, 2, 1), ModeId.tm(1, 1, 2)):
        a = electric_profile(geom, mode)
        b = magnetic_profile(geom, mode)
        norm = integrate_box(dot(a, a), geom).expr
        if not is_exact_zero(norm - geom.volume):
            return False, f"{mode.label}: ∫|A|² = {norm}"
        curl_norm = integrate_box(dot(b, b), geom).expr
        if not is_exact_zero(curl_norm - geom.volume * mode_frequency(geom, mode) ** 2):
            return False, f"{mode.label}: Rayleigh identity fails"
    return True, "∫|A|² = V and ∫|curl A|² = Vω² for four modes"


def check_one_d_merge_vanishes() -> Tuple[bool, str]:
    geom = CavityGeometry.symbolic()
    for n, p, pols in ((1, 1, "yyyy"), (1, 2, "yyzz"), (2, 1, "zzyy")):
        amplitude = matrix_element(merge_3to1_1d_spec(geom, n, p, pols))
        if not amplitude.is_zero:
            return False, f"n={n}, p={p}, {pols}: {amplitude.total}"
    return True, "slab merges are exact zeros"


def check_third_harmonic_merge_vanishes() -> Tuple[bool, str]:
    geom = CavityGeometry.from_ratio(1, 1, 2)
    spec = merge_3to1_3d_spec(geom, [TE011] * 3, ModeId.te(0, 3, 3))
    amplitude = matrix_element(spec)
    return amplitude.is_zero, f"TE011³ -> TE033: {amplitude.total}"


def check_resonant_aspect_ratio() -> Tuple[bool, str]:
    r = aspect_ratio_for_resonance(TE011, TM110, TM130)
    if r is None:
        return False, "no root found"
    return abs(r**2 + 2 - math.sqrt(5)) < 1e-12, f"r = {r:.15f}"


def check_m22_closed_form() -> Tuple[bool, str]:
    geom = CavityGeometry.one_one_r(RESONANT_R)
    couplings = Couplings()
    value = matrix_element(scatter_2to2_spec(geom), couplings).total.to_float()
    expected = float(scatter_2to2_closed_form(RESONANT_R, couplings.beta))
    return _close(value, expected, 1e-9), f"M = {value:.6f} κ/L_z⁵ (closed form {expected:.6f})"


def check_form_factors() -> Tuple[bool, str]:
    r = math.sqrt(math.sqrt(5) - 2)
    g1, g1t = g1_squared(r, 1.75), g1_tilde_squared(r, 1.75)
    ok = _close(g1, 4.6196, 1e-4) and _close(g1t, 3.3336, 1e-4)
    return ok, f"G1² = {g1:.4f}, G̃1² = {g1t:.4f}"


def check_planewave_slab() -> Tuple[bool, str]:
    report = planewave_consistency(merge_3to1_1d_spec(CavityGeometry.symbolic(), 1, 1))
    ok = (
        report.total_tuples == 16
        and report.survivors == 2
        and report.all_collinear
        and report.consistent
    )
    return ok, f"{report.survivors} of {report.total_tuples} tuples survive"


def check_tesla_conversion() -> Tuple[bool, str]:
    value = convert_units(1, "T", "eV^2")
    return _close(value, 195.35, 1e-4), f"1 T = {value:.3f} eV²"


def check_kappa_eh() -> Tuple[bool, str]:
    value = get_constants().kappa_eh
    return _close(value, 8.68e-30, 5e-3), f"κ = {value:.4e} eV⁻⁴"


def check_dimensions() -> Tuple[bool, str]:
    audit = audit_dimensions()
    return audit["ok"], "all exponents match" if audit["ok"] else str(audit["mismatches"])


def check_signal_quanta_paths() -> Tuple[bool, str]:
    cfg = ExperimentConfig(pump_field=0.1)
    direct = mean_signal_quanta(cfg)
    closed = mean_signal_quanta_closed_form(cfg)
    return _close(direct, closed, 1e-8), f"N_s = {direct:.6e} (closed form {closed:.6e})"


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("profile_normalisation", check_profile_normalisation),
    ("one_d_merge_vanishes", check_one_d_merge_vanishes),
    ("third_harmonic_merge_vanishes", check_third_harmonic_merge_vanishes),
    ("planewave_slab", check_planewave_slab),
    ("resonant_aspect_ratio", check_resonant_aspect_ratio),
    ("m22_closed_form", check_m22_closed_form),
    ("form_factors", check_form_factors),
    ("tesla_conversion", check_tesla_conversion),
    ("kappa_eh", check_kappa_eh),
    ("dimensions", check_dimensions),
    ("signal_quanta_paths", check_signal_quanta_paths),
]


def run_verification(names: Optional[List[str]] = None) -> List[CheckResult]:
    """
    Run the cross-check suite.

    Args:
        names: Subset of check names to run (all when None)

    Returns:
        One CheckResult per check; exceptions count as failures

    Raises:
        ValueError: If an unknown check name is requested
    """
    known = dict(CHECKS)
    if names:
        unknown = [n for n in names if n not in known]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")
    results = []
    for name, check in CHECKS:
        if names and name not in names:
            continue
        try:
            passed, detail = check()
        except Exception as e:
            logger.exception("check %s raised", name)
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(CheckResult(name=name, passed=passed, detail=detail))
    return results
