"""
Sensitivity estimate for signal generation by two pump modes.

The resonant 2→2 element is computed by the contraction engine in units
of κ/L_z⁵ at L_z = 1 and scaled to the physical box. The energy delta of
the probability is replaced by the dissipation time Q/ω of the signal
mode, and the Dicke radiometer equation turns the signal rate into a
measurement time.
"""

import logging
import math
from collections import OrderedDict
from typing import Any, Dict, List, Optional, Tuple

import sympy
from pydantic import BaseModel, Field

from cavity_eh.amplitudes import (
    matrix_element,
    resonance_bracket,
    scatter_2to2_spec,
)
from cavity_eh.cache import get_cache
from cavity_eh.exceptions import MissingPumpError, OffResonanceError
from cavity_eh.models import Couplings, ExperimentConfig, GeometryFamily, ModeId
from cavity_eh.resonance import (
    aspect_ratio_for_resonance,
    frequency_key,
    scaled_frequency,
)
from cavity_eh.units import UnitConstants, get_constants

logger = logging.getLogger(__name__)

# relative detuning accepted for a user-supplied aspect ratio
ASPECT_RATIO_RTOL = 1e-4

PUBLISHED_OMEGA_S_EV = 2.4e-6
PUBLISHED_TIME_SECONDS = 22.0


class ReportEntry(BaseModel):
    """One reported quantity with its unit tag."""

    name: str = Field(..., description="Quantity name")
    value: Optional[float] = Field(None, description="Value (None when undefined)")
    unit: str = Field("", description="Unit tag; empty means dimensionless")
    note: Optional[str] = Field(None, description="Remark shown next to the value")


class ExperimentReport(BaseModel):
    """Ordered list of computed and published quantities."""

    entries: List[ReportEntry] = Field(default_factory=list)

    def add(
        self,
        name: str,
        value: Optional[float],
        unit: str = "",
        note: Optional[str] = None,
    ) -> None:
        self.entries.append(ReportEntry(name=name, value=value, unit=unit, note=note))

    def get(self, name: str) -> Optional[float]:
        for entry in self.entries:
            if entry.name == name:
                return entry.value
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = OrderedDict((e.name, e.value) for e in self.entries)
        data["units"] = OrderedDict((e.name, e.unit) for e in self.entries)
        notes = OrderedDict((e.name, e.note) for e in self.entries if e.note)
        if notes:
            data["notes"] = notes
        return data


class MeasurementEstimate(BaseModel):
    """Time to reach the target SNR and the signal power behind it."""

    t_seconds: float = Field(..., description="Measurement time [s]")
    t_natural: float = Field(..., description="Measurement time [eV^-1]")
    signal_power_ev2: float = Field(..., description="Signal power [eV^2]")
    signal_power_watts: float = Field(..., description="Signal power [W]")
    omega_s: float = Field(..., description="Signal frequency [eV]")
    explanation: Optional[str] = Field(None, description="Why the time is infinite")


def _modes(cfg: ExperimentConfig) -> Tuple[ModeId, ModeId, ModeId]:
    return (
        ModeId.parse(cfg.pump),
        ModeId.parse(cfg.signals[0]),
        ModeId.parse(cfg.signals[1]),
    )


def _family(cfg: ExperimentConfig) -> GeometryFamily:
    return GeometryFamily(xy_ratio=cfg.xy_ratio)


def resonant_aspect_ratio(cfg: ExperimentConfig) -> float:
    """
    The aspect ratio used by the estimate.

    An explicit ratio must satisfy the energy condition to within
    ASPECT_RATIO_RTOL of the pump frequency.

    Raises:
        OffResonanceError: If the ratio is off resonance or no root exists
    """
    pump, sig1, sig2 = _modes(cfg)
    family = _family(cfg)
    if cfg.aspect_ratio is None:
        r = aspect_ratio_for_resonance(pump, sig1, sig2, family)
        if r is None:
            raise OffResonanceError(
                f"{pump.label} -> {sig1.label} + {sig2.label} has no resonant aspect "
                "ratio; run `cavity-eh resonance-scan` to find a resonant triple"
            )
        return r

    r = cfg.aspect_ratio
    w_p, w_1, w_2 = (float(scaled_frequency(frequency_key(m, family), r)) for m in (pump, sig1, sig2))
    if abs(2 * w_p - w_1 - w_2) > ASPECT_RATIO_RTOL * w_p:
        raise OffResonanceError(
            f"aspect ratio {r} is off resonance for {pump.label} -> {sig1.label} + "
            f"{sig2.label}; use `cavity-eh resonance-scan` or omit the aspect ratio"
        )
    return r


def scaled_frequencies(cfg: ExperimentConfig, r: float) -> Tuple[float, float, float]:
    """ω·L_z/π of pump, sig1 and sig2."""
    family = _family(cfg)
    return tuple(  # type: ignore[return-value]
        float(scaled_frequency(frequency_key(m, family), r)) for m in _modes(cfg)
    )


def invariant_parts(cfg: ExperimentConfig, r: float) -> Tuple[float, float]:
    """c_F4 and c_FFdual of the 2→2 element in units of 1/L_z⁵ (κ = 1)."""
    pump, sig1, sig2 = _modes(cfg)
    family = _family(cfg)

    def compute() -> Tuple[float, float]:
        geom = family.geometry(sympy.Float(r, 17), 1)
        spec = scatter_2to2_spec(geom, pump, (sig1, sig2))
        amplitude = matrix_element(spec, Couplings(kappa=1, beta=0))
        return (amplitude.c_f4.to_float(), amplitude.c_ffdual.to_float())

    key = ("invariant_parts", pump, sig1, sig2, family.xy_ratio, float(r))
    return get_cache().get_or_compute(key, compute)


def dimensionless_m22(cfg: ExperimentConfig, r: float) -> float:
    """M₂→₂·L_z⁵/κ from the contraction engine."""
    c_f4, c_ffdual = invariant_parts(cfg, r)
    return c_f4 + cfg.beta * c_ffdual


def _kappa(cfg: ExperimentConfig, consts: UnitConstants) -> float:
    return consts.kappa_eh if cfg.kappa is None else cfg.kappa


def g1_squared(r: float, beta: float) -> float:
    """8π²r⁴/(5^{3/2}(1+r²))·[5+2√5-β(√(1+r²)+√2r)²]² for the 1:1:r channel."""
    bracket = float(resonance_bracket(r, beta))
    return 8 * math.pi**2 * r**4 / (5**1.5 * (1 + r**2)) * bracket**2


def g1_tilde_squared(r: float, beta: float) -> float:
    """√2·[5+2√5-β(√(1+r²)+√2r)²]²/(5^{3/2}π r³(1+r²)²)."""
    bracket = float(resonance_bracket(r, beta))
    return math.sqrt(2) * bracket**2 / (5**1.5 * math.pi * r**3 * (1 + r**2) ** 2)


def dissipation_time(
    cfg: ExperimentConfig, omega_signal: float, consts: UnitConstants
) -> float:
    """Q/ω, or max(t_coh, Q/ω) when a coherence time is configured [eV⁻¹]."""
    tau = cfg.quality_factor / omega_signal
    if cfg.coherence_time is not None:
        tau = max(cfg.coherence_time * consts.second, tau)
    return tau


def probability_2to2(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> float:
    """
    P = |M₂→₂·τ|² with τ = Q/ω of the second signal.

    Equals G₁²κ²Q²/L_z⁸ in the 1:1:r channel at resonance.

    Raises:
        OffResonanceError: If the geometry is not resonant
    """
    consts = constants or get_constants()
    r = resonant_aspect_ratio(cfg)
    lz = cfg.lz * consts.meter
    m22 = _kappa(cfg, consts) * dimensionless_m22(cfg, r) / lz**5
    omega_signal = math.pi / lz * scaled_frequencies(cfg, r)[2]
    tau = dissipation_time(cfg, omega_signal, consts)
    return abs(m22 * tau) ** 2


def pump_occupations(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> Tuple[float, float]:
    """
    Mean quanta (N₁, N₂) of the pump and of the Bose partner.

    Explicit occupations win over coherent amplitudes (|ξ|², |η|²), which
    win over the field amplitude F₀ with N = F₀²V/(2ω).

    Raises:
        MissingPumpError: If none of the three is configured
    """
    if cfg.pump_occupations is not None:
        return cfg.pump_occupations
    if cfg.coherent_amplitudes is not None:
        xi, eta = cfg.coherent_amplitudes
        return (xi**2, eta**2)
    if cfg.pump_field is None:
        raise MissingPumpError(
            "set pump_field (F0), pump_occupations or coherent_amplitudes"
        )
    consts = constants or get_constants()
    r = resonant_aspect_ratio(cfg)
    lz = cfg.lz * consts.meter
    f0 = cfg.pump_field * consts.tesla
    geom = _family(cfg).geometry(sympy.Float(r, 17), sympy.Float(lz, 17))
    volume = float(geom.volume)
    w_p, w_1, _ = (math.pi / lz * w for w in scaled_frequencies(cfg, r))
    return (f0**2 * volume / (2 * w_p), f0**2 * volume / (2 * w_1))


def mean_signal_quanta(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> float:
    """
    ⟨N_s⟩ = 2⟨N₁⟩²⟨N₂⟩·P₂→₂.

    Raises:
        MissingPumpError: If no pump input is configured
        OffResonanceError: If the geometry is not resonant
    """
    n1, n2 = pump_occupations(cfg, constants)
    if n1 == 0 or n2 == 0:
        return 0.0
    return 2 * n1**2 * n2 * probability_2to2(cfg, constants)


def mean_signal_quanta_closed_form(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> float:
    """G̃₁²κ²Q²F₀⁶L_z⁴ for the TE011 → TM110 + TM130 channel in the 1:1:r family."""
    if cfg.pump_field is None:
        raise MissingPumpError("the closed form needs the pump field F0")
    consts = constants or get_constants()
    r = resonant_aspect_ratio(cfg)
    kappa = _kappa(cfg, consts)
    f0 = cfg.pump_field * consts.tesla
    lz = cfg.lz * consts.meter
    return g1_tilde_squared(r, cfg.beta) * kappa**2 * cfg.quality_factor**2 * f0**6 * lz**4


def signal_frequency(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> float:
    """ω_s in eV: the override or the computed second-signal frequency."""
    if cfg.omega_s is not None:
        return cfg.omega_s
    consts = constants or get_constants()
    r = resonant_aspect_ratio(cfg)
    lz = cfg.lz * consts.meter
    return math.pi / lz * scaled_frequencies(cfg, r)[2]


def measurement_time(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> MeasurementEstimate:
    """
    Dicke radiometer time t = SNR·T·L_z·Q/(⟨N_s⟩·ω_s) with bandwidth 1/t.

    Also reports the signal power P_s = ⟨N_s⟩ω_s/(L_z Q). A vanishing
    signal gives an infinite time with an explanation.
    """
    consts = constants or get_constants()
    omega_s = signal_frequency(cfg, consts)
    lz = cfg.lz * consts.meter
    temperature = cfg.temperature * consts.kelvin
    n_s = mean_signal_quanta(cfg, consts)
    power = n_s * omega_s / (lz * cfg.quality_factor)

    if n_s == 0:
        reason = "κ = 0" if _kappa(cfg, consts) == 0 else "no pump field"
        logger.info("signal vanishes (%s); measurement time is infinite", reason)
        return MeasurementEstimate(
            t_seconds=math.inf,
            t_natural=math.inf,
            signal_power_ev2=0.0,
            signal_power_watts=0.0,
            omega_s=omega_s,
            explanation=f"no signal is generated ({reason})",
        )

    t_natural = cfg.snr * temperature * lz * cfg.quality_factor / (n_s * omega_s)
    return MeasurementEstimate(
        t_seconds=t_natural / consts.second,
        t_natural=t_natural,
        signal_power_ev2=power,
        signal_power_watts=power / consts.watt,
        omega_s=omega_s,
    )


def measurement_time_closed_form(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> float:
    """SNR·T/(G̃₁²QF₀⁶L_z³ω_sκ²) in seconds."""
    consts = constants or get_constants()
    r = resonant_aspect_ratio(cfg)
    if cfg.pump_field is None:
        raise MissingPumpError("the closed form needs the pump field F0")
    kappa = _kappa(cfg, consts)
    f0 = cfg.pump_field * consts.tesla
    lz = cfg.lz * consts.meter
    denominator = (
        g1_tilde_squared(r, cfg.beta) * cfg.quality_factor * f0**6 * lz**3
        * signal_frequency(cfg, consts) * kappa**2
    )
    if denominator == 0:
        return math.inf
    return cfg.snr * cfg.temperature * consts.kelvin / denominator / consts.second


# Energy exponents of every quantity in the estimate; products list (name, power).
_FORMULA_GRAPH: "OrderedDict[str, List[Tuple[str, int]]]" = OrderedDict(
    [
        ("M_2to2", [("kappa", 1), ("L_z", -5)]),
        ("tau", [("Q", 1), ("omega_s", -1)]),
        ("P_2to2", [("M_2to2", 2), ("tau", 2)]),
        ("volume", [("L_z", 3)]),
        ("N_pump", [("F_0", 2), ("volume", 1), ("omega_p", -1)]),
        ("N_s", [("N_pump", 3), ("P_2to2", 1)]),
        ("t", [("SNR", 1), ("T", 1), ("L_z", 1), ("Q", 1), ("N_s", -1), ("omega_s", -1)]),
        ("P_s", [("N_s", 1), ("omega_s", 1), ("L_z", -1), ("Q", -1)]),
    ]
)
_INPUT_DIMENSIONS = {
    "kappa": -4,
    "L_z": -1,
    "Q": 0,
    "SNR": 0,
    "omega_s": 1,
    "omega_p": 1,
    "F_0": 2,
    "T": 1,
}
EXPECTED_DIMENSIONS = {"P_2to2": 0, "N_s": 0, "t": -1, "P_s": 2}


def audit_dimensions() -> Dict[str, Any]:
    """
    Propagate energy exponents through the formula graph.

    Returns:
        Dict with the exponent of every quantity, the mismatches against
        EXPECTED_DIMENSIONS and an ``ok`` flag
    """
    exponents: Dict[str, int] = dict(_INPUT_DIMENSIONS)
    for name, factors in _FORMULA_GRAPH.items():
        exponents[name] = sum(exponents[factor] * power for factor, power in factors)
    mismatches = {
        name: {"expected": expected, "found": exponents[name]}
        for name, expected in EXPECTED_DIMENSIONS.items()
        if exponents[name] != expected
    }
    return {"exponents": exponents, "mismatches": mismatches, "ok": not mismatches}


def run_experiment(
    cfg: ExperimentConfig, constants: Optional[UnitConstants] = None
) -> ExperimentReport:
    """
    Full estimate for one configuration.

    The published ω_s and measurement time are listed next to the
    computed values for comparison; they are not inputs.
    """
    consts = constants or get_constants()
    report = ExperimentReport()
    r = resonant_aspect_ratio(cfg)
    lz = cfg.lz * consts.meter
    kappa = _kappa(cfg, consts)
    w_p, w_1, w_2 = (math.pi / lz * w for w in scaled_frequencies(cfg, r))

    report.add("aspect_ratio", r)
    report.add("omega_pump", w_p, "eV")
    report.add("omega_sig1", w_1, "eV")
    report.add("omega_sig2", w_2, "eV")
    report.add("kappa", kappa, "eV^-4")
    report.add("beta", cfg.beta)
    report.add("M_2to2", kappa * dimensionless_m22(cfg, r) / lz**5, "eV")
    report.add("P_2to2", probability_2to2(cfg, consts))
    if _family(cfg).xy_ratio == 1:
        report.add("G1_squared", g1_squared(r, cfg.beta))
        report.add("G1_tilde_squared", g1_tilde_squared(r, cfg.beta))

    try:
        n1, n2 = pump_occupations(cfg, consts)
    except MissingPumpError as e:
        report.add("N_s", None, note=str(e))
        return report

    report.add("N_1", n1)
    report.add("N_2", n2)
    report.add("N_s", mean_signal_quanta(cfg, consts))
    estimate = measurement_time(cfg, consts)
    report.add("omega_s", estimate.omega_s, "eV")
    report.add("P_s", estimate.signal_power_ev2, "eV^2")
    report.add("P_s_watts", estimate.signal_power_watts, "W")
    report.add("t_natural", estimate.t_natural, "eV^-1", estimate.explanation)
    report.add("t_seconds", estimate.t_seconds, "s", estimate.explanation)
    report.add("published_omega_s", PUBLISHED_OMEGA_S_EV, "eV", "quoted value for L_z = 20 cm")
    report.add("published_t_seconds", PUBLISHED_TIME_SECONDS, "s", "quoted estimate")
    return report
