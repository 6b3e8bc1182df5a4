"""
Cavity transition amplitudes split by electromagnetic invariant.

The interaction is κ[(F·F)² + β(F·F̃)²] = 4κ[E⁴ - 2B²E² + B⁴ + 4β(B·E)²].
Each monomial bracket is 4κ times the contracted, integrated kernel
product; the (F·F)² part collects E⁴, B²E² and B⁴, the dual part
collects (B·E)².
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import sympy

from cavity_eh.exceptions import (
    IncompatibleModesError,
    LegCountError,
    MomentumConservationError,
)
from cavity_eh.models import CavityGeometry, Couplings, ModeId
from cavity_eh.trig import ExactValue, is_exact_zero
from cavity_eh.wick import (
    BBBB,
    BBEE,
    BEBE,
    EEEE,
    ExternalState,
    LagrangianTerm,
    Side,
    StateLabel,
    contracted_value,
)

logger = logging.getLogger(__name__)

RESONANCE_TOLERANCE = 1e-12

TE011 = ModeId.te(0, 1, 1)
TM110 = ModeId.tm(1, 1, 0)
TM130 = ModeId.tm(1, 3, 0)

BRACKET_NAMES = ("E4", "B2E2", "B4", "BE2")
_BRACKET_TERMS = dict(zip(BRACKET_NAMES, (EEEE, BBEE, BBBB, BEBE)))


class ProcessTag(str, Enum):
    MERGE_3TO1_1D = "merge_3to1_1d"
    MERGE_3TO1_3D = "merge_3to1_3d"
    SCATTER_2TO2 = "scatter_2to2"
    COHERENT_MINUS = "coherent_minus"

    @property
    def leg_shape(self) -> Tuple[int, int]:
        if self in (ProcessTag.MERGE_3TO1_1D, ProcessTag.MERGE_3TO1_3D):
            return (3, 1)
        return (2, 2)


def _quanta(labels: Sequence[StateLabel]) -> int:
    return sum(label.quanta for label in labels)


@dataclass(frozen=True)
class ProcessSpec:
    """
    A transition between cavity states.

    Raises:
        LegCountError: If the in/out quanta do not match the tag
        IncompatibleModesError: If 1-D and box modes are mixed or do not
            match the tag
    """

    geometry: CavityGeometry
    state: ExternalState
    tag: ProcessTag

    def __post_init__(self):
        shape = (_quanta(self.state.incoming), _quanta(self.state.outgoing))
        if shape != self.tag.leg_shape:
            raise LegCountError(
                f"{self.tag.value} needs {self.tag.leg_shape[0]} in and "
                f"{self.tag.leg_shape[1]} out quanta, got {shape[0]} and {shape[1]}"
            )
        labels = self.state.incoming + self.state.outgoing
        one_d = {label.mode.is_one_d for label in labels}
        if len(one_d) > 1:
            raise IncompatibleModesError("cannot mix 1-D slab modes with box modes")
        if (self.tag == ProcessTag.MERGE_3TO1_1D) != one_d.pop():
            raise IncompatibleModesError(
                f"{self.tag.value} does not accept these mode families"
            )
        coherent = any(label.is_coherent for label in labels)
        if coherent != (self.tag == ProcessTag.COHERENT_MINUS):
            raise IncompatibleModesError(
                "coherent amplitudes belong to the coherent_minus process only"
            )

    @property
    def energy_in(self) -> sympy.Expr:
        return self.state.energy(self.geometry, Side.IN)

    @property
    def energy_out(self) -> sympy.Expr:
        return self.state.energy(self.geometry, Side.OUT)

    @property
    def detuning(self) -> sympy.Expr:
        """Σω_out - Σω_in."""
        return self.energy_out - self.energy_in

    def is_on_resonance(self, subs: Optional[Dict[Any, Any]] = None) -> bool:
        detuning = self.detuning
        energy = self.energy_in
        if subs:
            detuning = detuning.subs(subs)
            energy = energy.subs(subs)
        if detuning == 0 or detuning.free_symbols or energy.free_symbols:
            return is_exact_zero(detuning)
        scale = abs(complex(sympy.N(energy)))
        if abs(complex(sympy.N(detuning, 30))) <= RESONANCE_TOLERANCE * max(scale, 1e-300):
            return True
        return is_exact_zero(detuning)

    @property
    def label(self) -> str:
        def side(labels: Sequence[StateLabel]) -> str:
            return " + ".join(
                (f"{label.quanta}×" if label.quanta > 1 else "") + label.mode.label
                for label in labels
            )

        return f"{side(self.state.incoming)} -> {side(self.state.outgoing)}"


@dataclass(frozen=True)
class AmplitudeValue:
    """
    Matrix element M = κ(c_F4 + β·c_FFdual) with its invariant split.

    ``brackets`` holds the four monomial brackets including the 4κ factor.
    """

    c_f4: ExactValue
    c_ffdual: ExactValue
    kappa: sympy.Expr
    beta: sympy.Expr
    on_resonance: bool
    brackets: Dict[str, ExactValue] = field(default_factory=dict)

    @property
    def total(self) -> ExactValue:
        return (self.c_f4 + self.c_ffdual * self.beta) * self.kappa

    @property
    def c_f4_is_zero(self) -> bool:
        return self.c_f4.is_zero

    @property
    def c_ffdual_is_zero(self) -> bool:
        return self.c_ffdual.is_zero

    @property
    def is_zero(self) -> bool:
        return self.c_f4_is_zero and self.c_ffdual_is_zero

    def to_dict(self, subs: Optional[Dict[Any, Any]] = None) -> Dict[str, Any]:
        """JSON-ready view; complex values become [re, im] only when needed."""

        def number(value: ExactValue) -> Union[float, Tuple[float, float]]:
            if value.is_zero:
                return 0.0
            z = value.to_complex(subs)
            if z.imag == 0 or abs(z.imag) <= 1e-14 * abs(z.real):
                return z.real
            return (z.real, z.imag)

        data: Dict[str, Any] = OrderedDict()
        data["c_F4"] = number(self.c_f4)
        data["c_FFdual"] = number(self.c_ffdual)
        data["kappa"] = float(sympy.N(self.kappa.subs(subs) if subs else self.kappa))
        data["beta"] = float(sympy.N(self.beta.subs(subs) if subs else self.beta))
        data["M_total"] = number(self.total)
        data["components"] = OrderedDict((k, number(v)) for k, v in self.brackets.items())
        data["exact_zero"] = OrderedDict(
            [("c_F4", self.c_f4_is_zero), ("c_FFdual", self.c_ffdual_is_zero)]
        )
        data["on_resonance"] = self.on_resonance
        return data


def operator_brackets(
    spec: ProcessSpec, kappa: Any = sympy.Integer(1)
) -> "OrderedDict[str, ExactValue]":
    """
    The four monomial brackets ⟨E⁴⟩, ⟨B²E²⟩, ⟨B⁴⟩ and ⟨(B·E)²⟩.

    Each value is 4κ times the contracted integral and carries no
    Lagrangian weight.
    """
    factor = 4 * sympy.sympify(kappa)
    return OrderedDict(
        (name, contracted_value(term, spec.state, spec.geometry) * factor)
        for name, term in _BRACKET_TERMS.items()
    )


def matrix_element(
    spec: ProcessSpec, couplings: Optional[Couplings] = None
) -> AmplitudeValue:
    """
    Spatial matrix element of a process, without the energy delta.

    Off-resonance processes are flagged and logged, and the amplitude is
    still returned.

    Args:
        spec: Process to evaluate
        couplings: κ and β (defaults to κ = 1, β = 7/4)

    Returns:
        AmplitudeValue with c_F4, c_FFdual and the total
    """
    couplings = couplings or Couplings()
    on_resonance = spec.is_on_resonance()
    if not on_resonance:
        logger.warning(
            "%s is off resonance (detuning %s); amplitude carries no energy delta",
            spec.label,
            spec.detuning,
        )

    unit = operator_brackets(spec)
    c_f4 = ExactValue.zero()
    c_ffdual = ExactValue.zero()
    for name, term in _BRACKET_TERMS.items():
        if term.f4_weight:
            c_f4 = c_f4 + unit[name] * term.f4_weight
        if term.dual_weight:
            c_ffdual = c_ffdual + unit[name] * term.dual_weight

    brackets = OrderedDict((name, value * couplings.kappa) for name, value in unit.items())
    return AmplitudeValue(
        c_f4=_canonical(c_f4),
        c_ffdual=_canonical(c_ffdual),
        kappa=couplings.kappa,
        beta=couplings.beta,
        on_resonance=on_resonance,
        brackets=brackets,
    )


def _canonical(value: ExactValue) -> ExactValue:
    return ExactValue.zero() if value.is_zero else value


def component_piece(
    spec: ProcessSpec, monomial: str, kappa: Any = sympy.Integer(1)
) -> ExactValue:
    """
    4κ-weighted bracket of a Cartesian component monomial.

    The common i·2πδ(0) factor of the S-matrix element is implied.

    Examples:
        ``component_piece(spec, "EyEyEyEy")`` for three 1D-y:n quanta merging
        into 1D-y:3n gives 12√3·π²n²κ/(L_x³S).
    """
    term = LagrangianTerm.component(monomial)
    return contracted_value(term, spec.state, spec.geometry) * (4 * sympy.sympify(kappa))


# Process builders


def merge_3to1_1d_spec(
    geom: CavityGeometry,
    n: int,
    p: int,
    polarizations: Union[str, Sequence[str]] = "yyyy",
    signal_harmonic: Optional[int] = None,
) -> ProcessSpec:
    """
    Three slab quanta (n, i), (n, j), (p, l) merging into (s, s_pol).

    The state is the bare operator product. ``signal_harmonic`` defaults
    to 2n + p.
    """
    pols = [c.lower() for c in polarizations]
    if len(pols) != 4:
        raise ValueError(f"need four polarisations, got {polarizations!r}")
    s = 2 * n + p if signal_harmonic is None else signal_harmonic
    incoming = [ModeId.one_d(n, pols[0]), ModeId.one_d(n, pols[1]), ModeId.one_d(p, pols[2])]
    outgoing = [ModeId.one_d(s, pols[3])]
    state = ExternalState.from_modes(incoming, outgoing, fock_normalized=False)
    return ProcessSpec(geom, state, ProcessTag.MERGE_3TO1_1D)


def merge_3to1_3d_spec(
    geom: CavityGeometry, pumps: Sequence[ModeId], signal: ModeId
) -> ProcessSpec:
    """Three box quanta merging into one; the state is the bare operator product."""
    state = ExternalState.from_modes(list(pumps), [signal], fock_normalized=False)
    return ProcessSpec(geom, state, ProcessTag.MERGE_3TO1_3D)


def scatter_2to2_spec(
    geom: CavityGeometry,
    pump: ModeId = TE011,
    signals: Tuple[ModeId, ModeId] = (TM110, TM130),
) -> ProcessSpec:
    """|2 pump⟩ -> |1 sig1, 1 sig2⟩ with Fock normalisation."""
    if pump.is_one_d or any(s.is_one_d for s in signals):
        raise IncompatibleModesError("2->2 scattering needs box modes")
    state = ExternalState.from_modes([pump, pump], list(signals))
    return ProcessSpec(geom, state, ProcessTag.SCATTER_2TO2)


def coherent_spec(
    xi: Any,
    eta: Any,
    geom: CavityGeometry,
    pump: ModeId = TE011,
    signals: Tuple[ModeId, ModeId] = (TM110, TM130),
) -> ProcessSpec:
    """Coherent pump ξ and coherent partner η generating one quantum of signals[1]."""
    if pump.is_one_d or any(s.is_one_d for s in signals):
        raise IncompatibleModesError("coherent generation needs box modes")
    state = ExternalState(
        incoming=(StateLabel(mode=pump, quanta=2, amplitude=xi),),
        outgoing=(
            StateLabel(mode=signals[0], quanta=1, amplitude=eta),
            StateLabel(mode=signals[1], quanta=1),
        ),
    )
    return ProcessSpec(geom, state, ProcessTag.COHERENT_MINUS)


# Operations on named channels


def scatter_2to2_components(
    geom: CavityGeometry,
    couplings: Optional[Couplings] = None,
    pump: ModeId = TE011,
    signals: Tuple[ModeId, ModeId] = (TM110, TM130),
) -> "OrderedDict[str, ExactValue]":
    """
    Brackets ⟨E⁴⟩, ⟨B²E²⟩, ⟨B⁴⟩, ⟨(B·E)²⟩ of the 2→2 channel.

    Their combination ⟨E⁴⟩ - 2⟨B²E²⟩ + ⟨B⁴⟩ + 4β⟨(B·E)²⟩ is the total of
    ``matrix_element``.

    Raises:
        IncompatibleModesError: If a 1-D mode is supplied
    """
    couplings = couplings or Couplings()
    spec = scatter_2to2_spec(geom, pump, signals)
    return operator_brackets(spec, couplings.kappa)


def _one_one_r_frequencies(r: sympy.Expr, lz: sympy.Expr) -> Tuple[sympy.Expr, ...]:
    base = sympy.pi / lz
    return (base * sympy.sqrt(r**2 + 1), base * sympy.sqrt(2) * r, base * sympy.sqrt(10) * r)


def scatter_2to2_closed_form_components(
    r: Any, lz: Any = 1, kappa: Any = 1
) -> "OrderedDict[str, sympy.Expr]":
    """
    Closed-form 2→2 brackets in the 1:1:r family at any r.

    TE011 pump, TM110 and TM130 signals, V = L_z³/r².
    """
    r, lz, kappa = (sympy.sympify(v) for v in (r, lz, kappa))
    w011, w110, w130 = _one_one_r_frequencies(r, lz)
    volume = lz**3 / r**2
    pref = 4 * kappa / (sympy.sqrt(2) * volume)
    root = sympy.sqrt(w011**2 * w110 * w130)
    ratio = sympy.sqrt(w011**2 / (w110 * w130))

    e4 = -pref * root
    b4 = pref * sympy.pi**4 / lz**4 * 2 * r**2 * (2 * r**2 - 3) / root
    b2e2 = pref / 2 * sympy.pi**2 / lz**2 * (4 * r**2 * ratio - (r**2 - 1) / ratio)
    be2 = (
        pref / 2 * sympy.pi**2 / lz**2 * r**2
        * (3 * ratio + 3 * sympy.sqrt(w110 / w130) - sympy.sqrt(w130 / w110) - 1 / ratio)
    )
    return OrderedDict([("E4", e4), ("B2E2", b2e2), ("B4", b4), ("BE2", be2)])


def combine_brackets(brackets: Dict[str, Any], beta: Any) -> Any:
    """⟨E⁴⟩ - 2⟨B²E²⟩ + ⟨B⁴⟩ + 4β⟨(B·E)²⟩."""
    return brackets["E4"] - 2 * brackets["B2E2"] + brackets["B4"] + 4 * beta * brackets["BE2"]


def resonance_bracket(r: Any, beta: Any) -> sympy.Expr:
    """5 + 2√5 - β(√(1+r²) + √2·r)², the factor that sets the β dependence."""
    r, beta = sympy.sympify(r), sympy.sympify(beta)
    return 5 + 2 * sympy.sqrt(5) - beta * (sympy.sqrt(1 + r**2) + sympy.sqrt(2) * r) ** 2


def scatter_2to2_closed_form(
    r: Any, beta: Any = sympy.Rational(7, 4), lz: Any = 1, kappa: Any = 1
) -> sympy.Expr:
    """
    Resonant 2→2 element -κ/L_z⁵·4π²r³/(5^¼√(1+r²))·[5+2√5-β(√(1+r²)+√2r)²].

    Valid at the resonant aspect ratio only.
    """
    r, lz, kappa = (sympy.sympify(v) for v in (r, lz, kappa))
    return (
        -kappa / lz**5 * 4 * sympy.pi**2 * r**3
        / (sympy.root(5, 4) * sympy.sqrt(1 + r**2))
        * resonance_bracket(r, beta)
    )


def merge_3to1_term(
    geom: CavityGeometry,
    n: int,
    p: int,
    polarizations: Union[str, Sequence[str]] = "yyyy",
    signal_harmonic: Optional[int] = None,
) -> "OrderedDict[str, ExactValue]":
    """
    Operator brackets of a slab merge, scaled by S and without κ.

    The B²E² entry includes its weight -2 in the Lagrangian, so that for
    every channel EE2 = BB2 = -B2E2/2 and EB2 = 0.

    Raises:
        MomentumConservationError: If the signal harmonic is not 2n + p
    """
    if signal_harmonic is not None and signal_harmonic != 2 * n + p:
        raise MomentumConservationError(
            f"signal harmonic {signal_harmonic} differs from 2n+p = {2 * n + p}"
        )
    spec = merge_3to1_1d_spec(geom, n, p, polarizations)
    area = geom.area
    values = OrderedDict()
    for name, term in (("EE2", EEEE), ("BB2", BBBB), ("B2E2", BBEE), ("EB2", BEBE)):
        weight = term.f4_weight if name == "B2E2" else 1
        value = contracted_value(term, spec.state, geom) * (area * weight)
        values[name] = _canonical(value.simplify())
    return values


def merge_3to1_closed_form(
    geom: CavityGeometry, n: int, p: int, polarizations: Union[str, Sequence[str]] = "yyyy"
) -> sympy.Expr:
    """√((2n+p)n²p)·π²/L_x³·[δ_ij δ_ls(1+2δ_is) + (1-δ_ls)(1-δ_ij)]."""
    i, j, l, s = (c.lower() for c in polarizations)

    def d(a: str, b: str) -> int:
        return 1 if a == b else 0

    factor = d(i, j) * d(l, s) * (1 + 2 * d(i, s)) + (1 - d(l, s)) * (1 - d(i, j))
    return sympy.sqrt((2 * n + p) * n**2 * p) * sympy.pi**2 / geom.lx**3 * factor


def coherent_amplitude(
    xi: Any,
    eta: Any,
    geom: CavityGeometry,
    couplings: Optional[Couplings] = None,
    pump: ModeId = TE011,
    signals: Tuple[ModeId, ModeId] = (TM110, TM130),
) -> ExactValue:
    """
    Amplitude for generating one signals[1] quantum from coherent pumps.

    Equal to √2·ξ²·conj(η)·M₂→₂; η = 0 gives zero.
    """
    spec = coherent_spec(xi, eta, geom, pump, signals)
    return matrix_element(spec, couplings).total
