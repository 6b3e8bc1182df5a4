"""
Wick contractions of the quartic Lagrangian against cavity states.

Every field slot of a normal-ordered monomial contracts with one external
leg. For four legs all 4! slot assignments are enumerated and grouped by
the resulting kernel product, which gives the combinatorial
multiplicities directly.
"""

import itertools
import logging
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cavity_eh.cache import get_cache
from cavity_eh.exceptions import LegCountError
from cavity_eh.models import CavityGeometry, ModeId
from cavity_eh.modes import electric_profile, magnetic_profile, mode_frequency, validate_mode
from cavity_eh.trig import ExactValue, TrigPoly, VectorTrigPoly, dot, integrate_product

logger = logging.getLogger(__name__)


class FieldKind(str, Enum):
    E = "E"
    B = "B"


class Side(str, Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class LagrangianTerm:
    """
    Normal-ordered quartic monomial.

    Slots pair as (0·1)(2·3) unless ``axes`` fixes a Cartesian component
    per slot. ``f4_weight`` and ``dual_weight`` are the weights of the
    monomial in the (F·F)² and (F·F̃)² invariants; the overall factor 4κ
    is applied by the caller.
    """

    name: str
    fields: Tuple[FieldKind, FieldKind, FieldKind, FieldKind]
    f4_weight: int = 0
    dual_weight: int = 0
    axes: Optional[Tuple[int, int, int, int]] = None

    @property
    def is_component(self) -> bool:
        return self.axes is not None

    @classmethod
    def component(cls, text: str) -> "LagrangianTerm":
        """
        Parse a component monomial such as ``EyEyEyEy`` or ``ExBzEyBy``.

        Raises:
            ValueError: If the text is not four field/axis pairs
        """
        raw = text.replace(" ", "")
        if len(raw) != 8:
            raise ValueError(f"component monomial needs four field/axis pairs: {text!r}")
        fields, axes = [], []
        for i in range(0, 8, 2):
            field, axis = raw[i].upper(), raw[i + 1].lower()
            if field not in ("E", "B") or axis not in "xyz":
                raise ValueError(f"invalid component {raw[i:i + 2]!r} in {text!r}")
            fields.append(FieldKind(field))
            axes.append("xyz".index(axis))
        return cls(name=raw, fields=tuple(fields), axes=tuple(axes))  # type: ignore[arg-type]


E, B = FieldKind.E, FieldKind.B

EEEE = LagrangianTerm("EEEE", (E, E, E, E), f4_weight=1)
BBEE = LagrangianTerm("BBEE", (B, B, E, E), f4_weight=-2)
BBBB = LagrangianTerm("BBBB", (B, B, B, B), f4_weight=1)
BEBE = LagrangianTerm("BEBE", (B, E, B, E), dual_weight=4)

LAGRANGIAN_TERMS: Tuple[LagrangianTerm, ...] = (EEEE, BBEE, BBBB, BEBE)


class StateLabel(BaseModel):
    """
    Occupation of one mode on one side of a transition.

    ``amplitude`` marks a coherent state with that complex amplitude
    (ξ on the in side, η on the out side).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mode: ModeId = Field(..., description="Mode label")
    quanta: int = Field(1, ge=1, description="Number of quanta taking part")
    amplitude: Optional[Any] = Field(None, description="Coherent amplitude")

    @field_validator("mode")
    @classmethod
    def validate_mode_label(cls, v: ModeId) -> ModeId:
        return validate_mode(v)

    @field_validator("amplitude", mode="before")
    @classmethod
    def validate_amplitude(cls, v: Any) -> Any:
        if v is None:
            return None
        return sympy.sympify(v)

    @property
    def is_coherent(self) -> bool:
        return self.amplitude is not None


class ExternalState(BaseModel):
    """
    In and out sides of a transition.

    With ``fock_normalized`` the Fock labels contribute 1/√(m!); without
    it the state is the bare product of creation operators.

    Examples:
        >>> te = ModeId.parse("TE011")
        >>> state = ExternalState(incoming=(StateLabel(mode=te, quanta=2),))
        >>> state.leg_count
        2
    """

    model_config = ConfigDict(frozen=True)

    incoming: Tuple[StateLabel, ...] = Field((), description="Annihilated quanta")
    outgoing: Tuple[StateLabel, ...] = Field((), description="Created quanta")
    fock_normalized: bool = Field(True, description="Apply 1/sqrt(m!) per Fock mode")

    @model_validator(mode="after")
    def check_unique_modes(self) -> "ExternalState":
        for side, labels in (("in", self.incoming), ("out", self.outgoing)):
            modes = [label.mode for label in labels]
            if len(set(modes)) != len(modes):
                raise ValueError(f"a mode appears more than once on the {side} side")
        return self

    @classmethod
    def from_modes(
        cls,
        incoming: Sequence[ModeId],
        outgoing: Sequence[ModeId],
        fock_normalized: bool = True,
    ) -> "ExternalState":
        """Build a Fock state from lists of modes, repeats counted as quanta."""

        def collect(modes: Sequence[ModeId]) -> Tuple[StateLabel, ...]:
            counts: "OrderedDict[ModeId, int]" = OrderedDict()
            for mode in modes:
                counts[mode] = counts.get(mode, 0) + 1
            return tuple(StateLabel(mode=m, quanta=c) for m, c in counts.items())

        return cls(
            incoming=collect(incoming),
            outgoing=collect(outgoing),
            fock_normalized=fock_normalized,
        )

    def legs(self) -> List[Tuple[ModeId, Side]]:
        """One entry per quantum; repeated quanta are distinct operators."""
        legs = []
        for side, labels in ((Side.IN, self.incoming), (Side.OUT, self.outgoing)):
            for label in labels:
                legs.extend((label.mode, side) for _ in range(label.quanta))
        return legs

    @property
    def leg_count(self) -> int:
        return sum(label.quanta for label in self.incoming + self.outgoing)

    def energy(self, geom: CavityGeometry, side: Side) -> sympy.Expr:
        labels = self.incoming if side == Side.IN else self.outgoing
        return sum(
            (label.quanta * mode_frequency(geom, label.mode) for label in labels),
            sympy.Integer(0),
        )


@dataclass(frozen=True)
class ContractionKernel:
    """
    c-number left by contracting one field with one external leg.

    The spatial dependence is ``prefactor · profile``; the time dependence
    is exp(i·phase_sign·ω·t).
    """

    mode: ModeId
    field: FieldKind
    side: Side
    prefactor: sympy.Expr
    profile: VectorTrigPoly
    frequency: sympy.Expr

    @property
    def phase_sign(self) -> int:
        return 1 if self.side == Side.OUT else -1

    @property
    def key(self) -> Tuple[str, str, str]:
        return (self.mode.label, self.side.value, self.field.value)


@dataclass(frozen=True)
class ContractionTerm:
    """One class of equivalent slot assignments."""

    multiplicity: int
    kernels: Tuple[ContractionKernel, ContractionKernel, ContractionKernel, ContractionKernel]
    prefactor: sympy.Expr
    net_frequency: sympy.Expr
    axes: Optional[Tuple[int, int, int, int]] = None


def contraction_kernel(
    mode: ModeId, field: FieldKind, side: Side, geom: CavityGeometry
) -> ContractionKernel:
    """
    Kernel of a field operator contracted with one quantum.

    E gives ±i√(ω/2V)·𝓐 with +i on the out side and -i on the in side;
    B gives curl 𝓐/√(2ωV) on both sides.

    Raises:
        ModeValidationError: If the mode is invalid
    """

    def build() -> ContractionKernel:
        omega = mode_frequency(geom, mode)
        volume = geom.volume
        if field == FieldKind.E:
            sign = sympy.I if side == Side.OUT else -sympy.I
            prefactor = sign * sympy.sqrt(omega / (2 * volume))
            profile = electric_profile(geom, mode)
        else:
            prefactor = 1 / sympy.sqrt(2 * omega * volume)
            profile = magnetic_profile(geom, mode)
        return ContractionKernel(mode, field, side, prefactor, profile, omega)

    return get_cache().get_or_compute(
        ("kernel", geom.cache_key(), mode, field, side), build
    )


def _leg_key(leg: Tuple[ModeId, Side], field: FieldKind) -> Tuple[str, str, str]:
    mode, side = leg
    return (mode.label, side.value, field.value)


def _class_key(term: LagrangianTerm, keys: Sequence[Tuple[str, str, str]]) -> Tuple:
    if term.axes is not None:
        return tuple(sorted(zip(keys, term.axes)))
    first = tuple(sorted((keys[0], keys[1])))
    second = tuple(sorted((keys[2], keys[3])))
    return tuple(sorted((first, second)))


def enumerate_contractions(
    term: LagrangianTerm, state: ExternalState, geom: CavityGeometry
) -> List[ContractionTerm]:
    """
    Group the 4! slot-to-leg assignments by kernel product.

    Args:
        term: Lagrangian monomial
        state: External state with four legs in total
        geom: Cavity geometry

    Returns:
        Contraction classes in a deterministic order; multiplicities sum
        to 24

    Raises:
        LegCountError: If the state does not have exactly four legs

    Examples:
        >>> te = ModeId.parse("TE011")
        >>> state = ExternalState.from_modes([te, te], [ModeId.parse("TM110"), ModeId.parse("TM130")])
        >>> sorted(t.multiplicity for t in enumerate_contractions(EEEE, state, CavityGeometry.cube(1)))
        [8, 16]
    """
    legs = state.legs()
    if len(legs) != 4:
        raise LegCountError(
            f"a quartic term needs exactly 4 external legs, got {len(legs)}"
        )

    classes: "OrderedDict[Tuple, List[Any]]" = OrderedDict()
    for perm in itertools.permutations(range(4)):
        keys = [_leg_key(legs[perm[slot]], term.fields[slot]) for slot in range(4)]
        class_key = _class_key(term, keys)
        if class_key in classes:
            classes[class_key][1] += 1
        else:
            classes[class_key] = [perm, 1]

    result = []
    for class_key in sorted(classes):
        perm, multiplicity = classes[class_key]
        kernels = tuple(
            contraction_kernel(legs[perm[slot]][0], term.fields[slot], legs[perm[slot]][1], geom)
            for slot in range(4)
        )
        prefactor = sympy.Mul(*(k.prefactor for k in kernels))
        net = sum((k.phase_sign * k.frequency for k in kernels), sympy.Integer(0))
        result.append(
            ContractionTerm(
                multiplicity=multiplicity,
                kernels=kernels,  # type: ignore[arg-type]
                prefactor=prefactor,
                net_frequency=net,
                axes=term.axes,
            )
        )
    logger.debug("%s: %d contraction classes", term.name, len(result))
    return result


def state_prefactor(state: ExternalState) -> sympy.Expr:
    """
    Normalisation carried by the external state.

    Fock modes give 1/√(m!) when the state is Fock normalised; a coherent
    mode gives ξ^m on the in side and conj(η)^m on the out side.

    Examples:
        >>> te = ModeId.parse("TE011")
        >>> state_prefactor(ExternalState(incoming=(StateLabel(mode=te, quanta=2),)))
        sqrt(2)/2
    """
    factor = sympy.Integer(1)
    for side, labels in ((Side.IN, state.incoming), (Side.OUT, state.outgoing)):
        for label in labels:
            if label.is_coherent:
                amp = label.amplitude if side == Side.IN else sympy.conjugate(label.amplitude)
                factor *= amp**label.quanta
            elif state.fock_normalized:
                factor /= sympy.sqrt(sympy.factorial(label.quanta))
    return factor


def _pair_dot(
    a: ContractionKernel, b: ContractionKernel, geom: CavityGeometry
) -> TrigPoly:
    return get_cache().get_or_compute(
        ("pair_dot", geom.cache_key(), a.key, b.key),
        lambda: dot(a.profile, b.profile),
    )


def _component(kernel: ContractionKernel, axis: int) -> TrigPoly:
    return kernel.profile.components[axis].scale(kernel.profile.prefactor)


def spatial_integral(term: ContractionTerm, geom: CavityGeometry) -> ExactValue:
    """
    Box integral of the kernel product of one class, prefactors excluded.

    Dot-product classes integrate (k0·k1)(k2·k3); component classes
    integrate the product of the selected Cartesian components.
    """
    keys = tuple(k.key for k in term.kernels)

    def build() -> ExactValue:
        k0, k1, k2, k3 = term.kernels
        if term.axes is None:
            return integrate_product(_pair_dot(k0, k1, geom), _pair_dot(k2, k3, geom), geom)
        a0, a1, a2, a3 = term.axes
        left = _component(k0, a0) * _component(k1, a1)
        right = _component(k2, a2) * _component(k3, a3)
        return integrate_product(left, right, geom)

    return get_cache().get_or_compute(
        ("spatial_integral", geom.cache_key(), keys, term.axes), build
    )


def contracted_value(
    term: LagrangianTerm, state: ExternalState, geom: CavityGeometry
) -> ExactValue:
    """
    ⟨f|∫:term:|i⟩ with time dependence stripped and no coupling factor.

    Sums multiplicity × kernel prefactors × spatial integral over all
    classes and applies the state prefactor.
    """
    total = ExactValue.zero()
    for contraction in enumerate_contractions(term, state, geom):
        integral = spatial_integral(contraction, geom)
        if integral.expr == 0:
            continue
        total = total + integral * (contraction.multiplicity * contraction.prefactor)
    return total * state_prefactor(state)
