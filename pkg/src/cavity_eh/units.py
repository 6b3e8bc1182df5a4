"""
Conversions between SI units and natural units (ħ = c = 1, energies in eV).

Constants come from the versioned ``data/constants.yaml`` file. Every
unit maps to a power of eV and a factor, so a conversion is a single
multiplication once the two powers agree.
"""

import logging
import math
import re
from pathlib import Path
from typing import Dict, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, field_validator

from cavity_eh.exceptions import UnitConversionError

logger = logging.getLogger(__name__)

CONSTANTS_FILE = Path(__file__).parent / "data" / "constants.yaml"

_PREFIXES: Dict[str, float] = {
    "": 1.0,
    "k": 1e3,
    "M": 1e6,
    "G": 1e9,
    "c": 1e-2,
    "m": 1e-3,
    "u": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
    "f": 1e-15,
}
_NATURAL = re.compile(r"^eV(?:\^?\(?(-?\d+)\)?)?$")
_QUANTITY = re.compile(
    r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z][A-Za-z0-9^()\-]*)?\s*$"
)


class ConstantEntry(BaseModel):
    """One tabulated constant with its provenance."""

    value: float = Field(..., gt=0, description="Numeric value")
    unit: str = Field("", description="Unit of the value")
    source: str = Field("", description="Where the value comes from")


class UnitConstants(BaseModel):
    """
    Physical constants and the SI to natural-unit factors derived from them.

    Examples:
        >>> consts = UnitConstants.load()
        >>> round(consts.tesla, 2)
        195.35
    """

    version: str = Field(..., description="Data set version")
    constants: Dict[str, ConstantEntry] = Field(..., description="Tabulated constants")

    @field_validator("constants")
    @classmethod
    def validate_required(cls, v: Dict[str, ConstantEntry]) -> Dict[str, ConstantEntry]:
        required = {
            "hbar_c",
            "hbar",
            "mu_0",
            "elementary_charge",
            "boltzmann",
            "electron_mass",
            "fine_structure",
        }
        missing = required - set(v)
        if missing:
            raise ValueError(f"constants file lacks: {', '.join(sorted(missing))}")
        return v

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "UnitConstants":
        """
        Load constants from YAML.

        Raises:
            FileNotFoundError: If the file does not exist
        """
        path = Path(path or CONSTANTS_FILE)
        if not path.exists():
            raise FileNotFoundError(f"Constants file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        return cls(**data)

    def value(self, name: str) -> float:
        return self.constants[name].value

    @property
    def meter(self) -> float:
        """1 m in eV⁻¹."""
        return 1.0 / self.value("hbar_c")

    @property
    def second(self) -> float:
        """1 s in eV⁻¹."""
        return 1.0 / self.value("hbar")

    @property
    def tesla(self) -> float:
        """1 T in eV², from B²/μ₀ energy density in Heaviside-Lorentz units."""
        hbar_c = self.value("hbar_c")
        return math.sqrt(hbar_c**3 / (self.value("mu_0") * self.value("elementary_charge")))

    @property
    def kelvin(self) -> float:
        """k_B·1 K in eV."""
        return self.value("boltzmann")

    @property
    def watt(self) -> float:
        """1 W = 1 J/s in eV²."""
        return self.value("hbar") / self.value("elementary_charge")

    @property
    def kappa_eh(self) -> float:
        """α²/(90 m_e⁴) in eV⁻⁴."""
        return self.value("fine_structure") ** 2 / (90 * self.value("electron_mass") ** 4)


_constants: Optional[UnitConstants] = None


def get_constants() -> UnitConstants:
    """Process-wide constants loaded from the bundled data file."""
    global _constants
    if _constants is None:
        _constants = UnitConstants.load()
        logger.debug("loaded constants %s", _constants.version)
    return _constants


def _si_base(consts: UnitConstants) -> Dict[str, Tuple[int, float]]:
    return {
        "m": (-1, consts.meter),
        "s": (-1, consts.second),
        "T": (2, consts.tesla),
        "K": (1, consts.kelvin),
        "W": (2, consts.watt),
    }


def unit_dimension(
    unit: str, constants: Optional[UnitConstants] = None
) -> Tuple[int, float]:
    """
    Energy exponent and factor to eV for a unit symbol.

    ``eV^-4``, ``eV2``, ``cm``, ``mT`` and ``nW`` are all understood; the
    empty string and ``1`` are dimensionless.

    Raises:
        UnitConversionError: If the unit is unknown
    """
    consts = constants or get_constants()
    unit = unit.strip()
    if unit in ("", "1"):
        return (0, 1.0)
    match = _NATURAL.match(unit)
    if match:
        return (int(match.group(1) or 1), 1.0)
    base = _si_base(consts)
    if unit in base:
        return base[unit]
    prefix, symbol = unit[:1], unit[1:]
    if prefix in _PREFIXES and symbol in base:
        exponent, factor = base[symbol]
        return (exponent, factor * _PREFIXES[prefix])
    raise UnitConversionError(f"Unknown unit: {unit!r}")


def convert_units(
    value: float, from_unit: str, to_unit: str, constants: Optional[UnitConstants] = None
) -> float:
    """
    Convert a value between units of the same energy dimension.

    Examples:
        >>> round(convert_units(1, "T", "eV^2"), 2)
        195.35

    Raises:
        UnitConversionError: If a unit is unknown or the dimensions differ
    """
    from_exp, from_factor = unit_dimension(from_unit, constants)
    to_exp, to_factor = unit_dimension(to_unit, constants)
    if from_exp != to_exp:
        raise UnitConversionError(
            f"Cannot convert {from_unit!r} (eV^{from_exp}) to {to_unit!r} (eV^{to_exp})"
        )
    return value * from_factor / to_factor


class Quantity(BaseModel):
    """A value with a unit symbol."""

    value: float
    unit: str = ""

    def to(self, unit: str, constants: Optional[UnitConstants] = None) -> float:
        return convert_units(self.value, self.unit, unit, constants)

    def __str__(self) -> str:
        return f"{self.value:g} {self.unit}".strip()


def parse_quantity(text: str, default_unit: str = "") -> Quantity:
    """
    Parse ``0.1T``, ``20 cm`` or ``1e10``.

    Raises:
        UnitConversionError: If the text is not a number with an optional unit
    """
    match = _QUANTITY.match(str(text))
    if not match:
        raise UnitConversionError(f"Cannot parse quantity: {text!r}")
    unit = match.group(2) or default_unit
    unit_dimension(unit)
    return Quantity(value=float(match.group(1)), unit=unit)
