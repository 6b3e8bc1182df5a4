"""
Core data models for the cavity-eh package.

Geometries, mode labels, couplings and the configuration sections are
pydantic models so they validate on construction and serialize cleanly
to YAML/JSON.
"""

import math
import re
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator

from cavity_eh.exceptions import GeometryError, ModeValidationError

# names sympify would otherwise resolve to special functions
COUPLING_SYMBOLS = {
    "kappa": sympy.Symbol("kappa", positive=True),
    "beta": sympy.Symbol("beta"),
}


def _to_length(value: Any) -> sympy.Expr:
    """Convert a side length to a sympy expression and check positivity."""
    try:
        expr = sympy.sympify(value)
    except (sympy.SympifyError, TypeError) as e:
        raise GeometryError(f"Invalid length: {value!r}") from e

    if expr.free_symbols:
        if expr.is_positive is not True:
            raise GeometryError(f"Symbolic length must be positive: {expr}")
        return expr

    number = float(expr)
    if not math.isfinite(number) or number <= 0:
        raise GeometryError(f"Length must be positive and finite, got {value!r}")
    return expr


class CavityGeometry(BaseModel):
    """
    Rectangular box with perfectly conducting walls.

    Side lengths are stored as sympy expressions: exact numbers, positive
    symbols or floats. The 1-D slab uses the same model; its transverse
    area is S = L_y·L_z.

    Attributes:
        lx: Side length along x
        ly: Side length along y
        lz: Side length along z

    Examples:
        >>> geom = CavityGeometry.cube(1)
        >>> geom.volume
        1
        >>> CavityGeometry.one_one_r(sympy.Rational(1, 2)).lx
        2
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lx: Any = Field(..., description="Side length along x")
    ly: Any = Field(..., description="Side length along y")
    lz: Any = Field(..., description="Side length along z")

    @field_validator("lx", "ly", "lz", mode="before")
    @classmethod
    def validate_length(cls, v: Any) -> sympy.Expr:
        return _to_length(v)

    @classmethod
    def symbolic(cls) -> "CavityGeometry":
        """Geometry with positive symbols L_x, L_y, L_z."""
        lx, ly, lz = sympy.symbols("L_x L_y L_z", positive=True)
        return cls(lx=lx, ly=ly, lz=lz)

    @classmethod
    def cube(cls, side: Any) -> "CavityGeometry":
        """Cube of the given side."""
        return cls(lx=side, ly=side, lz=side)

    @classmethod
    def one_one_r(cls, r: Any, lz: Any = 1) -> "CavityGeometry":
        """
        Box of proportions L_x:L_y:L_z = 1:1:r anchored at L_z.

        Args:
            r: Aspect ratio L_z/L_x
            lz: Length of the z side

        Returns:
            Geometry with L_x = L_y = L_z/r
        """
        r_expr = _to_length(r)
        lz_expr = _to_length(lz)
        side = lz_expr / r_expr
        return cls(lx=side, ly=side, lz=lz_expr)

    @classmethod
    def from_ratio(cls, a: Any, b: Any, c: Any, lz: Any = 1) -> "CavityGeometry":
        """Box of proportions a:b:c scaled so that the z side equals ``lz``."""
        a, b, c, lz = (_to_length(v) for v in (a, b, c, lz))
        return cls(lx=lz * a / c, ly=lz * b / c, lz=lz)

    @classmethod
    def parse(cls, text: str, lz: Optional[float] = None) -> "CavityGeometry":
        """
        Parse the ``Lx:Ly:Lz`` text form.

        Without an anchor the three numbers are the side lengths. With
        ``lz`` they are proportions and the box is scaled to that L_z.

        Raises:
            GeometryError: If the text is malformed
        """
        parts = [p.strip() for p in text.split(":")]
        if len(parts) != 3:
            raise GeometryError(f"Geometry must look like 'Lx:Ly:Lz', got {text!r}")
        try:
            values = [sympy.nsimplify(p) if "." not in p else sympy.Float(p) for p in parts]
        except (sympy.SympifyError, ValueError) as e:
            raise GeometryError(f"Invalid geometry {text!r}: {e}") from e
        if lz is None:
            return cls(lx=values[0], ly=values[1], lz=values[2])
        return cls.from_ratio(values[0], values[1], values[2], lz=lz)

    @property
    def lengths(self) -> Tuple[sympy.Expr, sympy.Expr, sympy.Expr]:
        return (self.lx, self.ly, self.lz)

    @property
    def volume(self) -> sympy.Expr:
        return self.lx * self.ly * self.lz

    @property
    def area(self) -> sympy.Expr:
        """Transverse area S = L_y·L_z used by the 1-D slab."""
        return self.ly * self.lz

    @property
    def aspect_ratio(self) -> Optional[sympy.Expr]:
        """r = L_z/L_x when the box belongs to the 1:1:r family, else None."""
        if sympy.simplify(self.lx - self.ly) != 0:
            return None
        return sympy.simplify(self.lz / self.lx)

    @property
    def free_symbols(self) -> set:
        return set().union(*(length.free_symbols for length in self.lengths))

    @property
    def is_numeric(self) -> bool:
        return not self.free_symbols

    def numeric_lengths(
        self, subs: Optional[Dict[Any, float]] = None
    ) -> Tuple[float, float, float]:
        """
        Float side lengths.

        Raises:
            GeometryError: If symbols remain after substitution
        """
        values = []
        for length in self.lengths:
            value = length.subs(subs) if subs else length
            if value.free_symbols:
                raise GeometryError(
                    f"Geometry has free symbols {sorted(map(str, value.free_symbols))}; "
                    "provide numeric values"
                )
            values.append(float(value))
        return (values[0], values[1], values[2])

    def cache_key(self) -> Tuple[str, str, str]:
        return tuple(sympy.srepr(length) for length in self.lengths)


class ModeFamily(str, Enum):
    """Polarization family of a cavity mode."""

    TE = "TE"
    TM = "TM"
    ONE_D_Y = "1D-y"
    ONE_D_Z = "1D-z"

    @property
    def is_one_d(self) -> bool:
        return self in (ModeFamily.ONE_D_Y, ModeFamily.ONE_D_Z)


_BOX_COMPACT = re.compile(r"^(TE|TM)(\d)(\d)(\d)$", re.IGNORECASE)
_BOX_TUPLE = re.compile(r"^(TE|TM)\((\d+),(\d+),(\d+)\)$", re.IGNORECASE)
_ONE_D = re.compile(r"^1D-([yz]):(\d+)$", re.IGNORECASE)


class ModeId(BaseModel):
    """
    Cavity mode label.

    Box modes carry (n, p, q); 1-D slab modes carry a single harmonic n
    with p = q = 0. Index constraints are checked by
    ``cavity_eh.modes.validate_mode``.

    Examples:
        >>> ModeId.parse("TE011").indices
        (0, 1, 1)
        >>> ModeId.parse("1D-y:3").label
        '1D-y:3'
    """

    model_config = ConfigDict(frozen=True)

    family: ModeFamily = Field(..., description="Mode family")
    n: int = Field(..., ge=0, description="Harmonic along x")
    p: int = Field(0, ge=0, description="Harmonic along y")
    q: int = Field(0, ge=0, description="Harmonic along z")

    @classmethod
    def te(cls, n: int, p: int, q: int) -> "ModeId":
        return cls(family=ModeFamily.TE, n=n, p=p, q=q)

    @classmethod
    def tm(cls, n: int, p: int, q: int) -> "ModeId":
        return cls(family=ModeFamily.TM, n=n, p=p, q=q)

    @classmethod
    def one_d(cls, n: int, polarization: str = "y") -> "ModeId":
        if polarization.lower() not in ("y", "z"):
            raise ModeValidationError(f"1-D polarization must be 'y' or 'z', got {polarization!r}")
        family = ModeFamily.ONE_D_Y if polarization.lower() == "y" else ModeFamily.ONE_D_Z
        return cls(family=family, n=n)

    @classmethod
    def parse(cls, text: str) -> "ModeId":
        """
        Parse ``TE011``, ``TM(1,10,0)`` or ``1D-y:3``.

        Raises:
            ModeValidationError: If the text is not a mode label
        """
        raw = text.strip().replace(" ", "")
        match = _BOX_COMPACT.match(raw) or _BOX_TUPLE.match(raw)
        if match:
            family = ModeFamily(match.group(1).upper())
            n, p, q = (int(g) for g in match.groups()[1:])
            return cls(family=family, n=n, p=p, q=q)
        match = _ONE_D.match(raw)
        if match:
            return cls.one_d(int(match.group(2)), match.group(1).lower())
        raise ModeValidationError(f"Unrecognized mode label: {text!r}")

    @property
    def indices(self) -> Tuple[int, int, int]:
        return (self.n, self.p, self.q)

    @property
    def is_one_d(self) -> bool:
        return self.family.is_one_d

    @property
    def polarization_axis(self) -> Optional[int]:
        """Field axis of a 1-D mode (1 for y, 2 for z)."""
        if self.family == ModeFamily.ONE_D_Y:
            return 1
        if self.family == ModeFamily.ONE_D_Z:
            return 2
        return None

    @property
    def label(self) -> str:
        if self.is_one_d:
            return f"{self.family.value}:{self.n}"
        if max(self.indices) < 10:
            return f"{self.family.value}{self.n}{self.p}{self.q}"
        return f"{self.family.value}({self.n},{self.p},{self.q})"

    def __str__(self) -> str:
        return self.label


class Couplings(BaseModel):
    """
    Self-interaction couplings of the quartic Lagrangian.

    ``kappa`` multiplies (F·F)² and ``kappa*beta`` multiplies (F·F̃)².
    Both may be numbers or sympy symbols.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kappa: Any = Field(sympy.Integer(1), description="Overall coupling κ")
    beta: Any = Field(sympy.Rational(7, 4), description="Ratio β of the two invariants")

    @field_validator("kappa", "beta", mode="before")
    @classmethod
    def validate_coupling(cls, v: Any) -> sympy.Expr:
        if isinstance(v, float):
            return sympy.Float(v)
        return sympy.sympify(v, locals=COUPLING_SYMBOLS)


class GeometryFamily(BaseModel):
    """
    One-parameter family of boxes L_x:L_y:L_z = ρ:1:r.

    ``xy_ratio`` is ρ = L_x/L_y; ρ = 1 is the 1:1:r family.
    """

    model_config = ConfigDict(frozen=True)

    xy_ratio: float = Field(1.0, gt=0, description="Fixed ratio L_x/L_y")

    @classmethod
    def parse(cls, text: str) -> "GeometryFamily":
        """
        Parse ``1:1:r`` or ``2:1:r``.

        Raises:
            GeometryError: If the text is not a family label
        """
        parts = [p.strip() for p in text.split(":")]
        if len(parts) != 3 or parts[2].lower() != "r":
            raise GeometryError(f"Family must look like 'a:b:r', got {text!r}")
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError as e:
            raise GeometryError(f"Invalid family {text!r}") from e
        if a <= 0 or b <= 0:
            raise GeometryError(f"Family ratios must be positive, got {text!r}")
        return cls(xy_ratio=a / b)

    @property
    def label(self) -> str:
        ratio = self.xy_ratio
        if float(ratio).is_integer():
            return f"{int(ratio)}:1:r"
        return f"{ratio:g}:1:r"

    def geometry(self, r: Any, lz: Any = 1) -> CavityGeometry:
        """Member of the family at aspect ratio ``r``."""
        rho = sympy.nsimplify(self.xy_ratio)
        return CavityGeometry.from_ratio(rho, 1, r, lz=lz)


class CacheConfig(BaseModel):
    """
    Cache configuration for memoized profiles and integrals.

    Attributes:
        enabled: Whether caching is enabled
        backend: Cache backend type ('lru')
        max_size: Maximum number of entries in cache
    """

    enabled: bool = Field(True, description="Enable caching")
    backend: str = Field("lru", description="Cache backend type: 'lru'")
    max_size: int = Field(4096, description="Maximum cache size (1-1000000)")

    @field_validator("max_size")
    @classmethod
    def validate_max_size(cls, v: int) -> int:
        if not 0 <= v <= 1000000:
            raise ValueError("max_size must be between 0 and 1000000")
        return v

    model_config = ConfigDict(
        json_schema_extra={"example": {"enabled": True, "backend": "lru", "max_size": 4096}}
    )


class LoggingConfig(BaseModel):
    """
    Logging configuration.

    Attributes:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format: Log format ('json' or 'text')
        file: Optional log file path
    """

    level: str = Field("WARNING", description="Log level")
    format: str = Field("text", description="Log format: 'json' or 'text'")
    file: Optional[str] = Field(None, description="Log file path")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"level must be one of: {', '.join(valid_levels)}")
        return v.upper()

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        if v not in ["json", "text"]:
            raise ValueError("format must be 'json' or 'text'")
        return v


class OutputConfig(BaseModel):
    """
    Output configuration.

    Attributes:
        format: Output format ('json' or 'table')
        indent: JSON indentation
        significant_figures: Digits shown in tables
    """

    format: str = Field("json", description="Output format")
    indent: int = Field(2, ge=0, description="JSON indentation")
    significant_figures: int = Field(4, ge=1, le=17, description="Digits shown in tables")

    @field_validator("format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        valid_formats = ["json", "table"]
        if v not in valid_formats:
            raise ValueError(f"format must be one of: {', '.join(valid_formats)}")
        return v


class ResonanceConfig(BaseModel):
    """
    Resonance solver and scanner settings.

    Attributes:
        max_index: Largest mode index enumerated by the scan
        r_min: Lower end of the aspect-ratio bracket
        r_max: Upper end of the aspect-ratio bracket
        grid_points: Log-spaced bracketing grid size
        xy_ratio: Fixed L_x/L_y of the geometry family
    """

    max_index: int = Field(4, ge=1, le=8, description="Largest mode index (<= 8)")
    r_min: float = Field(1e-3, gt=0, description="Smallest aspect ratio")
    r_max: float = Field(1e2, gt=0, description="Largest aspect ratio")
    grid_points: int = Field(10000, ge=10, description="Bracketing grid size")
    xy_ratio: float = Field(1.0, gt=0, description="Fixed L_x/L_y")


class ExperimentConfig(BaseModel):
    """
    Inputs of the sensitivity estimate, in laboratory units.

    Attributes:
        kappa: Coupling in eV^-4 (None selects the QED value)
        beta: Ratio of the two invariants
        quality_factor: Minimal quality factor Q of the modes
        pump_field: Pump field amplitude F0 in tesla
        lz: Cavity length L_z in metres
        temperature: Cavity temperature in kelvin
        snr: Target signal-to-noise ratio
        aspect_ratio: Box aspect ratio r (None selects the resonant root)
        xy_ratio: Fixed L_x/L_y
        pump: Pump mode label
        signals: Signal mode labels (Bose partner first)
        pump_occupations: Mean pump occupations (N1, N2)
        coherent_amplitudes: Coherent amplitudes (|xi|, |eta|)
        omega_s: Signal frequency override in eV
        coherence_time: Coherence time override in seconds

    Examples:
        >>> cfg = ExperimentConfig(pump_field=0.1, quality_factor=1e10)
        >>> cfg.beta
        1.75
    """

    kappa: Optional[float] = Field(None, ge=0, description="Coupling κ in eV^-4")
    beta: float = Field(1.75, description="Ratio β of the two invariants")
    quality_factor: float = Field(1e10, description="Quality factor Q (>= 100)")
    pump_field: Optional[float] = Field(None, ge=0, description="Pump amplitude F0 [T]")
    lz: float = Field(0.2, gt=0, description="Cavity length L_z [m]")
    temperature: float = Field(1.0, gt=0, description="Temperature [K]")
    snr: float = Field(5.0, gt=0, description="Target SNR")
    aspect_ratio: Optional[float] = Field(None, gt=0, description="Aspect ratio r")
    xy_ratio: float = Field(1.0, gt=0, description="Fixed L_x/L_y")
    pump: str = Field("TE011", description="Pump mode")
    signals: Tuple[str, str] = Field(("TM110", "TM130"), description="Signal modes")
    pump_occupations: Optional[Tuple[float, float]] = Field(
        None, description="Mean occupations (N1, N2)"
    )
    coherent_amplitudes: Optional[Tuple[float, float]] = Field(
        None, description="Coherent amplitudes (|xi|, |eta|)"
    )
    omega_s: Optional[float] = Field(None, gt=0, description="Signal frequency override [eV]")
    coherence_time: Optional[float] = Field(
        None, gt=0, description="Coherence time override [s]"
    )

    @field_validator("quality_factor")
    @classmethod
    def validate_quality_factor(cls, v: float) -> float:
        if v < 100:
            raise ValueError("quality_factor must be at least 100 (high-Q limit)")
        return v

    @field_validator("pump", mode="after")
    @classmethod
    def validate_pump(cls, v: str) -> str:
        return ModeId.parse(v).label

    @field_validator("signals", mode="after")
    @classmethod
    def validate_signals(cls, v: Tuple[str, str]) -> Tuple[str, str]:
        return (ModeId.parse(v[0]).label, ModeId.parse(v[1]).label)

    @field_validator("pump_occupations", "coherent_amplitudes")
    @classmethod
    def validate_pair(
        cls, v: Optional[Tuple[float, float]]
    ) -> Optional[Tuple[float, float]]:
        if v is not None and (v[0] < 0 or v[1] < 0):
            raise ValueError("pump occupations and amplitudes must be nonnegative")
        return v

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "beta": 1.75,
                "quality_factor": 1e10,
                "pump_field": 0.1,
                "lz": 0.2,
                "temperature": 1.0,
                "snr": 5.0,
            }
        }
    )


class ProcessParameters(BaseModel):
    """
    Parameters of a registered process.

    Only the fields a process reads matter; the rest keep their defaults.

    Attributes:
        geometry: ``Lx:Ly:Lz`` text, ``symbolic`` or None for the process default
        lz: Anchor length that turns ``geometry`` into proportions
        pump: Pump mode of 2→2 and coherent processes
        signals: Signal modes (Bose partner first)
        pumps: Three pump modes of a 3-D merge
        signal: Signal mode of a 3-D merge
        n: Harmonic of the two equal slab pumps
        p: Harmonic of the third slab pump
        polarizations: Four slab polarisations (i, j, l, s)
        signal_harmonic: Slab signal harmonic (defaults to 2n + p)
        xi: Coherent pump amplitude
        eta: Coherent partner amplitude
        monomial: Cartesian component monomial to report, e.g. EyEyEyEy
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    geometry: Optional[str] = Field(None, description="Geometry text or 'symbolic'")
    lz: Optional[float] = Field(None, gt=0, description="Anchor length for ratios")
    pump: str = Field("TE011", description="Pump mode")
    signals: Tuple[str, str] = Field(("TM110", "TM130"), description="Signal modes")
    pumps: Tuple[str, str, str] = Field(
        ("TE011", "TE011", "TE011"), description="3-D merge pump modes"
    )
    signal: str = Field("TE033", description="3-D merge signal mode")
    n: int = Field(1, ge=1, description="Slab pump harmonic")
    p: int = Field(1, ge=1, description="Third slab pump harmonic")
    polarizations: str = Field("yyyy", description="Slab polarisations i, j, l, s")
    signal_harmonic: Optional[int] = Field(None, ge=1, description="Slab signal harmonic")
    xi: Any = Field(1, description="Coherent pump amplitude ξ")
    eta: Any = Field(1, description="Coherent partner amplitude η")
    monomial: Optional[str] = Field(None, description="Component monomial to report")

    @field_validator("polarizations")
    @classmethod
    def validate_polarizations(cls, v: str) -> str:
        v = v.lower()
        if len(v) != 4 or set(v) - {"y", "z"}:
            raise ValueError("polarizations must be four of 'y'/'z', e.g. 'yyzz'")
        return v

    @field_validator("pump", "signal", mode="after")
    @classmethod
    def validate_mode_label(cls, v: str) -> str:
        return ModeId.parse(v).label

    @field_validator("signals", "pumps", mode="after")
    @classmethod
    def validate_mode_labels(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(ModeId.parse(label).label for label in v)

    @field_validator("xi", "eta", mode="before")
    @classmethod
    def validate_amplitude(cls, v: Any) -> sympy.Expr:
        if isinstance(v, float):
            return sympy.Float(v)
        return sympy.sympify(v)

    def build_geometry(self, default: CavityGeometry) -> CavityGeometry:
        """The configured geometry, or ``default`` when none is set."""
        if self.geometry is None:
            return default
        if self.geometry.strip().lower() == "symbolic":
            return CavityGeometry.symbolic()
        return CavityGeometry.parse(self.geometry, lz=self.lz)


class CouplingsConfig(BaseModel):
    """
    Couplings used by the amplitude commands.

    Amplitudes are reported in units where κ is a pure number, so the
    default κ = 1 gives results in units of κ.

    Attributes:
        kappa: Overall coupling κ
        beta: Ratio β of the two invariants
    """

    kappa: float = Field(1.0, ge=0, description="Overall coupling κ")
    beta: float = Field(1.75, description="Ratio β of the two invariants")

    def to_couplings(self) -> Couplings:
        """Exact Couplings; decimal inputs become rationals (1.75 -> 7/4)."""
        return Couplings(
            kappa=sympy.nsimplify(self.kappa, rational=True),
            beta=sympy.nsimplify(self.beta, rational=True),
        )
