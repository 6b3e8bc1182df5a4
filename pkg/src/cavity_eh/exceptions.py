"""
Exception hierarchy for cavity-eh.

Every error raised on purpose by the package derives from CavityEHError.
Input-validation errors also derive from ValueError so that callers that
only know about the builtin type keep working.
"""


class CavityEHError(Exception):
    """Base class for all cavity-eh errors."""


class GeometryError(CavityEHError, ValueError):
    """Invalid box dimensions or mismatched geometries."""


class ModeValidationError(CavityEHError, ValueError):
    """Mode indices do not describe a nonzero cavity eigenfunction."""


class HarmonicOverflowError(CavityEHError, ValueError):
    """A trigonometric harmonic exceeded the supported bound."""


class QuadratureError(CavityEHError, ValueError):
    """Quadrature rule cannot integrate the requested polynomial exactly."""


class LegCountError(CavityEHError, ValueError):
    """External state does not saturate the four field slots."""


class IncompatibleModesError(CavityEHError, ValueError):
    """Mode families cannot be combined in the requested process."""


class OffResonanceError(CavityEHError, ValueError):
    """Energy is not conserved for the requested geometry."""


class DegenerateResonanceError(CavityEHError, ValueError):
    """The resonance condition holds identically for every aspect ratio."""


class MomentumConservationError(CavityEHError, ValueError):
    """Four-momentum or harmonic bookkeeping does not balance."""


class UnitConversionError(CavityEHError, ValueError):
    """Unknown unit or unsupported conversion."""


class MissingPumpError(CavityEHError, ValueError):
    """Neither a pump field nor pump occupations were provided."""
