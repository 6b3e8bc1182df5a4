"""
Plane-wave view of the quartic vertex.

Each photon enters the Lorentz-invariant vertex through its field
strength F^{μν} = ±i(k^μ ε^ν - k^ν ε^μ). Decomposing standing cavity
modes into travelling waves and keeping only momentum-conserving tuples
shows why merging amplitudes vanish: the surviving waves are collinear.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import sympy

from cavity_eh.amplitudes import ProcessSpec, ProcessTag, matrix_element
from cavity_eh.exceptions import IncompatibleModesError, MomentumConservationError
from cavity_eh.models import Couplings
from cavity_eh.modes import decompose_plane_waves
from cavity_eh.wick import Side

logger = logging.getLogger(__name__)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
TOLERANCE = 1e-12
CONSISTENCY_TOLERANCE = 1e-10


def _levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(
            1 for a in range(4) for b in range(a + 1, 4) if perm[a] > perm[b]
        )
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


LEVI_CIVITA = _levi_civita()


@dataclass(frozen=True, eq=False)
class PlaneWaveLeg:
    """
    Massless photon with four-momentum (ω, k) and polarisation ε.

    ``side`` is ``in`` for absorbed and ``out`` for emitted photons.
    """

    momentum: np.ndarray
    polarization: np.ndarray
    side: Side

    @classmethod
    def from_vectors(
        cls, k: Sequence[float], polarization: Sequence[complex], side: Side
    ) -> "PlaneWaveLeg":
        """Build from a spatial wavevector and spatial polarisation."""
        k = np.asarray(k, dtype=float)
        momentum = np.concatenate([[np.linalg.norm(k)], k])
        eps = np.concatenate([[0.0], np.asarray(polarization, dtype=complex)])
        return cls(momentum, eps, Side(side))

    def __post_init__(self):
        omega = self.momentum[0]
        k_norm = np.linalg.norm(self.momentum[1:])
        if abs(omega - k_norm) > TOLERANCE * max(1.0, abs(omega)):
            raise ValueError(f"photon is not massless: ω={omega}, |k|={k_norm}")
        k_dot_e = self.momentum @ METRIC @ self.polarization
        if abs(k_dot_e) > TOLERANCE * max(1.0, abs(omega)) * max(
            1.0, float(np.linalg.norm(self.polarization))
        ):
            raise ValueError("polarisation is not transverse to the momentum")

    def field_strength(self) -> np.ndarray:
        """F^{μν}; outgoing photons use -i and the conjugate polarisation."""
        if self.side == Side.IN:
            eps, phase = self.polarization, 1j
        else:
            eps, phase = np.conj(self.polarization), -1j
        k = self.momentum
        return phase * (np.outer(k, eps) - np.outer(eps, k))


def _lower(f: np.ndarray) -> np.ndarray:
    return METRIC @ f @ METRIC


def invariant(f: np.ndarray, g: np.ndarray) -> complex:
    """F_{μν} G^{μν}."""
    return complex(np.einsum("mn,mn->", _lower(f), g))


def dual_invariant(f: np.ndarray, g: np.ndarray) -> complex:
    """F_{μν} G̃^{μν} = ½ ε^{μνρσ} F_{μν} G_{ρσ}."""
    return complex(0.5 * np.einsum("mnrs,mn,rs->", LEVI_CIVITA, _lower(f), _lower(g)))


def eh_four_photon_vertex(
    legs: Sequence[PlaneWaveLeg], couplings: Optional[Couplings] = None
) -> complex:
    """
    Tree-level vertex κ[(F·F)² + β(F·F̃)²] summed over the 24 slot orders.

    Raises:
        ValueError: If not exactly four legs are given
        MomentumConservationError: If Σk_in ≠ Σk_out beyond 10⁻¹²
    """
    if len(legs) != 4:
        raise ValueError(f"the quartic vertex takes 4 legs, got {len(legs)}")
    couplings = couplings or Couplings()
    kappa = complex(sympy.N(couplings.kappa))
    beta = complex(sympy.N(couplings.beta))

    total_in = sum(leg.momentum for leg in legs if leg.side == Side.IN)
    total_out = sum(leg.momentum for leg in legs if leg.side == Side.OUT)
    scale = max(1.0, max(abs(leg.momentum[0]) for leg in legs))
    if np.max(np.abs(np.asarray(total_in) - np.asarray(total_out))) > TOLERANCE * scale:
        raise MomentumConservationError(
            f"four-momentum not conserved: in {total_in}, out {total_out}"
        )

    fields = [leg.field_strength() for leg in legs]
    value = 0j
    for a, b, c, d in itertools.permutations(range(4)):
        value += invariant(fields[a], fields[b]) * invariant(fields[c], fields[d])
        value += beta * dual_invariant(fields[a], fields[b]) * dual_invariant(
            fields[c], fields[d]
        )
    return kappa * value


def vertex_scale(
    legs: Sequence[PlaneWaveLeg], couplings: Optional[Couplings] = None
) -> float:
    """Bound on |vertex| from the leg sizes, used as the cancellation scale."""
    couplings = couplings or Couplings()
    kappa = abs(complex(sympy.N(couplings.kappa)))
    beta = abs(complex(sympy.N(couplings.beta)))
    size = 1.0
    for leg in legs:
        size *= 4.0 * abs(leg.momentum[0]) * float(np.linalg.norm(leg.polarization))
    return 24.0 * kappa * (1.0 + beta) * size


@dataclass(frozen=True)
class PlaneWaveReport:
    """Outcome of decomposing a merging process into travelling waves."""

    total_tuples: int
    survivors: int
    all_collinear: bool
    reduced_coefficient: sympy.Expr
    total: complex
    cavity_amplitude: complex
    magnitude: float = 0.0

    @property
    def total_vanishes(self) -> bool:
        """The survivor sum cancels relative to the size of its terms."""
        return abs(self.total) <= CONSISTENCY_TOLERANCE * self.magnitude

    @property
    def consistent(self) -> bool:
        """Both pictures agree on whether the merge vanishes; the cavity value is exact."""
        return bool(self.total_vanishes == (self.cavity_amplitude == 0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_tuples": self.total_tuples,
            "survivors": self.survivors,
            "all_collinear": self.all_collinear,
            "reduced_coefficient": str(self.reduced_coefficient),
            "total": [self.total.real, self.total.imag],
            "magnitude": self.magnitude,
            "cavity_amplitude": [self.cavity_amplitude.real, self.cavity_amplitude.imag],
            "consistent": self.consistent,
        }


def _collinear(vectors: List[np.ndarray]) -> bool:
    reference = next((v for v in vectors if np.linalg.norm(v) > 0), None)
    if reference is None:
        return True
    for v in vectors:
        cross = np.cross(reference, v)
        if np.linalg.norm(cross) > TOLERANCE * max(1.0, np.linalg.norm(reference) * np.linalg.norm(v)):
            return False
    return True


def planewave_consistency(
    spec: ProcessSpec,
    couplings: Optional[Couplings] = None,
    subs: Optional[Dict[Any, Any]] = None,
) -> PlaneWaveReport:
    """
    Re-evaluate a merging process leg by leg in plane waves.

    Every leg is split with ``decompose_plane_waves``. A tuple survives
    when the signed harmonics balance on every axis and the process
    conserves energy. Each survivor is weighted by the product of its
    expansion coefficients and evaluated with the plane-wave vertex.

    Args:
        spec: A 3→1 merging process
        couplings: κ and β for the vertex and the cavity amplitude
        subs: Values for geometry symbols (each defaults to 1)

    Raises:
        IncompatibleModesError: For processes other than 3→1 merging
    """
    if spec.tag not in (ProcessTag.MERGE_3TO1_1D, ProcessTag.MERGE_3TO1_3D):
        raise IncompatibleModesError("plane-wave consistency applies to 3->1 merging")
    couplings = couplings or Couplings()
    geom = spec.geometry
    subs = dict(subs or {})
    for symbol in geom.free_symbols:
        subs.setdefault(symbol, 1)

    legs = spec.state.legs()
    decompositions = [decompose_plane_waves(geom, mode) for mode, _ in legs]
    energy_ok = spec.is_on_resonance(subs)

    total_tuples = 0
    survivors = 0
    reduced = sympy.Integer(0)
    total = 0j
    magnitude = 0.0
    all_collinear = True
    for combo in itertools.product(*decompositions):
        total_tuples += 1
        balance = np.zeros(3, dtype=int)
        for (_, side), component in zip(legs, combo):
            sign = 1 if side == Side.IN else -1
            balance += sign * np.asarray(component.harmonics, dtype=int)
        if not energy_ok or np.any(balance != 0):
            continue
        survivors += 1
        weight = sympy.Mul(*(component.coefficient for component in combo))
        reduced += weight

        waves = []
        wavevectors: List[np.ndarray] = []
        for (_, side), component in zip(legs, combo):
            k = np.array([float(sympy.N(v.subs(subs))) for v in component.wavevector])
            eps = np.array([complex(sympy.N(v.subs(subs))) for v in component.polarization])
            wavevectors.append(k)
            waves.append(PlaneWaveLeg.from_vectors(k, eps, side))
        all_collinear = all_collinear and _collinear(wavevectors)
        contribution = complex(sympy.N(weight)) * eh_four_photon_vertex(waves, couplings)
        total += contribution
        magnitude += abs(complex(sympy.N(weight))) * vertex_scale(waves, couplings)

    cavity = matrix_element(spec, couplings).total
    cavity_value = 0j if cavity.is_zero else cavity.to_complex(subs)
    logger.debug("%d of %d plane-wave tuples conserve momentum", survivors, total_tuples)
    return PlaneWaveReport(
        total_tuples=total_tuples,
        survivors=survivors,
        all_collinear=all_collinear,
        reduced_coefficient=sympy.nsimplify(sympy.expand(reduced)),
        total=total,
        cavity_amplitude=cavity_value,
        magnitude=magnitude,
    )
