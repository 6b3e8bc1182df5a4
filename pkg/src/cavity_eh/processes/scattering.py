"""Two-pump scattering into two signal modes, with Fock and coherent pumps."""

from typing import Any, Dict, Optional, Tuple

import sympy

from cavity_eh.amplitudes import (
    ProcessSpec,
    coherent_spec,
    scatter_2to2_closed_form,
    scatter_2to2_spec,
)
from cavity_eh.models import CavityGeometry, Couplings, ModeId
from cavity_eh.registry import BaseProcess

RESONANT_R = sympy.sqrt(sympy.sqrt(5) - 2)


def _modes(pump: str, signals: Tuple[str, str]) -> Tuple[ModeId, Tuple[ModeId, ModeId]]:
    return ModeId.parse(pump), (ModeId.parse(signals[0]), ModeId.parse(signals[1]))


class Scatter2to2Process(BaseProcess):
    """
    |2 pump⟩ -> |sig1, sig2⟩.

    The default geometry is the resonant 1:1:r box with L_z = 1, where the
    closed form is reported next to the engine value.
    """

    name = "scatter_2to2"
    description = "3-D box: two pump quanta scatter into two signal modes"

    def default_geometry(self) -> CavityGeometry:
        return CavityGeometry.one_one_r(RESONANT_R)

    def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        pump, signals = _modes(self.params.pump, self.params.signals)
        return scatter_2to2_spec(geom, pump, signals)

    def evaluate(self, couplings: Optional[Couplings] = None) -> Dict[str, Any]:
        data = super().evaluate(couplings)
        p = self.params
        if p.geometry is None and (p.pump, p.signals) == ("TE011", ("TM110", "TM130")):
            couplings = couplings or Couplings()
            closed = scatter_2to2_closed_form(RESONANT_R, couplings.beta, 1, couplings.kappa)
            data["closed_form"] = float(sympy.N(closed))
        return data


class CoherentMinusProcess(BaseProcess):
    """Coherent pump ξ and coherent partner η generating one quantum of sig2."""

    name = "coherent_minus"
    description = "3-D box: coherent pumps generate one signal quantum"

    def default_geometry(self) -> CavityGeometry:
        return CavityGeometry.one_one_r(RESONANT_R)

    def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        pump, signals = _modes(self.params.pump, self.params.signals)
        return coherent_spec(self.params.xi, self.params.eta, geom, pump, signals)
