"""Three-photon merging processes in the slab and in the box."""

from collections import OrderedDict
from typing import Any, Dict, Optional

from cavity_eh.amplitudes import (
    ProcessSpec,
    merge_3to1_1d_spec,
    merge_3to1_3d_spec,
    merge_3to1_closed_form,
    merge_3to1_term,
)
from cavity_eh.models import CavityGeometry, Couplings, ModeId
from cavity_eh.planewave import planewave_consistency
from cavity_eh.registry import BaseProcess


class Merge3to1OneDProcess(BaseProcess):
    """
    Slab quanta (n, i), (n, j), (p, l) merging into (2n + p, s).

    Besides the matrix element the result lists the S-scaled operator
    brackets, their closed form and the plane-wave cross-check.

    Examples:
        >>> params = ProcessParameters(n=1, p=2, polarizations="yyzz")
        >>> Merge3to1OneDProcess(params).evaluate()["M_total"]
        0.0
    """

    name = "merge_3to1_1d"
    description = "1-D slab: three pump quanta merge into one signal quantum"

    def default_geometry(self) -> CavityGeometry:
        return CavityGeometry.symbolic()

    def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        p = self.params
        return merge_3to1_1d_spec(geom, p.n, p.p, p.polarizations, p.signal_harmonic)

    def evaluate(self, couplings: Optional[Couplings] = None) -> Dict[str, Any]:
        data = super().evaluate(couplings)
        p = self.params
        geom = self.geometry()
        if p.signal_harmonic in (None, 2 * p.n + p.p):
            terms = merge_3to1_term(geom, p.n, p.p, p.polarizations)
            data["normalised_terms"] = OrderedDict((k, str(v)) for k, v in terms.items())
            data["closed_form"] = str(merge_3to1_closed_form(geom, p.n, p.p, p.polarizations))
        report = planewave_consistency(self.build_spec(geom), couplings)
        data["planewave"] = report.to_dict()
        return data


class Merge3to1ThreeDProcess(BaseProcess):
    """Three box quanta merging into one, e.g. TE011³ -> TE033."""

    name = "merge_3to1_3d"
    description = "3-D box: three pump quanta merge into one signal quantum"

    def default_geometry(self) -> CavityGeometry:
        return CavityGeometry.symbolic()

    def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        pumps = [ModeId.parse(label) for label in self.params.pumps]
        return merge_3to1_3d_spec(geom, pumps, ModeId.parse(self.params.signal))

    def evaluate(self, couplings: Optional[Couplings] = None) -> Dict[str, Any]:
        data = super().evaluate(couplings)
        data["planewave"] = planewave_consistency(self.spec(), couplings).to_dict()
        return data
