"""Process package initialization."""

from cavity_eh.processes.merging import Merge3to1OneDProcess, Merge3to1ThreeDProcess
from cavity_eh.processes.scattering import CoherentMinusProcess, Scatter2to2Process
from cavity_eh.registry import ProcessRegistry


def register_builtin_processes(registry: ProcessRegistry) -> None:
    """Register the four built-in processes with their CLI aliases."""
    registry.register("merge_3to1_1d", Merge3to1OneDProcess, aliases=["3to1-1d"])
    registry.register("merge_3to1_3d", Merge3to1ThreeDProcess, aliases=["3to1-3d"])
    registry.register("scatter_2to2", Scatter2to2Process, aliases=["2to2"])
    registry.register("coherent_minus", CoherentMinusProcess, aliases=["coherent"])


__all__ = [
    "CoherentMinusProcess",
    "Merge3to1OneDProcess",
    "Merge3to1ThreeDProcess",
    "Scatter2to2Process",
    "register_builtin_processes",
]
