"""
Base process interface and registry system.

This module defines the abstract base class for cavity processes and the
registry that maps CLI-level process names to implementations.
"""

import logging
from abc import ABC, abstractmethod
from collections import OrderedDict
from typing import Any, Dict, List, Optional, Type

import sympy

from cavity_eh.amplitudes import ProcessSpec, component_piece, matrix_element
from cavity_eh.models import CavityGeometry, Couplings, ProcessParameters

logger = logging.getLogger(__name__)


class BaseProcess(ABC):
    """
    Abstract base class for cavity processes.

    A process turns its parameters into a ProcessSpec and evaluates it.
    Subclasses implement ``default_geometry`` and ``build_spec`` and may
    extend ``evaluate`` with process-specific quantities.

    Attributes:
        params: Process parameters

    Examples:
        >>> class MyProcess(BaseProcess):
        ...     def default_geometry(self) -> CavityGeometry:
        ...         return CavityGeometry.cube(1)
        ...
        ...     def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        ...         return scatter_2to2_spec(geom)
    """

    name: str = ""
    description: str = ""

    def __init__(self, params: Optional[ProcessParameters] = None):
        """
        Initialize process with parameters.

        Args:
            params: Process parameters (defaults apply when omitted)
        """
        self.params = params or ProcessParameters()

    @abstractmethod
    def default_geometry(self) -> CavityGeometry:
        """Geometry used when the parameters name none."""
        raise NotImplementedError("Subclasses must implement default_geometry()")

    @abstractmethod
    def build_spec(self, geom: CavityGeometry) -> ProcessSpec:
        """
        Build the process for a geometry.

        Args:
            geom: Cavity geometry

        Returns:
            ProcessSpec ready for ``matrix_element``
        """
        raise NotImplementedError("Subclasses must implement build_spec()")

    def geometry(self) -> CavityGeometry:
        return self.params.build_geometry(self.default_geometry())

    def spec(self) -> ProcessSpec:
        return self.build_spec(self.geometry())

    def evaluate(self, couplings: Optional[Couplings] = None) -> Dict[str, Any]:
        """
        Evaluate the matrix element.

        Free geometry symbols are set to 1 for the numeric fields; the
        ``exact`` entry keeps the symbolic values.

        Returns:
            Ordered dict with process, label, invariant parts, total,
            components and flags
        """
        spec = self.spec()
        amplitude = matrix_element(spec, couplings)
        subs = {symbol: 1 for symbol in spec.geometry.free_symbols}

        data: Dict[str, Any] = OrderedDict()
        data["process"] = self.name
        data["label"] = spec.label
        data["geometry"] = [str(length) for length in spec.geometry.lengths]
        data.update(amplitude.to_dict(subs))
        data["exact"] = OrderedDict(
            [
                ("c_F4", str(sympy.simplify(amplitude.c_f4.expr))),
                ("c_FFdual", str(sympy.simplify(amplitude.c_ffdual.expr))),
                ("M_total", str(sympy.simplify(amplitude.total.expr))),
            ]
        )
        if self.params.monomial:
            kappa = (couplings or Couplings()).kappa
            piece = component_piece(spec, self.params.monomial, kappa)
            data["component_piece"] = OrderedDict(
                [("monomial", self.params.monomial), ("value", str(piece.simplify()))]
            )
        if subs:
            data["symbols_set_to_one"] = sorted(str(s) for s in subs)
        return data


class ProcessRegistry:
    """
    Registry for the processes the CLI can evaluate.

    Attributes:
        _processes: Dictionary mapping process names to process classes
        _aliases: Short CLI names mapped to registered names

    Examples:
        >>> registry = ProcessRegistry()
        >>> registry.register("scatter_2to2", Scatter2to2Process, aliases=["2to2"])
        >>> process = registry.get_process("2to2")
    """

    def __init__(self):
        """Initialize the process registry."""
        self._processes: Dict[str, Type[BaseProcess]] = {}
        self._aliases: Dict[str, str] = {}

    def register(
        self,
        name: str,
        process_class: Type[BaseProcess],
        aliases: Optional[List[str]] = None,
    ) -> None:
        """
        Register a process class.

        Args:
            name: Process name
            process_class: Process class (must inherit from BaseProcess)
            aliases: Alternative names accepted by ``get_process``

        Raises:
            ValueError: If the class does not inherit from BaseProcess
        """
        if not isinstance(process_class, type) or not issubclass(process_class, BaseProcess):
            raise ValueError(f"{process_class} must inherit from BaseProcess")
        self._processes[name] = process_class
        for alias in aliases or []:
            self._aliases[alias] = name
        logger.debug("registered process %s", name)

    def unregister(self, name: str) -> None:
        """
        Unregister a process and its aliases.

        Args:
            name: Process name to unregister
        """
        self._processes.pop(name, None)
        self._aliases = {a: n for a, n in self._aliases.items() if n != name}

    def resolve(self, name: str) -> Optional[str]:
        """Registered name for a name or alias, or None."""
        if name in self._processes:
            return name
        return self._aliases.get(name)

    def get_process(
        self, name: str, params: Optional[ProcessParameters] = None
    ) -> Optional[BaseProcess]:
        """
        Get a process instance by name or alias.

        Args:
            name: Process name or alias
            params: Process parameters

        Returns:
            Process instance if found, None otherwise
        """
        resolved = self.resolve(name)
        if resolved is None:
            return None
        return self._processes[resolved](params)

    def list_processes(self) -> List[str]:
        """
        List all registered process names.

        Examples:
            >>> get_registry().list_processes()
            ['merge_3to1_1d', 'merge_3to1_3d', 'scatter_2to2', 'coherent_minus']
        """
        return list(self._processes.keys())

    def aliases(self, name: str) -> List[str]:
        return [alias for alias, target in self._aliases.items() if target == name]

    def describe(self) -> List[Dict[str, Any]]:
        """Name, aliases and description of every registered process."""
        return [
            {
                "name": name,
                "aliases": self.aliases(name),
                "description": cls.description,
            }
            for name, cls in self._processes.items()
        ]


# Global registry instance
_global_registry: Optional[ProcessRegistry] = None


def get_registry() -> ProcessRegistry:
    """
    Get the global process registry with the built-in processes registered.

    Returns:
        Global ProcessRegistry instance
    """
    global _global_registry
    if _global_registry is None:
        from cavity_eh.processes import register_builtin_processes

        _global_registry = ProcessRegistry()
        register_builtin_processes(_global_registry)
    return _global_registry
