"""
Configuration management for cavity-eh.

Supports loading configuration from environment variables, .env files,
and YAML or JSON files using Pydantic settings.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from cavity_eh.exceptions import CavityEHError, OffResonanceError
from cavity_eh.models import (
    CacheConfig,
    CouplingsConfig,
    ExperimentConfig,
    LoggingConfig,
    OutputConfig,
    ResonanceConfig,
)

logger = logging.getLogger(__name__)

# Niobium loses superconductivity above roughly this surface field
CRITICAL_FIELD_TESLA = 0.2
LOW_QUALITY_FACTOR = 1e3


class AppConfig(BaseSettings):
    """
    Application configuration.

    Configuration can be loaded from:
    - Environment variables (prefixed with CAVITY_EH_, sections split by ``__``)
    - .env file
    - YAML or JSON configuration file

    Attributes:
        couplings: κ and β for the amplitude commands
        experiment: Sensitivity estimate inputs
        resonance: Resonance solver and scan settings
        cache: Computation cache configuration
        logging: Logging configuration
        output: Output configuration

    Examples:
        >>> config = AppConfig()
        >>> config.experiment.quality_factor
        10000000000.0

        >>> # Load from YAML file
        >>> config = AppConfig.from_yaml("config.yaml")
    """

    model_config = SettingsConfigDict(
        env_prefix="CAVITY_EH_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
    )

    couplings: CouplingsConfig = Field(
        default_factory=CouplingsConfig, description="Couplings κ and β"
    )
    experiment: ExperimentConfig = Field(
        default_factory=ExperimentConfig, description="Experiment inputs"
    )
    resonance: ResonanceConfig = Field(
        default_factory=ResonanceConfig, description="Resonance solver settings"
    )
    cache: CacheConfig = Field(default_factory=CacheConfig, description="Cache configuration")
    logging: LoggingConfig = Field(
        default_factory=LoggingConfig, description="Logging configuration"
    )
    output: OutputConfig = Field(default_factory=OutputConfig, description="Output configuration")

    @classmethod
    def from_yaml(cls, yaml_path: str) -> "AppConfig":
        """
        Load configuration from a YAML or JSON file.

        JSON is a subset of YAML, so both go through the same loader.

        Args:
            yaml_path: Path to a .yaml, .yml or .json file

        Returns:
            AppConfig instance loaded from the file

        Raises:
            FileNotFoundError: If the file doesn't exist
            ValueError: If the file has an unsupported suffix or is not a mapping
        """
        config_file = Path(yaml_path)
        if not config_file.exists():
            raise FileNotFoundError(f"Config file not found: {yaml_path}")
        if config_file.suffix.lower() not in (".yaml", ".yml", ".json"):
            raise ValueError(f"Unsupported config format: {config_file.suffix}")

        with open(config_file, encoding="utf-8") as f:
            data = yaml.safe_load(f)

        if not data:
            data = {}
        if not isinstance(data, dict):
            raise ValueError(f"Config file must contain a mapping: {yaml_path}")

        return cls(**data)

    def to_yaml(self, yaml_path: str) -> None:
        """
        Save configuration to a YAML file.

        Args:
            yaml_path: Path where to save the YAML file

        Examples:
            >>> config = AppConfig()
            >>> config.to_yaml("config.yaml")
        """
        data = self.model_dump(exclude_none=True, mode="json")

        yaml_file = Path(yaml_path)
        yaml_file.parent.mkdir(parents=True, exist_ok=True)

        with open(yaml_file, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False, allow_unicode=True)

    def with_overrides(self, **flags: Any) -> "AppConfig":
        """
        Copy of the configuration with CLI flags applied.

        Keys name ``section__field`` (``experiment__lz=0.3``); None values
        are dropped so unset flags keep the file value.

        Examples:
            >>> config = AppConfig().with_overrides(experiment__lz=0.3, couplings__beta=None)
            >>> config.experiment.lz
            0.3
        """
        data = self.model_dump()
        for key, value in flags.items():
            if value is None:
                continue
            section, _, field = key.partition("__")
            if not field:
                raise ValueError(f"Override key must look like 'section__field': {key}")
            if section not in data:
                raise ValueError(f"Unknown config section: {section}")
            data[section][field] = value
        return type(self)(**data)

    def validate_config(self) -> Dict[str, Any]:
        """
        Validate the configuration and return validation results.

        Returns:
            Dictionary with validation results

        Examples:
            >>> config = AppConfig.from_yaml("config.yaml")
            >>> results = config.validate_config()
            >>> if results["valid"]:
            ...     print("Configuration is valid")
        """
        issues = []
        warnings = []
        experiment = self.experiment

        if experiment.quality_factor < LOW_QUALITY_FACTOR:
            warnings.append(
                f"Quality factor {experiment.quality_factor:g} is low; the dissipation "
                "time Q/ω assumes a high-Q cavity"
            )

        if experiment.pump_field is not None and experiment.pump_field > CRITICAL_FIELD_TESLA:
            warnings.append(
                f"Pump field {experiment.pump_field:g} T exceeds the niobium critical "
                f"field ({CRITICAL_FIELD_TESLA} T)"
            )

        if experiment.aspect_ratio is not None:
            from cavity_eh.experiment import resonant_aspect_ratio

            try:
                resonant_aspect_ratio(experiment)
            except OffResonanceError as e:
                issues.append(str(e))
            except CavityEHError as e:
                issues.append(f"Experiment modes: {e}")

        if self.resonance.r_min >= self.resonance.r_max:
            issues.append("resonance.r_min must be below resonance.r_max")

        if self.cache.enabled and self.cache.max_size < 1:
            issues.append("Cache max_size must be at least 1 when caching is enabled")

        return {
            "valid": len(issues) == 0,
            "issues": issues,
            "warnings": warnings,
            "issue_count": len(issues),
            "warning_count": len(warnings),
        }


def load_config(
    yaml_path: Optional[str] = None, env_file: Optional[str] = None
) -> AppConfig:
    """
    Load configuration from various sources.

    Priority (highest to lowest):
    1. YAML or JSON file (if provided)
    2. Environment variables
    3. .env file
    4. Defaults

    Args:
        yaml_path: Optional path to a configuration file
        env_file: Optional path to .env file

    Returns:
        AppConfig instance

    Examples:
        >>> config = load_config()
        >>> config = load_config(yaml_path="config.yaml")
    """
    if yaml_path:
        logger.debug("loading configuration from %s", yaml_path)
        return AppConfig.from_yaml(yaml_path)

    if env_file:
        return AppConfig(_env_file=env_file)

    return AppConfig()


def create_default_config() -> AppConfig:
    """
    Create a default configuration with the documented defaults.

    Returns:
        AppConfig instance with default settings

    Examples:
        >>> config = create_default_config()
        >>> config.to_yaml("config.yaml")
    """
    return AppConfig(
        couplings=CouplingsConfig(kappa=1.0, beta=1.75),
        experiment=ExperimentConfig(
            beta=1.75,
            quality_factor=1e10,
            pump_field=0.1,
            lz=0.2,
            temperature=1.0,
            snr=5.0,
        ),
        resonance=ResonanceConfig(max_index=4, r_min=1e-3, r_max=1e2, grid_points=10000),
        cache=CacheConfig(enabled=True, backend="lru", max_size=4096),
        logging=LoggingConfig(level="WARNING", format="text"),
        output=OutputConfig(format="json", indent=2, significant_figures=4),
    )
