"""
Configuration management for bhq.
"""

import os
import yaml
import logging
from pathlib import Path
from typing import Dict, Any, Optional
from pydantic import BaseModel, Field, ValidationError

from .errors import InputError

# Set up logging
logger = logging.getLogger(__name__)

MAX_DIM_ENV = "BHQ_MAX_DIM"


class LimitsConfig(BaseModel):
    """Enumeration caps for the hypercube engine."""
    max_dim: int = Field(default=24, ge=1, description="Largest cube dimension the engine enumerates")
    max_leaves: int = Field(default=12, ge=1, description="Largest leaf count for labeling brute force")
    workers: int = Field(default=1, ge=1, description="Worker processes for capacity brute force")
    dot_max_dim: int = Field(default=6, ge=1, description="Largest cube dimension exported as DOT")


class VerificationConfig(BaseModel):
    """Defaults for finite-world verification runs."""
    random_cases: int = Field(default=500, ge=1, description="Cases per randomized run")
    seed: int = Field(default=0, description="Seed used when none is given")
    exhaustive_max_universe: int = Field(default=3, ge=1, description="Universe size bound for exhaustive runs")
    exhaustive_max_m: int = Field(default=5, ge=1, description="Chain length bound for exhaustive runs")
    general_tree_cases: int = Field(default=100, ge=0, description="Extra general-tree cases for machine-to-tt random runs")
    exhaustive_max_arity: int = Field(default=3, ge=1, description="Largest arity for exhaustive tt-to-bh runs")
    batch_size: int = Field(default=100, ge=1, description="Cases per seeded batch")


class PreferencesConfig(BaseModel):
    """User preferences configuration."""
    verbose: bool = Field(default=False, description="Verbose output")
    log_level: str = Field(default="WARNING", description="Logging level")


class Config(BaseModel):
    """Main configuration class for bhq."""
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)
    preferences: PreferencesConfig = Field(default_factory=PreferencesConfig)

    @classmethod
    def load_config(cls, config_path: Optional[Path] = None) -> "Config":
        """Load configuration from file or fall back to defaults, then apply the environment."""
        if config_path is None:
            config_path = cls.get_default_config_path()

        config = cls()
        if config_path.exists():
            try:
                with open(config_path, 'r') as f:
                    config_data = yaml.safe_load(f)

                if config_data is None:
                    logger.warning(f"Empty configuration file at {config_path}, using defaults")
                    config_data = {}

                config = cls(**config_data)
            except (yaml.YAMLError, ValidationError, TypeError) as e:
                logger.error(f"Invalid configuration file at {config_path}: {e}")
                logger.info("Using default configuration")
            except OSError as e:
                logger.error(f"Error reading configuration file {config_path}: {e}")
                logger.info("Using default configuration")
        else:
            logger.info(f"No configuration file at {config_path}, using defaults")

        config.apply_environment(os.environ)
        return config

    def apply_environment(self, environ: Dict[str, str]) -> None:
        """Apply environment overrides (currently only the dimension cap)."""
        raw = environ.get(MAX_DIM_ENV)
        if raw is None or raw == "":
            return
        try:
            value = int(raw)
        except ValueError:
            raise InputError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}")
        if value < 1:
            raise InputError(f"{MAX_DIM_ENV} must be positive, got {value}")
        logger.debug(f"{MAX_DIM_ENV} overrides max_dim: {self.limits.max_dim} -> {value}")
        self.limits.max_dim = value

    def save_config(self, config_path: Optional[Path] = None) -> Path:
        """Save configuration to file."""
        if config_path is None:
            config_path = self.get_default_config_path()

        try:
            config_path.parent.mkdir(parents=True, exist_ok=True)

            with open(config_path, 'w') as f:
                yaml.dump(self.model_dump(), f, default_flow_style=False, indent=2)

            logger.info(f"Configuration saved to {config_path}")
            return config_path
        except PermissionError:
            logger.error(f"Permission denied writing to {config_path}")
            raise
        except Exception as e:
            logger.error(f"Error saving configuration to {config_path}: {e}")
            raise

    @staticmethod
    def get_default_config_path() -> Path:
        """Get the default configuration file path."""
        home = Path.home()
        return home / ".bhq" / "config.yaml"

    def update_config(self, updates: Dict[str, Any]) -> None:
        """Update configuration with new values."""
        for key, value in updates.items():
            if hasattr(self, key):
                if isinstance(getattr(self, key), BaseModel):
                    # Update nested config
                    current_config = getattr(self, key)
                    for sub_key, sub_value in value.items():
                        if hasattr(current_config, sub_key):
                            setattr(current_config, sub_key, sub_value)
                else:
                    setattr(self, key, value)
