import json
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .utils.config import get_cli_config_path
from .utils.errors import AnharmonicError, ErrorCode

MeshKind = Literal["laguerre", "laguerre_regularized", "hermite"]
OutputFormat = Literal["csv", "json"]


class ConfigError(AnharmonicError):
    code: ErrorCode = "config_error"


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mesh_size: int = Field(default=50, ge=5, le=50)
    mesh_kind: MeshKind = "laguerre"
    grid_panels: int = Field(default=128, ge=16)
    panel_order: int = Field(default=16, ge=4, le=32)
    quadrature_rel_tol: float = Field(default=1e-11, gt=0)
    optimizer_restarts: int = Field(default=3, ge=0)
    optimizer_xatol: float = Field(default=1e-8, gt=0)
    optimizer_fatol: float = Field(default=1e-11, gt=0)
    pt_order: int = Field(default=3, ge=1, le=8)
    output_format: OutputFormat = "csv"
    jobs: int = Field(default=1, ge=1)

    @classmethod
    def from_user_settings(cls, config_path: Path) -> "Settings":
        try:
            content = config_path.read_bytes() if config_path.exists() else b"{}"

            user_settings = json.loads(content)
        except json.JSONDecodeError:
            user_settings = {}

        if not isinstance(user_settings, dict):
            user_settings = {}

        known = {k: v for k, v in user_settings.items() if k in cls.model_fields}

        try:
            return cls(**known)
        except ValidationError:
            return cls()

    @classmethod
    def from_file(cls, config_path: Path) -> "Settings":
        """Strict variant used for ``--config``: problems are reported."""
        try:
            user_settings = json.loads(config_path.read_bytes())
        except OSError as e:
            raise ConfigError(f"Cannot read config file {config_path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {config_path} is not valid JSON") from e

        if not isinstance(user_settings, dict):
            raise ConfigError(f"Config file {config_path} must hold a JSON object")

        try:
            return cls(**user_settings)
        except ValidationError as e:
            errors = "; ".join(
                f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
                for error in e.errors()
            )
            raise ConfigError(f"Invalid config file {config_path}: {errors}") from e

    @classmethod
    def get(cls) -> "Settings":
        return cls.from_user_settings(get_cli_config_path())

    @classmethod
    def resolve(cls, config_path: Path | None, **overrides: Any) -> "Settings":
        """Settings from ``--config`` (or the user file), then explicit flags."""
        settings = cls.from_file(config_path) if config_path else cls.get()

        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return settings

        try:
            return cls(**{**settings.model_dump(), **updates})
        except ValidationError as e:
            raise ConfigError(str(e)) from e
