"""Run configuration.

Precedence: command-line flags > JSON config file > environment > defaults.
Environment values are read lazily, at call time, so they can be changed (or
monkeypatched) after import.
"""
import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from bound_key.errors import ConfigError
from observability.logger import get_logger

logger = get_logger("Config")

MEM_CAP_ENV = "BOUNDKEY_MEM_CAP"
DEFAULT_MEM_CAP = 4096

COMMANDS = ("verify-state", "ppt", "criterion", "protocol", "ccq", "pbit-mixture", "export")
FORMATS = ("json", "csv")
FACTORIES = ("rho", "x", "projectors", "rho_k")


def load_env_files() -> None:
    """Load .env then .env.local if present; variables already set win."""
    try:
        from dotenv import load_dotenv
    except ImportError:
        logger.debug("python-dotenv not installed; skipping .env files")
        return
    for name in (".env", ".env.local"):
        if Path(name).exists():
            load_dotenv(name, override=False)


def mem_cap() -> int:
    raw = os.environ.get(MEM_CAP_ENV, "").strip()
    if not raw:
        return DEFAULT_MEM_CAP
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{MEM_CAP_ENV}={raw!r} is not an integer") from e
    if value < 4:
        raise ConfigError(f"{MEM_CAP_ENV} must be at least 4, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    command: str
    D: int = 3
    k: Optional[int] = None
    k_max: int = 20
    p1: float = 0.75
    tol_psd: float = 1e-12
    tol_herm: float = 1e-12
    seed: int = 0
    output_path: Optional[str] = None
    format: str = "json"
    factory: str = "rho"
    mem_cap: Optional[int] = None

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"Unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        if self.factory not in FACTORIES:
            raise ConfigError(f"Unknown factory {self.factory!r}; choose from {', '.join(FACTORIES)}")
        if self.D < 3:
            raise ConfigError(f"D must be at least 3, got {self.D}")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"k must be at least 1, got {self.k}")
        if self.k_max < 1:
            raise ConfigError(f"k_max must be at least 1, got {self.k_max}")
        if not 0.0 <= self.p1 <= 1.0:
            raise ConfigError(f"p1 must lie in [0, 1], got {self.p1}")
        if self.tol_psd <= 0 or self.tol_herm <= 0:
            raise ConfigError("Tolerances must be positive")
        if self.mem_cap is not None and self.mem_cap < 4:
            raise ConfigError(f"mem_cap must be at least 4, got {self.mem_cap}")
        return self

    def resolved_mem_cap(self) -> int:
        return self.mem_cap if self.mem_cap is not None else mem_cap()

    def k_or(self, default: int) -> int:
        return self.k if self.k is not None else default

    def parameters(self) -> Dict[str, Any]:
        """Parameters echoed into reports (no output path, so reports stay comparable)."""
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "output_path"}


_FILE_KEYS = {
    "D": "D",
    "k": "k",
    "k_max": "k_max",
    "k-max": "k_max",
    "p1": "p1",
    "seed": "seed",
    "tol_psd": "tol_psd",
    "tol-psd": "tol_psd",
    "tol_herm": "tol_herm",
    "tol-herm": "tol_herm",
    "out": "output_path",
    "output_path": "output_path",
    "format": "format",
    "factory": "factory",
    "mem_cap": "mem_cap",
}


def read_config_file(path: str) -> Dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Config file {path} not found")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    unknown = sorted(k for k in raw if k not in _FILE_KEYS)
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {unknown}")
    return {_FILE_KEYS[k]: v for k, v in raw.items()}


def build_config(command: str, flags: Mapping[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """Layer defaults < config file < flags (``None`` flags are treated as unset)."""
    cfg = RunConfig(command=command)
    layered: Dict[str, Any] = {}
    if config_path:
        layered.update(read_config_file(config_path))
    layered.update({k: v for k, v in flags.items() if v is not None})
    try:
        cfg = replace(cfg, **layered)
        cfg = replace(
            cfg,
            D=int(cfg.D),
            k=None if cfg.k is None else int(cfg.k),
            k_max=int(cfg.k_max),
            p1=float(cfg.p1),
            tol_psd=float(cfg.tol_psd),
            tol_herm=float(cfg.tol_herm),
            seed=int(cfg.seed),
            mem_cap=None if cfg.mem_cap is None else int(cfg.mem_cap),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid configuration value: {e}") from e
    return cfg.validate()
