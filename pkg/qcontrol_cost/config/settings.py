"""
Settings for qcontrol-cost

Values are resolved in layers, later layers winning:
    defaults -> QCC_* environment variables -> .env file -> explicit overrides
Every layer that sets a field leaves a tag in ``QccConfig._config_sources``.
"""
import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

logger = logging.getLogger(__name__)

VALID_EIG_METHODS = ("lapack", "jacobi")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
DEFAULT_EIG_FLOOR = 1e-14

# Field name -> suffix after the QCC_ prefix
ENV_FIELDS = {
    "threads": "THREADS",
    "eig_method": "EIG_METHOD",
    "eig_floor": "EIG_FLOOR",
    "output_dir": "OUTPUT_DIR",
    "verbose": "VERBOSE",
    "debug": "DEBUG",
    "colorize": "COLORIZE",
    "log_level": "LOG_LEVEL",
}

DOTENV_CANDIDATES = (".env", ".env.local", "config/.env")
TRUTHY = frozenset({"true", "1", "yes", "on", "enabled"})


@dataclass
class QccConfig:
    """Runtime settings shared by the library and the qcc command"""

    # Worker threads for sweeps and optimizer grids
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)

    eig_method: str = "lapack"
    eig_floor: float = DEFAULT_EIG_FLOOR

    output_dir: str = "."
    verbose: bool = False
    debug: bool = False
    colorize: bool = True
    log_level: str = "WARNING"

    _config_sources: list = field(default_factory=list)

    def __post_init__(self):
        self.output_dir = str(Path(self.output_dir).resolve())

        level = str(self.log_level).upper()
        self.log_level = level if level in LOG_LEVELS else "INFO"

        if isinstance(self.threads, bool) or not isinstance(self.threads, int) or self.threads < 1:
            self.threads = 1
        if self.eig_method not in VALID_EIG_METHODS:
            self.eig_method = "lapack"
        if not self.eig_floor or self.eig_floor <= 0:
            self.eig_floor = DEFAULT_EIG_FLOOR


_FIELD_TYPES = {f.name: f.type for f in fields(QccConfig) if not f.name.startswith("_")}


class ConfigLoader:
    """Builds a QccConfig one source at a time (chainable)"""

    def __init__(self):
        self.config = QccConfig()

    def _apply(self, items: Iterable[Tuple[str, Any]], tag: str) -> 'ConfigLoader':
        for key, value in items:
            if key not in _FIELD_TYPES:
                continue
            setattr(self.config, key, value)
            self.config._config_sources.append(f"{tag}:{key}")
        self.config.__post_init__()
        return self

    def load_from_env(self, prefix: str = "QCC_") -> 'ConfigLoader':
        """Read every QCC_* variable that is set"""
        for attr, suffix in ENV_FIELDS.items():
            name = prefix + suffix
            raw = os.environ.get(name)
            if raw is None:
                continue
            setattr(self.config, attr, self._convert_env_value(attr, raw))
            self.config._config_sources.append(f"env:{name}")
        self.config.__post_init__()
        return self

    def load_from_file(self, config_path: Optional[str] = None) -> 'ConfigLoader':
        """Load a .env file into the environment, then re-read QCC_* variables

        Without an explicit path the first existing candidate in the working
        directory is used; a missing file is not an error.
        """
        if config_path is None:
            config_path = next((c for c in DOTENV_CANDIDATES if Path(c).exists()), None)
        if not config_path or not Path(config_path).exists():
            return self

        from dotenv import load_dotenv

        load_dotenv(config_path, override=False)
        logger.debug("Loaded settings file %s", config_path)
        self.config._config_sources.append(f"file:{config_path}")
        return self.load_from_env()

    def load_from_dict(self, config_dict: Dict[str, Any]) -> 'ConfigLoader':
        """Apply known keys from a mapping; unknown keys are ignored"""
        return self._apply(config_dict.items(), "dict")

    def override_from_args(self, **kwargs) -> 'ConfigLoader':
        """Apply keyword overrides, skipping the ones left at None"""
        return self._apply(((k, v) for k, v in kwargs.items() if v is not None), "arg")

    def get_config(self) -> QccConfig:
        return self.config

    def _convert_env_value(self, attr_name: str, value: str) -> Any:
        """Parse an environment string as the field's type, keeping the current value on failure"""
        kind = _FIELD_TYPES.get(attr_name, str)
        if kind in (bool, "bool"):
            return value.strip().lower() in TRUTHY
        if kind in (int, "int", float, "float"):
            parse = int if kind in (int, "int") else float
            try:
                return parse(value)
            except ValueError:
                logger.warning("Ignoring %s=%r: not a number", attr_name, value)
                return getattr(self.config, attr_name)
        return value


def load_config(config_path: Optional[str] = None, **overrides) -> QccConfig:
    """
    Resolve settings from the environment, a .env file and explicit overrides

    Args:
        config_path: .env file to read; by default the first of .env, .env.local
            and config/.env that exists
        **overrides: field values that win over every other source (None skips)

    Returns:
        The resolved QccConfig
    """
    loader = ConfigLoader().load_from_env().load_from_file(config_path)
    if overrides:
        loader.override_from_args(**overrides)
    return loader.get_config()


def get_default_config() -> QccConfig:
    """Defaults only, ignoring environment and files"""
    return QccConfig()


def print_config_info(config: QccConfig) -> None:
    print("📋 qcontrol-cost configuration:")
    print(f"  Sweep threads: {config.threads}")
    print(f"  Eigensolver: {config.eig_method}")
    print(f"  Log eigenvalue floor: {config.eig_floor:g}")
    print(f"  Output directory: {config.output_dir}")
    print(f"  Log level: {config.log_level}")
    print(f"  Verbose: {config.verbose}")

    if config.debug and config._config_sources:
        print(f"  Config Sources: {', '.join(config._config_sources)}")


_global_config: Optional[QccConfig] = None


def get_global_config() -> QccConfig:
    """Process-wide settings, loaded on first use"""
    global _global_config
    if _global_config is None:
        _global_config = load_config()
    return _global_config


def set_global_config(config: Optional[QccConfig]) -> None:
    """Replace the process-wide settings; None makes the next access reload them"""
    global _global_config
    _global_config = config
