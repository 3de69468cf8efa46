# config.py
import os
import logging
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

from utils.errors import ConfigurationError

# Defaults used when the environment does not override them
DEFAULT_THREADS = 1
DEFAULT_ENUMERATION_LIMIT = 1_000_000
DEFAULT_WINDOW_BUDGET = 10_000
DEFAULT_SEARCH_LIMIT = 1_000_000
DEFAULT_LOG_LEVEL = "WARNING"

# Matroids up to this many elements get a basis-exchange check on construction
EXCHANGE_CHECK_MAX_ELEMENTS = 12

# Subset count above which LF1' is sampled instead of exhaustive
LF1_PRIME_SAMPLE_SIZE = 32

# Evaluated subspaces each flock keeps before evicting the least recently used
FLOCK_CACHE_SIZE = 65_536

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class Settings:
    threads: int = DEFAULT_THREADS
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT
    window_budget: int = DEFAULT_WINDOW_BUDGET
    search_limit: int = DEFAULT_SEARCH_LIMIT
    log_level: str = DEFAULT_LOG_LEVEL
    seed: Optional[int] = None

    def with_overrides(self, **overrides) -> "Settings":
        """Returns a copy with every non-None override applied."""
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})


def _int_from_env(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be at least {minimum}, got {value}")
    return value


def get_settings() -> Settings:
    """
    Load settings from the environment (and a .env file when present).

    Raises:
        ConfigurationError: If a numeric variable is not a valid positive integer
    """
    load_dotenv()
    log_level = os.getenv("MATROID_CHARSET_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ConfigurationError(f"MATROID_CHARSET_LOG_LEVEL is not a logging level: {log_level!r}")
    return Settings(
        threads=_int_from_env("MATROID_CHARSET_THREADS", DEFAULT_THREADS),
        enumeration_limit=_int_from_env("MATROID_CHARSET_ENUM_LIMIT", DEFAULT_ENUMERATION_LIMIT),
        window_budget=_int_from_env("MATROID_CHARSET_WINDOW_BUDGET", DEFAULT_WINDOW_BUDGET),
        search_limit=_int_from_env("MATROID_CHARSET_SEARCH_LIMIT", DEFAULT_SEARCH_LIMIT),
        log_level=log_level,
    )
