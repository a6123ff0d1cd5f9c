# Environment configuration and numerical tolerances
from dataclasses import dataclass
import os

from loguru import logger


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-9
    proj: float = 1e-10
    orth: float = 1e-10
    abs: float = 1e-12
    quad: float = 1e-10


TOLERANCES = Tolerances()


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    log_level: str = "WARNING"
    selftest_cases: int = 2000


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip())
    except ValueError:
        logger.warning("Ignoring non-integer {}={!r}", name, raw)
        return default


def is_log_level(level: str) -> bool:
    try:
        logger.level(level)
    except ValueError:
        return False
    return True


def _env_level(name: str, default: str) -> str:
    raw = os.getenv(name)
    if not raw or not raw.strip():
        return default
    level = raw.strip().upper()
    if not is_log_level(level):
        logger.warning("Ignoring unknown log level {}={!r}", name, raw)
        return default
    return level


def settings_from_env() -> Settings:
    return Settings(
        seed=_env_int("CS_SHARP_SEED", 0),
        log_level=_env_level("CS_SHARP_LOG_LEVEL", "WARNING"),
        selftest_cases=max(1, _env_int("CS_SHARP_SELFTEST_CASES", 2000)),
    )
