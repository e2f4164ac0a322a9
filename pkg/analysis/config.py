from __future__ import annotations

import os
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

from dotenv import load_dotenv

from domains import DOMAIN_NAMES, Atom, LinCons
from lang.errors import AnalysisError

load_dotenv()


class ConfigError(AnalysisError):
    pass


def _env_bool(name: str, default: bool = False) -> bool:
    return (os.getenv(name, str(int(default))) or "").strip().lower() in ("1", "true", "yes", "on")


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, str(default)))
    except Exception:
        return default


def _env_str(name: str, default: str) -> str:
    v = os.getenv(name, default)
    return default if v is None else str(v)


WIDENING_MODES = ("plain", "thresholds")
ELIMINATION_MODES = ("project", "forget")


@dataclass(frozen=True)
class AnalysisConfig:
    """
    Knobs of one analysis run.

    ``thresholds`` is None for the automatic heuristic (collected from the
    program) and an explicit tuple otherwise; it is ignored under plain
    widening.  ``qualifiers`` must be given for the predicate domain.
    """

    domain: str = _env_str("DFRT_DOMAIN", "poly")
    k: int = _env_int("DFRT_CTX", 1)
    widening: str = _env_str("DFRT_WIDENING", "thresholds")
    thresholds: Optional[Tuple[LinCons, ...]] = None
    qualifiers: Optional[Tuple[Atom, ...]] = None
    depth_cap: int = _env_int("DFRT_DEPTH_CAP", 20)
    max_iters: int = _env_int("DFRT_MAX_ITERS", 500)
    depvar_elimination: str = "project"
    path_sensitive: bool = _env_bool("DFRT_PATH_SENSITIVE", True)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.domain not in DOMAIN_NAMES:
            raise ConfigError(f"unknown domain {self.domain!r}; expected one of {', '.join(DOMAIN_NAMES)}")
        if self.k < 0:
            raise ConfigError("context depth k must be >= 0")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.depth_cap < 1:
            raise ConfigError("depth_cap must be >= 1")
        if self.widening not in WIDENING_MODES:
            raise ConfigError(f"unknown widening {self.widening!r}; expected plain or thresholds")
        if self.depvar_elimination not in ELIMINATION_MODES:
            raise ConfigError(f"unknown depvar elimination {self.depvar_elimination!r}")
        if self.domain == "pred" and self.qualifiers is None:
            raise ConfigError("the predicate domain requires a qualifier set")

    def describe(self) -> str:
        if self.label:
            return self.label
        return f"{self.domain}/k={self.k}/{self.widening}"


# Tracing / logging setup
TRACE_ENABLED = os.getenv("TRACE", "0").strip().lower() in ("1", "true", "yes", "on")
if TRACE_ENABLED:
    logging.basicConfig(
        filename=os.getenv("TRACE_FILE", "trace.log"),
        level=logging.DEBUG,
        format="%(asctime)s %(levelname)s %(message)s",
    )
logger = logging.getLogger("dfrt.analysis")
