from __future__ import annotations

import os
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from dotenv import load_dotenv

from analysis.config import _env_bool, _env_int, _env_str

load_dotenv()


def env_cors_origins() -> Tuple[str, ...]:
    """
    Resolve allowed CORS origins from env (CORS_ORIGINS, comma separated).

    ``*`` or an empty value allows every origin.
    """
    raw = (_env_str("CORS_ORIGINS", "*") or "").strip()
    if raw in ("", "*"):
        return ("*",)
    return tuple(o.strip() for o in raw.split(",") if o.strip())


def _env_workers(name: str, default: int) -> Optional[int]:
    n = _env_int(name, default)
    return None if n < 0 else n


@dataclass(frozen=True)
class Settings:
    # Ports / run
    host: str = _env_str("HOST", "127.0.0.1")
    port: int = _env_int("PORT", 8000)
    cors_origins: Tuple[str, ...] = env_cors_origins()

    # Analysis defaults for requests that leave them out
    default_domain: str = _env_str("DFRT_DOMAIN", "poly")
    default_ctx: int = _env_int("DFRT_CTX", 1)
    default_widening: str = _env_str("DFRT_WIDENING", "thresholds")
    default_depth_cap: int = _env_int("DFRT_DEPTH_CAP", 20)
    default_max_iters: int = _env_int("DFRT_MAX_ITERS", 500)
    default_fuel: int = _env_int("DFRT_FUEL", 1000)

    # Worker / batching
    # negative means one worker per CPU
    batch_workers: Optional[int] = _env_workers("DFRT_BATCH_WORKERS", 4)
    progress_every: int = max(1, _env_int("PROGRESS_EVERY", 1))
    corpus_dir: str = _env_str("DFRT_CORPUS", "programs")

    # Debugging
    ws_debug: bool = _env_bool("WS_DEBUG", False)


# Tracing / logging setup
TRACE_ENABLED = os.getenv("TRACE", "0").strip().lower() in ("1", "true", "yes", "on")
if TRACE_ENABLED:
    logging.basicConfig(
        filename=os.getenv("TRACE_FILE", "trace.log"),
        level=logging.DEBUG,
        format="%(asctime)s %(levelname)s %(message)s",
    )
logger = logging.getLogger("dfrt.server")
