"""
Request handling shared by the CLI, the HTTP app and batch runs.

``analyze_source`` turns program text plus a config into the JSON report;
``run_batch`` fans a corpus out over a thread pool and compares the verdicts
with the expected-verdicts manifest.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Union

from analysis import (
    SAFE, UNSAFE, AnalysisConfig, ConfigError, analyze, build_report, check_safety, gamma_violations,
)
from analysis.typemap import TypeMap
from concrete import exec_map_to_json, run_concrete
from concrete.config import DEFAULT_FUEL
from domains import default_qualifiers, parse_qualifiers, parse_thresholds
from lang import check_program, parse_program
from lang.errors import AnalysisError

from .config import Settings, logger

DIVERGE_OK = "DIVERGE-OK"
VERDICTS = (SAFE, UNSAFE, DIVERGE_OK)


def config_from_request(data: Mapping[str, Any], settings: Optional[Settings] = None,
                        program=None) -> AnalysisConfig:
    """Analysis config from a JSON request body; missing keys fall back to the settings defaults."""
    settings = settings or Settings()

    def _int(key: str, default: int) -> int:
        v = data.get(key)
        if v is None:
            return default
        try:
            return int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer")

    domain = str(data.get("domain") or settings.default_domain).strip().lower()
    quals = data.get("quals")
    qualifiers = None
    if quals:
        qualifiers = tuple(parse_qualifiers(str(quals)))
    elif domain == "pred" and program is not None:
        qualifiers = tuple(default_qualifiers(program))
    thresholds = data.get("thresholds")
    parsed = None
    if thresholds and str(thresholds).strip().lower() != "auto":
        parsed = tuple(parse_thresholds(str(thresholds)))
    return AnalysisConfig(
        domain=domain,
        k=_int("ctx", settings.default_ctx),
        widening=str(data.get("widening") or settings.default_widening).strip().lower(),
        thresholds=parsed,
        qualifiers=qualifiers,
        depth_cap=_int("depth_cap", settings.default_depth_cap),
        max_iters=_int("max_iters", settings.default_max_iters),
        depvar_elimination=str(data.get("depvar") or "project").strip().lower(),
        path_sensitive=bool(data.get("path_sensitive", True)),
    )


def run_oracle(program, result, fuel: int = DEFAULT_FUEL, dump_concrete: bool = False) -> Dict[str, Any]:
    concrete = run_concrete(program, fuel)
    violations = gamma_violations(concrete, result.types, result.lattice.domain, result.config.k)
    out: Dict[str, Any] = {"sound": not violations, "violations": violations}
    if dump_concrete:
        out["concrete"] = exec_map_to_json(concrete)
    return out


def analyze_source(source: str, config: AnalysisConfig, *, oracle: bool = False, fuel: int = DEFAULT_FUEL,
                   dump_types: bool = True, dump_concrete: bool = False,
                   progress: Optional[Callable[[int, TypeMap], None]] = None) -> Dict[str, Any]:
    program = parse_program(source)
    check_program(program)
    result = analyze(program, config, progress)
    verdict = check_safety(result)
    extra = run_oracle(program, result, fuel, dump_concrete) if oracle else None
    return build_report(result, verdict, source, extra, dump_types)


# -- batch runs -------------------------------------------------------------------------


@dataclass
class BatchResult:
    file: str
    category: str
    expected: Optional[str]
    observed: str
    iterations: int = 0
    seconds: float = 0.0
    ok: bool = False
    error: Optional[str] = None


@dataclass
class BatchSummary:
    results: List[BatchResult] = field(default_factory=list)

    @property
    def rows(self) -> Dict[str, Dict[str, Any]]:
        out: Dict[str, Dict[str, Any]] = {}
        for r in self.results:
            row = out.setdefault(r.category, {"count": 0, "succ": 0, "seconds": 0.0})
            row["count"] += 1
            row["succ"] += int(r.ok)
            row["seconds"] += r.seconds
        return dict(sorted(out.items()))

    @property
    def totals(self) -> Dict[str, Any]:
        return {
            "count": len(self.results),
            "succ": sum(int(r.ok) for r in self.results),
            "seconds": sum(r.seconds for r in self.results),
        }

    def render(self) -> str:
        lines = [f"{'category':<16}{'#programs':>10}{'#succ':>8}{'seconds':>10}"]
        for cat, row in self.rows.items():
            lines.append(f"{cat:<16}{row['count']:>10}{row['succ']:>8}{row['seconds']:>10.2f}")
        t = self.totals
        lines.append(f"{'total':<16}{t['count']:>10}{t['succ']:>8}{t['seconds']:>10.2f}")
        return "\n".join(lines)

    def to_json(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "totals": self.totals,
            "results": [r.__dict__ for r in self.results],
        }


def category_of(path: Union[str, Path]) -> str:
    stem = Path(path).stem
    return stem.split("_", 1)[0] if "_" in stem else "misc"


def load_expected(path: Union[str, Path]) -> Dict[str, str]:
    p = Path(path)
    if not p.exists():
        return {}
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read expected verdicts {p}: {exc}") from exc
    bad = {k: v for k, v in data.items() if v not in VERDICTS}
    if bad:
        raise ConfigError(f"unknown verdicts in {p}: {bad}")
    return dict(data)


def _analyze_file(path: Path, config: AnalysisConfig, expected: Optional[str]) -> BatchResult:
    started = time.perf_counter()
    r = BatchResult(file=path.name, category=category_of(path), expected=expected, observed="ERROR")
    try:
        program = parse_program(path.read_text(encoding="utf-8"))
        check_program(program)
        result = analyze(program, config)
        r.observed = check_safety(result).status
        r.iterations = result.iterations
        if expected == DIVERGE_OK:
            r.ok = result.converged
        else:
            r.ok = expected is None or r.observed == expected
    except (AnalysisError, OSError) as exc:
        logger.exception("batch analysis of %s failed", path)
        r.error = str(exc)
    r.seconds = time.perf_counter() - started
    return r


def run_batch(paths: Iterable[Union[str, Path]], config: AnalysisConfig,
              expected: Optional[Mapping[str, str]] = None, workers: Optional[int] = None) -> BatchSummary:
    files: Sequence[Path] = sorted(Path(p) for p in paths)
    expected = expected or {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda p: _analyze_file(p, config, expected.get(p.name)), files))
    return BatchSummary(results)
