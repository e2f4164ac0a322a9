"""
Command-line front end.

    python cli.py programs/fib_increasing.ml --domain poly --ctx 0
    python cli.py programs/ --ctx 1            # batch mode over a corpus

A single program exits 0 when SAFE, 1 when UNSAFE and 2 on parse or
configuration errors (and on a soundness violation under ``--oracle``).
Batch mode exits 0 when every file matches its expected verdict.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from analysis import AnalysisConfig, ConfigError, analyze, build_report, check_safety, dumps, render_text
from analysis.config import WIDENING_MODES
from concrete.config import DEFAULT_FUEL
from domains import DOMAIN_NAMES, load_qualifiers, load_thresholds
from lang import check_program, parse_program
from lang.errors import AnalysisError
from server.runner import load_expected, run_batch, run_oracle


def _parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="dfrt",
        description="Data flow refinement type inference for a small ML-like language.",
    )
    parser.add_argument("paths", nargs="+", type=Path, help="program files, or a corpus directory for batch mode")
    parser.add_argument("--domain", choices=DOMAIN_NAMES, default="poly")
    parser.add_argument("--quals", type=Path, help="qualifier file (required with --domain pred)")
    parser.add_argument("--ctx", type=int, default=1, help="context depth k")
    parser.add_argument("--widening", choices=WIDENING_MODES, default="thresholds")
    parser.add_argument("--thresholds", default="auto", help="threshold file, or 'auto'")
    parser.add_argument("--depth-cap", dest="depth_cap", type=int, default=20)
    parser.add_argument("--max-iters", dest="max_iters", type=int, default=500)
    parser.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="iteration budget of the concrete run")
    parser.add_argument("--no-path-sensitivity", dest="path_sensitive", action="store_false")
    parser.add_argument("--depvar", choices=("project", "forget"), default="project",
                        help="how a call's dependency variable leaves the result type")
    parser.add_argument("--dump-types", dest="dump_types", action="store_true")
    parser.add_argument("--dump-concrete", dest="dump_concrete", action="store_true")
    parser.add_argument("--oracle", action="store_true", help="also run the concrete semantics and check soundness")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--expected", type=Path, help="expected verdicts manifest for batch mode")
    parser.add_argument("--workers", type=int, default=None)
    return parser.parse_args(argv)


def config_from_args(args: argparse.Namespace) -> AnalysisConfig:
    if args.domain == "pred" and args.quals is None:
        raise ConfigError("--quals is required with --domain pred")
    if args.domain != "pred" and args.quals is not None:
        raise ConfigError("--quals only applies to --domain pred")
    qualifiers = tuple(load_qualifiers(args.quals)) if args.quals is not None else None
    thresholds = None
    if args.thresholds != "auto":
        thresholds = tuple(load_thresholds(args.thresholds))
    return AnalysisConfig(
        domain=args.domain,
        k=args.ctx,
        widening=args.widening,
        thresholds=thresholds,
        qualifiers=qualifiers,
        depth_cap=args.depth_cap,
        max_iters=args.max_iters,
        depvar_elimination=args.depvar,
        path_sensitive=args.path_sensitive,
    )


def _corpus_files(paths: List[Path]) -> List[Path]:
    files: List[Path] = []
    for p in paths:
        if p.is_dir():
            files.extend(sorted(p.glob("*.ml")))
        else:
            files.append(p)
    return files


def run_single(path: Path, config: AnalysisConfig, args: argparse.Namespace) -> int:
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AnalysisError(f"cannot read {path}: {exc.strerror}") from exc
    program = parse_program(source)
    check_program(program)
    result = analyze(program, config)
    verdict = check_safety(result)
    oracle = run_oracle(program, result, args.fuel, args.dump_concrete) if (args.oracle or args.dump_concrete) else None

    if args.format == "json":
        print(dumps(build_report(result, verdict, source, oracle, args.dump_types)))
    else:
        print(render_text(result, verdict, args.dump_types))
        if oracle is not None:
            print("oracle: " + ("sound" if oracle["sound"] else "VIOLATED"))
            for line in oracle["violations"]:
                print(f"  ! {line}")
            if args.dump_concrete:
                print(json.dumps(oracle["concrete"], ensure_ascii=False, indent=2))

    if args.oracle and oracle is not None and not oracle["sound"]:
        return 2
    return 0 if verdict.safe else 1


def main(argv: Optional[List[str]] = None) -> int:
    args = _parse_args(argv)
    try:
        config = config_from_args(args)
        files = _corpus_files(args.paths)
        batch = len(files) != 1 or any(p.is_dir() for p in args.paths)
        if not batch:
            return run_single(files[0], config, args)
        manifest = args.expected
        if manifest is None:
            dirs = [p for p in args.paths if p.is_dir()]
            manifest = (dirs[0] if dirs else files[0].parent) / "expected.json" if files else None
        expected = load_expected(manifest) if manifest is not None else {}
        summary = run_batch(files, config, expected, args.workers)
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.format == "json":
        print(json.dumps(summary.to_json(), ensure_ascii=False, indent=2))
    else:
        print(summary.render())
        for r in summary.results:
            if not r.ok:
                print(f"  x {r.file}: expected {r.expected}, got {r.observed}" + (f" ({r.error})" if r.error else ""))
    return 0 if all(r.ok for r in summary.results) else 1


if __name__ == "__main__":
    sys.exit(main())
