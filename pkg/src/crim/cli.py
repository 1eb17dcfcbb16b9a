"""Command-line entry point: ``crim extract | analyze | stats``.

Exit codes: 0 success, 1 usage or config error, 2 input error,
3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from crim.config import AnalysisConfig, load_config
from crim.errors import ConfigError, CrimError
from crim.ingest import extract, load_commit_csv, write_commit_csv
from crim.pipeline import AnalysisResult, analyze
from crim.report import dataset_statistics, emit_chart_data, render_report, statistics_table
from crim.timeline import observe

logger = logging.getLogger("crim")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
EFFORT_COLUMNS = ["commit_id", "method", "imputed_rate_wpm", "reh_hours", "was_imputed", "ure_flag", "allowance_hours"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_workers() -> int:
    return int(os.environ.get("CRIM_WORKERS", "1"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crim", description="Model contribution rates and CRIM effort imputation from commit history.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="write the canonical commit CSV for a repository")
    p.add_argument("repo_path")
    p.add_argument("--out", required=True, help="destination CSV")
    p.add_argument("--include-merges", action="store_true")
    p.add_argument("--workers", type=int, default=None, help="parallel sizing threads (default: $CRIM_WORKERS or 1)")

    p = sub.add_parser("analyze", help="classify commits, impute effort and write reports")
    p.add_argument("repo_path", nargs="?")
    p.add_argument("--csv", dest="csv_path", help="read commits from a CSV instead of a repository")
    p.add_argument("--config", help="TOML file with analysis settings")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("stats", help="print descriptive statistics of a commit CSV")
    p.add_argument("--csv", dest="csv_path", required=True)
    return parser


def _write_efforts(result: AnalysisResult, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EFFORT_COLUMNS)
        for method, efforts in result.efforts.items():
            for e in efforts:
                writer.writerow(
                    [
                        e.commit_id,
                        method,
                        repr(e.imputed_rate_wpm),
                        repr(e.reh_hours),
                        str(e.was_imputed).lower(),
                        str(e.ure_flag).lower(),
                        repr(e.allowance_hours),
                    ]
                )


def _stats_payload(result: AnalysisResult, source: dict) -> dict:
    ds = result.dataset
    return {
        "source": source,
        "observations": len(ds.observations),
        "ctd_present": result.ctd_present,
        "ctd_invalid": result.ctd_invalid,
        "statistics": {k: v.to_dict() for k, v in result.statistics.items()} if result.statistics else None,
        "size_quartiles": ds.size_quartiles.to_dict() if ds.size_quartiles else None,
        "rate_quartiles": ds.rate_quartiles.to_dict() if ds.rate_quartiles else None,
        "estimates": asdict(result.estimates) if result.estimates else None,
    }


def _cmd_extract(args) -> int:
    cfg = AnalysisConfig(exclude_merges=not args.include_merges)
    extraction = extract(args.repo_path, cfg, workers=args.workers or _default_workers())
    write_commit_csv(extraction.commits, args.out)
    logger.info(
        "wrote %d commits to %s (%d skipped, %d merges excluded, %d binary files ignored)",
        len(extraction.commits),
        args.out,
        len(extraction.skipped_commits),
        extraction.merges_excluded,
        extraction.binary_files,
    )
    return EXIT_OK


def _cmd_analyze(args) -> int:
    if bool(args.repo_path) == bool(args.csv_path):
        raise ConfigError("give exactly one of <repo_path> or --csv")
    cfg = load_config(args.config)
    if args.csv_path:
        load = load_commit_csv(args.csv_path)
        commits = load.records
        source = {"kind": "csv", "rows_parsed": len(load.records), "rows_dropped": load.dropped}
    else:
        extraction = extract(args.repo_path, cfg, workers=args.workers or _default_workers())
        commits = extraction.commits
        source = {
            "kind": "git",
            "commits": len(extraction.commits),
            "skipped_commits": extraction.skipped_commits,
            "merges_excluded": extraction.merges_excluded,
            "binary_files": extraction.binary_files,
        }

    result = analyze(commits, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(render_report(result.metrics, result.statistics, "json", result.notes))
    (out / "report.md").write_bytes(render_report(result.metrics, result.statistics, "markdown", result.notes))
    emit_chart_data(result.dataset, out)
    _write_efforts(result, out / "efforts.csv")
    payload = _stats_payload(result, source)
    payload["config"] = cfg.to_dict()
    (out / "stats.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    logger.info("wrote reports for %d commits to %s", len(commits), out)
    return EXIT_OK


def _cmd_stats(args) -> int:
    commits = load_commit_csv(args.csv_path).records
    stats = dataset_statistics(observe(commits))
    sys.stdout.write(statistics_table(stats))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    handlers = {"extract": _cmd_extract, "analyze": _cmd_analyze, "stats": _cmd_stats}
    try:
        return handlers[args.command](args)
    except CrimError as exc:
        print(f"crim: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, PermissionError) as exc:
        print(f"crim: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
