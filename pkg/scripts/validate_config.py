#!/usr/bin/env python3
"""
validate_config.py

Validate and display workbench configuration settings.

Usage:
    python scripts/validate_config.py --config configs/default.yaml
"""

import argparse
import json
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from rtw import checks, utils
from rtw.graphcore import graph_from_spec
from rtw.io import SCHEMA

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _check_budget(budget: dict, label: str, issues: list) -> None:
    max_nodes = budget.get("max_nodes", 10**8)
    max_seconds = budget.get("max_seconds", 900)

    if not isinstance(max_nodes, int) or max_nodes <= 0:
        issues.append(f"{label}.max_nodes must be a positive integer, got {max_nodes!r}")
    if not isinstance(max_seconds, (int, float)) or max_seconds <= 0:
        issues.append(f"{label}.max_seconds must be positive, got {max_seconds!r}")
    elif max_seconds > 3600:
        issues.append(f"{label}.max_seconds is {max_seconds}s (tables may take hours)")


def validate_budget_config(config: dict) -> dict:
    """Validate solver budget configuration."""
    budget = config.get("budget", {})
    issues = []
    _check_budget(budget, "budget", issues)
    return {"section": "budget", "issues": issues, "params": budget}


def validate_search_config(config: dict) -> dict:
    """Validate search switches."""
    search = config.get("search", {})
    issues = []

    for key in ("use_root_symmetry", "seed_with_generalized"):
        if key in search and not isinstance(search[key], bool):
            issues.append(f"search.{key} must be true or false, got {search[key]!r}")

    return {"section": "search", "issues": issues, "params": search}


def validate_check_config(config: dict) -> dict:
    """Validate property-suite configuration."""
    check = config.get("check", {})
    issues = []

    seed = check.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        issues.append(f"check.seed must be a non-negative integer, got {seed!r}")

    trials = check.get("trials", {})
    for suite, count in trials.items():
        if suite not in checks.SUITES:
            issues.append(f"Unknown suite in check.trials: {suite}")
        if not isinstance(count, int) or count <= 0:
            issues.append(f"check.trials.{suite} must be a positive integer, got {count!r}")

    for n in check.get("sandwich_n", []):
        if not isinstance(n, int) or n < 2:
            issues.append(f"check.sandwich_n entry {n!r} is not a host size >= 2")
        elif n > 6:
            issues.append(f"check.sandwich_n entry {n} is beyond exhaustive reach")

    for name in check.get("sandwich_catalog", []):
        try:
            graph_from_spec(name)
        except ValueError as exc:
            issues.append(f"check.sandwich_catalog entry {name!r}: {exc}")

    if "sandwich_budget" in check:
        _check_budget(check["sandwich_budget"], "check.sandwich_budget", issues)

    return {"section": "check", "issues": issues, "params": check}


def validate_table_config(config: dict) -> dict:
    """Validate table output configuration."""
    table = config.get("table", {})
    issues = []

    fmt = table.get("format", "csv")
    if fmt not in ("csv", "json"):
        issues.append(f"table.format must be csv or json, got {fmt!r}")

    workers = table.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        issues.append(f"table.workers must be >= 1, got {workers!r}")

    return {"section": "table", "issues": issues, "params": table}


def validate_output_config(config: dict) -> dict:
    """Validate logging and schema settings."""
    output = config.get("output", {})
    issues = []

    level = str(output.get("log_level", "WARNING")).upper()
    if level not in LOG_LEVELS:
        issues.append(f"output.log_level {level!r} not in {', '.join(LOG_LEVELS)}")

    if "%(message)s" not in output.get("log_format", utils.LOG_FORMAT):
        issues.append("output.log_format does not include %(message)s")

    schema = output.get("schema", SCHEMA)
    if schema != SCHEMA:
        issues.append(f"output.schema {schema!r} differs from supported {SCHEMA!r}")

    return {"section": "output", "issues": issues, "params": output}


def main():
    """CLI entry point."""
    parser = argparse.ArgumentParser(description="Validate rainbow Turán workbench configuration")
    parser.add_argument(
        "--config",
        default=str(utils.DEFAULT_CONFIG),
        help="Configuration YAML file",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        help="Output as JSON",
    )

    args = parser.parse_args()

    if not args.json:
        print(f"Loading configuration: {args.config}\n")
    config = utils.load_config(args.config)

    results = [
        validate_budget_config(config),
        validate_search_config(config),
        validate_check_config(config),
        validate_table_config(config),
        validate_output_config(config),
    ]

    total_issues = sum(len(r["issues"]) for r in results)

    if args.json:
        print(json.dumps({"results": results, "total_issues": total_issues}, indent=2))
    else:
        print("=" * 60)
        print("Configuration Validation Report")
        print("=" * 60)
        print()

        for result in results:
            print(f"[{result['section'].upper()}]")
            print(f"  Parameters: {len(result['params'])} entries")

            if result["issues"]:
                print(f"  Issues found: {len(result['issues'])}")
                for issue in result["issues"]:
                    print(f"    - {issue}")
            else:
                print("  No issues")
            print()

        print("=" * 60)
        if total_issues == 0:
            print("Configuration is valid")
        else:
            print(f"Found {total_issues} issue(s)")
        print("=" * 60)

        budget = config.get("budget", {})
        print()
        print("Effective Values:")
        print(f"  Node budget per call: {budget.get('max_nodes', 10**8):,}")
        print(f"  Time budget per call: {utils.format_duration(budget.get('max_seconds', 900))}")
        print(f"  Table workers: {utils.worker_count(config)}")

    sys.exit(0 if total_issues == 0 else 1)


if __name__ == "__main__":
    main()
