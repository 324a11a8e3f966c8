#!/usr/bin/env python3
"""
build_report.py

Generate a Markdown report from ``rtw table`` results.

Usage:
    rtw table rb --h P4 --f P4 --n 4..6 --meta rb_p4.meta.json > rb_p4.csv
    python scripts/build_report.py --table rb_p4.csv --meta rb_p4.meta.json \\
        --output report.md
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path

import pandas as pd
import yaml

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from rtw import utils
from rtw.metadata import __version__, load_metadata, verify_reproducibility

STATUS_MARK = {"optimal": "", "lower_bound_only": " (>=)"}


def same_configuration(runs: list[dict]) -> bool | None:
    """True when every run shares the first run's config hash; None for fewer than two."""
    if len(runs) < 2:
        return None
    return all(verify_reproducibility(runs[0], other) for other in runs[1:])


def load_table(path: str | Path) -> pd.DataFrame:
    """Read a table written by ``rtw table`` as CSV or JSON."""
    path = Path(path)
    if path.suffix == ".json":
        with open(path, "r", encoding="utf-8") as f:
            return pd.DataFrame(json.load(f)["rows"])
    return pd.read_csv(path)


def table_section(name: str, frame: pd.DataFrame) -> str:
    """Markdown section for one sweep: values by n plus solver effort."""
    lines = [f"## {name}\n"]
    if frame.empty:
        lines.append("*No rows.*\n")
        return "\n".join(lines) + "\n"

    pairs = frame[["h", "f"]].drop_duplicates()
    for h, f in pairs.itertuples(index=False):
        lines.append(f"**H = {h}, F = {f}**\n")
    lines.append("| n | value | status | certificate | nodes | seconds |")
    lines.append("|---|-------|--------|-------------|-------|---------|")
    for row in frame.sort_values("n").itertuples(index=False):
        mark = STATUS_MARK.get(row.status, f" ({row.status})")
        lines.append(
            f"| {row.n} | {row.value}{mark} | {row.status} | `{row.certificate}` | "
            f"{row.nodes:,} | {row.seconds:.3f} |"
        )
    lines.append("")

    partial = int((frame["status"] != "optimal").sum())
    lines.append(f"- **Rows:** {len(frame)}")
    lines.append(f"- **Inexact rows:** {partial}")
    lines.append(f"- **Total nodes:** {int(frame['nodes'].sum()):,}")
    lines.append(f"- **Total time:** {utils.format_duration(float(frame['seconds'].sum()))}")
    return "\n".join(lines) + "\n\n"


def generate_report(
    tables: dict[str, pd.DataFrame],
    metadata: dict | None,
    output_path: str | Path,
    consistent: bool | None = None,
):
    """
    Generate Markdown report.

    Parameters
    ----------
    tables : dict of str to DataFrame
        Table rows keyed by section title
    metadata : dict or None
        Run metadata written by ``rtw table --meta``
    output_path : str or Path
        Output Markdown file
    consistent : bool or None
        Whether all runs used one configuration; None when only one run
    """
    output_path = Path(output_path)

    with open(output_path, "w", encoding="utf-8") as f:
        f.write("# Rainbow Turán Workbench Report\n\n")
        f.write(f"**Generated:** {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n\n")

        if metadata:
            f.write("## Metadata\n\n")
            f.write(f"- **Command:** `{metadata.get('command', 'N/A')}`\n")
            f.write(f"- **Run Date:** {metadata.get('timestamp', 'N/A')}\n")
            f.write(f"- **Version:** {metadata.get('version', 'N/A')}\n")
            f.write(f"- **Schema:** {metadata.get('schema', 'N/A')}\n")
            f.write(f"- **Workers:** {metadata.get('workers', 'N/A')}\n")
            f.write(f"- **Config Hash:** `{metadata.get('config_hash', 'N/A')}`\n")
            if consistent is not None:
                f.write(f"- **Same Config Across Runs:** {'yes' if consistent else 'NO'}\n")
            f.write("\n")

        for name, frame in tables.items():
            f.write(table_section(name, frame))

        if metadata and metadata.get("config"):
            f.write("## Run Configuration\n\n")
            f.write("```yaml\n")
            f.write(yaml.safe_dump(metadata["config"], default_flow_style=False))
            f.write("```\n\n")

        f.write("---\n\n")
        f.write(f"*Report generated by rainbow-turan-workbench v{__version__}*\n")


def main():
    """CLI entry point."""
    parser = argparse.ArgumentParser(
        description="Generate Markdown report from rtw table output",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # One sweep with its run metadata
  python scripts/build_report.py --table rb_p4.csv --meta rb_p4.meta.json \\
      --output report.md

  # Two sweeps, checking they ran under one configuration
  python scripts/build_report.py --table rb_p4.csv --meta rb_p4.meta.json \\
      --table rb_k3.csv --meta rb_k3.meta.json --output report.md

  # Several sweeps, no metadata
  python scripts/build_report.py --table ex_k3.csv --table exh_k3_k4.json \\
      --output report.md
        """,
    )

    parser.add_argument(
        "--table", action="append", required=True, help="Table CSV or JSON (repeatable)"
    )
    parser.add_argument(
        "--meta", action="append", default=[], help="Run metadata JSON (optional, repeatable)"
    )
    parser.add_argument("--output", required=True, help="Output Markdown report")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level",
    )

    args = parser.parse_args()

    utils.setup_logging(log_level=args.log_level)
    logger = logging.getLogger(__name__)

    tables = {}
    for path in args.table:
        logger.info(f"Loading table: {path}")
        tables[Path(path).stem] = load_table(path)
        logger.info(f"Found {len(tables[Path(path).stem])} rows")

    runs = [load_metadata(path) for path in args.meta]
    metadata = runs[0] if runs else None
    consistent = same_configuration(runs)
    if consistent is False:
        logger.warning("Runs used different configurations; values may not be comparable")

    output_path = Path(args.output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    generate_report(tables, metadata, output_path, consistent=consistent)

    logger.info(f"Report saved: {output_path}")


if __name__ == "__main__":
    main()
