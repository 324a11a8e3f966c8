"""
rtw.utils
=========

Utility functions for the rainbow Turán workbench.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict

import yaml

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "default.yaml"

WORKERS_ENV = "RTW_WORKERS"

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def load_config(config_path: str | Path | None = None) -> Dict[str, Any]:
    """
    Load YAML configuration.

    Parameters
    ----------
    config_path : str or Path, optional
        Path to config YAML file (None = packaged ``configs/default.yaml``)

    Returns
    -------
    config : dict
        Configuration dict

    Examples
    --------
    >>> config = load_config("configs/default.yaml")
    >>> config["budget"]["max_seconds"]
    900
    """
    config_path = Path(config_path) if config_path is not None else DEFAULT_CONFIG
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f)

    return config or {}


def setup_logging(
    log_level: str = "INFO",
    log_file: str | None = None,
    log_format: str = LOG_FORMAT,
) -> None:
    """
    Setup logging configuration.

    Console output goes to stderr; stdout is reserved for JSON and CSV
    payloads.

    Parameters
    ----------
    log_level : str, default="INFO"
        Logging level (DEBUG, INFO, WARNING, ERROR)
    log_file : str, optional
        Log file path (None = console only)
    log_format : str, optional
        logging.Formatter pattern (``output.log_format`` in the config)
    """
    numeric_level = getattr(logging, log_level.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {log_level}")

    formatter = logging.Formatter(log_format)

    logger = logging.getLogger()
    logger.setLevel(numeric_level)
    logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.debug(f"Logging configured: level={log_level}, file={log_file}")


def format_duration(seconds: float) -> str:
    """
    Format duration in human-readable string.

    Examples
    --------
    >>> format_duration(125.5)
    '2m 5.5s'
    """
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = int(seconds // 60)
        secs = seconds % 60
        return f"{minutes}m {secs:.1f}s"
    else:
        hours = int(seconds // 3600)
        minutes = int((seconds % 3600) // 60)
        secs = seconds % 60
        return f"{hours}h {minutes}m {secs:.1f}s"


def worker_count(config: Dict[str, Any] | None = None, requested: int | None = None) -> int:
    """
    Number of worker processes for table sweeps.

    ``requested`` (a CLI flag) overrides ``table.workers`` from the config;
    the ``RTW_WORKERS`` environment variable caps the result. Never below 1.
    """
    workers = requested
    if workers is None:
        workers = int(((config or {}).get("table") or {}).get("workers", 1))
    cap = os.environ.get(WORKERS_ENV)
    if cap:
        try:
            workers = min(workers, int(cap))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {cap!r}") from None
    return max(1, workers)


def parse_range(text: str) -> list[int]:
    """
    Parse an inclusive integer range such as ``4..6`` or a single ``5``.

    Examples
    --------
    >>> parse_range("3..7")
    [3, 4, 5, 6, 7]
    """
    text = text.strip()
    if ".." in text:
        low, _, high = text.partition("..")
        start, stop = int(low), int(high)
    else:
        start = stop = int(text)
    if start > stop:
        raise ValueError(f"Empty range: {text}")
    return list(range(start, stop + 1))
