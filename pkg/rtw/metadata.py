"""
rtw.metadata
============

Run metadata and certificate references for reproducible tables.
"""

import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from rtw.io import SCHEMA, certificate_to_dict, dumps

logger = logging.getLogger(__name__)

__version__ = "0.1.0"


def config_hash(config: dict) -> str:
    return hashlib.md5(json.dumps(config, sort_keys=True).encode()).hexdigest()


def certificate_digest(certificate) -> str:
    """
    Short content hash of a certificate's canonical JSON.

    Used as the certificate reference in table rows and as the file stem
    when certificates are written out.
    """
    return hashlib.md5(dumps(certificate_to_dict(certificate)).encode()).hexdigest()[:12]


def create_metadata(
    command: str,
    config: dict,
    additional_info: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Create metadata dict for a workbench run.

    Parameters
    ----------
    command : str
        Command line or subcommand name
    config : dict
        Effective configuration
    additional_info : dict, optional
        Additional metadata fields

    Examples
    --------
    >>> meta = create_metadata("table rb --h P4 --f P4 --n 4..6", config)
    """
    meta = {
        "command": command,
        "schema": SCHEMA,
        "timestamp": datetime.now().isoformat(),
        "config": config,
        "config_hash": config_hash(config),
        "version": __version__,
    }

    if additional_info:
        meta.update(additional_info)

    return meta


def save_metadata(metadata: Dict[str, Any], filepath: str | Path) -> None:
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)

    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(metadata, f, indent=2, ensure_ascii=False)

    logger.info(f"Metadata saved: {filepath}")


def load_metadata(filepath: str | Path) -> Dict[str, Any]:
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"Metadata file not found: {filepath}")

    with open(filepath, "r", encoding="utf-8") as f:
        metadata = json.load(f)

    logger.info(f"Metadata loaded: {filepath}")
    return metadata


def verify_reproducibility(metadata1: Dict[str, Any], metadata2: Dict[str, Any]) -> bool:
    """True if two runs used the same configuration."""
    hash1 = metadata1.get("config_hash")
    hash2 = metadata2.get("config_hash")

    if hash1 is None or hash2 is None:
        logger.warning("Missing config hash in metadata")
        return False

    return hash1 == hash2
