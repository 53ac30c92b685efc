#!/usr/bin/env python3
"""
CSV and JSON report writers

CSV bodies are deterministic: timestamps only appear in '#' metadata lines.
"""

import json
import logging
import math
import os
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List

import numpy as np
import pandas as pd

from models import SampleRecord, SweepReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12e"


def _metadata_lines(metadata: Dict[str, Any]) -> List[str]:
    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    lines = [f"# {key}: {value}" for key, value in metadata.items()]
    lines.append(f"# generated: {stamp}")
    return lines


def write_csv(path: str, frame: pd.DataFrame, metadata: Dict[str, Any]):
    """Metadata lines, then the frame with floats as %.12e"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline="") as f:
        for line in _metadata_lines(metadata):
            f.write(line + "\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("Wrote %d rows to %s", len(frame), path)


def records_frame(records: Iterable[SampleRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.row() for record in records])


def write_records(path: str, records: List[SampleRecord], report: SweepReport):
    metadata = {"experiment": report.experiment, "seed": report.seed,
                "grid": report.grid_spec or "n/a", "parameters": _dumps(report.parameters)}
    write_csv(path, records_frame(records), metadata)


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats as strings"""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _dumps(value: Any) -> str:
    return json.dumps(_clean(value), sort_keys=True)


def write_summary(path: str, summary: Dict[str, Any]):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(_clean(summary), f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("Wrote summary to %s", path)
