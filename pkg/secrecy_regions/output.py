"""CSV and summary rendering. Column orders are fixed; numbers are plain decimals with 9 significant digits."""

import csv
import io
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from .rate_regions import Evaluation, Model

logger = logging.getLogger(__name__)

REGION_COLUMNS = (
    "beta", "I_XB", "I_XE", "I_XEG2", "I_G2B_X", "I_G2E_X", "R_SI", "Rp_SI", "R_PE", "Rp_PE",
)
SWEEP_COLUMNS = ("gamma", *REGION_COLUMNS)
DELTA_STAR_COLUMNS = ("n", "R0", "seed", "delta_star_mean", "delta_star_max")
DELTA_EXCESS_COLUMNS = ("n", "key_count", "seed", "delta_excess_mean")
PERMUTATION_COLUMNS = (
    "fixture", "seed", "messages", "kept", "fraction_removed", "markov_bound", "max_error", "bound", "attempts",
)


def format_number(value: float | int) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return np.format_float_positional(
        float(value) + 0.0, precision=9, unique=False, fractional=False, trim="-"
    )


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row has {len(row)} values for {len(columns)} columns")
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    return buffer.getvalue()


def region_row(evaluation: Evaluation) -> list[float]:
    q = evaluation.quantities
    si, pe = evaluation.rates(Model.INTERCEPTION), evaluation.rates(Model.PASSIVE)
    return [
        evaluation.parameter, q.i_xb, q.i_xe, q.i_xeg2, q.i_g2b_x, q.i_g2e_x,
        si.r, si.r_prime, pe.r, pe.r_prime,
    ]


def _jsonable(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return _jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer, bool)):
        return value if isinstance(value, bool) else int(value)
    if isinstance(value, (float, np.floating)):
        return float(format_number(value))
    return value


def render_summary(summary: Mapping[str, Any]) -> str:
    """Sorted-key JSON; no timestamps or host data so identical runs render identically."""
    return json.dumps(_jsonable(summary), sort_keys=True, indent=2) + "\n"


def write_artifacts(out_dir: str | Path, artifacts: Mapping[str, str]) -> list[Path]:
    """Write every artifact in name order; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(artifacts):
        path = out_dir / name
        path.write_text(artifacts[name], encoding="utf-8", newline="\n")
        logger.info("wrote %s", path)
        written.append(path)
    return written
