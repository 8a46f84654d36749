#!/usr/bin/env python3
import json
import logging
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, TextIO

import numpy as np
import pandas as pd

from unipotent.services.exact import rational_str
from unipotent.utils import ensure_directory_exists

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Rationals as 'num/den', numpy scalars as Python numbers, tuples as lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, float):
        return "inf" if value == float("inf") else value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(value: Any) -> str:
    return json.dumps(to_jsonable(value), sort_keys=True, ensure_ascii=False)


def write_json_lines(rows: Iterable[Dict[str, Any]], stream: TextIO):
    for row in rows:
        stream.write(dumps(row) + "\n")


def write_json_document(document: Any, stream: TextIO):
    stream.write(json.dumps(to_jsonable(document), sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _cell(value: Any) -> Any:
    value = to_jsonable(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def write_csv(rows: List[Dict[str, Any]], stream: TextIO):
    columns = sorted({key for row in rows for key in row})
    frame = pd.DataFrame([{k: _cell(row.get(k)) for k in columns} for row in rows], columns=columns, dtype=object)
    frame.to_csv(stream, index=False, lineterminator="\r\n")


@contextmanager
def open_output(path: Optional[str]):
    if not path:
        yield sys.stdout
        return
    ensure_directory_exists(os.path.dirname(path))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle
    logger.info(f"Wrote {path}")


def emit_rows(rows: List[Dict[str, Any]], output_format: str, path: Optional[str] = None, stream_lines: bool = True):
    """JSON lines (or one document) or CSV; same rows either way."""
    with open_output(path) as stream:
        if output_format == "csv":
            write_csv(rows, stream)
        elif stream_lines:
            write_json_lines(rows, stream)
        else:
            write_json_document(rows, stream)
