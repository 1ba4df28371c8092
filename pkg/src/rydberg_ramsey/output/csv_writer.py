# --- output/csv_writer.py ---
from __future__ import annotations
import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import numpy as np

from src.rydberg_ramsey.core.exceptions import ParameterError
from src.rydberg_ramsey.output.base_writer import BaseWriter
from src.rydberg_ramsey.output.hashing import to_jsonable

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
NUMBER_FORMAT = "%.17g"


def format_table(columns: Mapping[str, np.ndarray], header: Dict[str, Any]) -> str:
    """
    CSV text: a "# " JSON header line (sorted keys), a "# " column-name line,
    then one row per sample with every number printed as %.17g.

    :raises ParameterError: If the columns differ in length or are not real.
    """
    names = list(columns)
    if not names:
        raise ParameterError("A table needs at least one column")
    data = [np.asarray(columns[name]) for name in names]
    if any(np.iscomplexobj(col) for col in data):
        raise ParameterError("Table columns must be real; split complex data into real and imag")
    length = data[0].shape[0]
    if any(col.ndim != 1 or col.shape[0] != length for col in data):
        raise ParameterError("Table columns must be one-dimensional and of equal length")

    lines = [
        "# " + json.dumps(to_jsonable(header), sort_keys=True, allow_nan=False),
        "# " + ",".join(names),
    ]
    matrix = np.column_stack([col.astype(float) for col in data])
    lines.extend(",".join(NUMBER_FORMAT % x for x in row) for row in matrix)
    return "\n".join(lines) + "\n"


class CsvWriter(BaseWriter):
    """
    Writes tables as <name>.csv and the manifest as manifest.json under one run directory.

    Identical inputs give byte-identical files: no timestamps, sorted JSON keys,
    fixed number format and "\\n" line endings.
    """

    def write_table(self, name: str, columns: Mapping[str, np.ndarray], header: Dict[str, Any]) -> Path:
        path = self._target(f"{name}.csv")
        path.write_text(format_table(columns, header), encoding="utf-8", newline="\n")
        logger.info("Wrote %s", path)
        return path

    def write_manifest(self, payload: Dict[str, Any]) -> Path:
        path = self._target(MANIFEST_NAME)
        text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8", newline="\n")
        logger.info("Wrote %s", path)
        return path

    def _target(self, filename: Union[str, Path]) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / filename
