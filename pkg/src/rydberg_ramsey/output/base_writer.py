# --- output/base_writer.py ---
from __future__ import annotations
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Mapping, Union

import numpy as np


class BaseWriter(ABC):
    """
    Abstract base class for run output writers.
    Defines the interface for data tables and the run manifest.
    """

    def __init__(self, out_dir: Union[str, Path]):
        """
        :param out_dir: Directory receiving every file of one run (created on first write).
        """
        self.out_dir = Path(out_dir)

    @abstractmethod
    def write_table(self, name: str, columns: Mapping[str, np.ndarray], header: Dict[str, Any]) -> Path:
        """
        Write one data table.

        :param name: File stem (e.g., "g2").
        :param columns: Column name -> equal-length numeric arrays, in output order.
        :param header: JSON-serializable run description stored with the table.
        :return: Path of the written file.
        """
        raise NotImplementedError

    @abstractmethod
    def write_manifest(self, payload: Dict[str, Any]) -> Path:
        """
        Write the run manifest.

        :param payload: JSON-serializable manifest.
        :return: Path of the written file.
        """
        raise NotImplementedError
