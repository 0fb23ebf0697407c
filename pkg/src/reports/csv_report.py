"""CSV emission for sweep results and the run metadata sidecar."""

import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, TextIO, Tuple

import pandas as pd

logger = logging.getLogger(__name__)

CSV_COLUMNS: List[str] = [
    "variant", "J", "gamma", "Jz", "D", "Gamma", "family", "alpha", "t",
    "theta", "phi", "C", "C_out", "F", "F_asymptotic",
]

# 17 significant digits round-trip every float64 exactly.
FLOAT_FORMAT = "%.17g"


class CSVReportWriter:
    """Write sweep frames as byte-stable CSV."""

    def write(self, frames: Iterable[pd.DataFrame], stream: TextIO) -> int:
        """
        Append frames to an open text stream, header first.

        Args:
            frames: Row blocks in emission order.
            stream: Destination opened with newline="".

        Returns:
            Number of data rows written.
        """
        rows = 0
        header = True
        for frame in frames:
            frame = frame.reindex(columns=CSV_COLUMNS)
            frame.to_csv(
                stream,
                index=False,
                header=header,
                float_format=FLOAT_FORMAT,
                na_rep="",
                lineterminator="\n",
            )
            header = False
            rows += len(frame)
        if header:
            stream.write(",".join(CSV_COLUMNS) + "\n")
        return rows

    def write_file(self, frames: Iterable[pd.DataFrame], output_path: str | Path) -> Tuple[Path, int]:
        """Write frames to a UTF-8 file and return (path, row count)."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8", newline="") as fh:
            rows = self.write(frames, fh)
        logger.info("Wrote %d rows to %s", rows, output_path)
        return output_path, rows


def metadata_path(output_path: str | Path) -> Path:
    """Sidecar location for a CSV output: ``<out>.meta``."""
    output_path = Path(output_path)
    return output_path.with_name(output_path.name + ".meta")


def _format_value(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return repr(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def write_metadata(output_path: str | Path, entries: Dict[str, object]) -> Path:
    """
    Write the ``key = value`` sidecar next to a CSV output.

    Dict and list values are emitted as single-line JSON.
    """
    path = metadata_path(output_path)
    lines = [f"{key} = {_format_value(value)}" for key, value in entries.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_metadata(path: str | Path) -> Dict[str, str]:
    """Parse a sidecar back into raw string values."""
    entries: Dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"Malformed metadata line: {line!r}")
        entries[key] = value
    return entries
