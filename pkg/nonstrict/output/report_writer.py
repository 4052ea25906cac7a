"""JSON reports and CSV tables with self-describing metadata."""

import csv
import hashlib
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from nonstrict import __version__
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = '.17g'


def _to_serializable(data: Any) -> Any:
    """
    Recursively convert numpy values, enums and non-finite floats for JSON.

    Args:
        data: Nested dicts, lists, tuples, arrays and scalars

    Returns:
        Plain Python data with NaN and infinities replaced by None
    """
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, dict):
        return {str(key): _to_serializable(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [_to_serializable(item) for item in data]
    if isinstance(data, np.ndarray):
        return _to_serializable(data.tolist())
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        value = float(data)
        return value if math.isfinite(value) else None
    if isinstance(data, complex):
        return [_to_serializable(data.real), _to_serializable(data.imag)]
    return data


def config_hash(config: Optional[Dict[str, Any]]) -> Optional[str]:
    """Short SHA-256 of the canonical JSON form of a run configuration."""
    if config is None:
        return None
    canonical = json.dumps(_to_serializable(config), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]


def format_float(value: Any) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return 'nan'
    return format(float(value), FLOAT_FORMAT)


class ReportWriter:
    """Writes reports and tables into one output directory."""

    def __init__(self, output_dir: str = 'output', config: Optional[Dict[str, Any]] = None,
                 seed: Optional[int] = None):
        """
        Initialize the writer.

        Args:
            output_dir: Directory for all files (created if missing)
            config: Run configuration, hashed into every file's metadata
            seed: Random seed recorded in the metadata
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        self.seed = seed
        self.written: List[Path] = []
        logger.debug(f"Report writer initialized at {self.output_dir.absolute()}")

    def metadata(self, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        meta = {
            'version': __version__,
            'config_hash': config_hash(self.config),
            'seed': self.seed,
        }
        if extra:
            meta.update(extra)
        return meta

    def write_report(self, filename: str, payload: Dict[str, Any],
                     extra_metadata: Optional[Dict[str, Any]] = None) -> Path:
        """
        Write a JSON report with a metadata block.

        Keys are sorted and non-finite floats become null, so identical
        payloads give byte-identical files.
        """
        document = {'metadata': self.metadata(extra_metadata), 'result': payload}
        text = json.dumps(_to_serializable(document), indent=2, sort_keys=True, allow_nan=False)
        path = self.output_dir / filename
        path.write_text(text + '\n', encoding='utf-8')
        self.written.append(path)
        logger.info(f"Wrote report {path}")
        return path

    def write_csv(self, filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]],
                  extra_metadata: Optional[Dict[str, Any]] = None) -> Path:
        """
        Write a CSV table preceded by '# key: value' metadata lines.

        Floats are written with 17 significant digits; missing values as nan.
        """
        buffer = io.StringIO()
        for key, value in sorted(self.metadata(extra_metadata).items()):
            buffer.write(f"# {key}: {json.dumps(_to_serializable(value), sort_keys=True)}\n")
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(list(header))
        count = 0
        for row in rows:
            writer.writerow([format_float(v) for v in row])
            count += 1
        path = self.output_dir / filename
        path.write_text(buffer.getvalue(), encoding='utf-8')
        self.written.append(path)
        logger.info(f"Wrote {count} rows to {path}")
        return path


def read_report(path) -> Dict[str, Any]:
    """Load a report written by ReportWriter.write_report."""
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def read_csv(path) -> Tuple[Dict[str, Any], List[str], np.ndarray]:
    """
    Load a table written by ReportWriter.write_csv.

    Returns:
        Tuple (metadata, header, data) with data as a float array of shape (rows, columns)
    """
    metadata: Dict[str, Any] = {}
    body: List[str] = []
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if line.startswith('#'):
                key, _, value = line[1:].strip().partition(':')
                metadata[key.strip()] = json.loads(value.strip()) if value.strip() else None
            else:
                body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    return metadata, header, data.reshape(-1, len(header))
