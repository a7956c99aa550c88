"""Reading and writing sample files.

CSV: one sample per row, optional single header line (detected by a
non-numeric first line). JSON: ``{"dim": d, "samples": [[...], ...]}`` plus
optional extra keys, which are ignored on input.
"""

import csv
import io
import json
from pathlib import Path

import numpy as np

from rkrd.errors import FormatError, InvalidInput
from rkrd.kernels import SampleSet

FLOAT_FMT = "%.17g"


def _is_float(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text))]
    numbered = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if not numbered:
        raise InvalidInput("sample file is empty")
    first_line, first = numbered[0]
    if not all(_is_float(c) for c in first):
        numbered = numbered[1:]
        if not numbered:
            raise InvalidInput("sample file has a header but no samples")
    width = len(numbered[0][1])
    data = []
    for line, row in numbered:
        if len(row) != width:
            raise FormatError(f"expected {width} fields, found {len(row)}", line=line)
        values = []
        for col, cell in enumerate(row, start=1):
            try:
                values.append(float(cell))
            except ValueError:
                raise FormatError(f"non-numeric value {cell.strip()!r}", line=line, column=col) from None
        data.append(values)
    return np.array(data, dtype=float)


def _parse_json(text):
    if not text.strip():
        raise InvalidInput("sample file is empty")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict) or "samples" not in obj:
        raise FormatError('expected an object with a "samples" array')
    samples = obj["samples"]
    if not isinstance(samples, list) or not samples:
        raise InvalidInput("sample file contains no samples")
    dim = obj.get("dim", len(samples[0]) if isinstance(samples[0], list) else None)
    for i, row in enumerate(samples):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"sample {i} does not have dim = {dim} entries")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise FormatError(f"sample {i}, entry {j} is not a number: {v!r}")
    return np.array(samples, dtype=float)


def infer_format(path, fmt=None):
    if fmt:
        return fmt
    return "json" if str(path).lower().endswith(".json") else "csv"


def ingest_samples(path, fmt=None):
    """Load a ``SampleSet`` from a CSV or JSON file."""
    path = Path(path)
    fmt = infer_format(path, fmt)
    text = path.read_text()
    if fmt == "csv":
        rows = _parse_csv(text)
    elif fmt == "json":
        rows = _parse_json(text)
    else:
        raise InvalidInput(f"unknown sample format {fmt!r}")
    return SampleSet(rows)


def emit_samples(samples, path, fmt=None, metadata=None):
    """Write samples with 17 significant digits (exact float64 round trip)."""
    path = Path(path)
    fmt = infer_format(path, fmt)
    rows = samples.rows if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float)
    if fmt == "csv":
        lines = [",".join(FLOAT_FMT % v for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        obj = {"dim": int(rows.shape[1]), "samples": rows.tolist()}
        if metadata:
            obj["metadata"] = metadata
        path.write_text(json.dumps(obj))
    else:
        raise InvalidInput(f"unknown sample format {fmt!r}")
    return path
