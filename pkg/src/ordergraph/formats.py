"""Reading and writing confusion matrices, taxonomies, orderings, traces, heatmaps.

All text output is UTF-8 with ``\\n`` line endings, and every writer is
deterministic: the same inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from os import PathLike
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .anneal import AnnealResult, AnnealTrace
from .errors import (
    AmbiguousHeaderError,
    DuplicateClassError,
    IncompleteTaxonomyError,
    ParseError,
    ValidationError,
)
from .matrix import (
    ClassOrdering,
    ConfusionMatrix,
    TaskLayout,
    TaxonomyMap,
    split_tasks_ordered,
)

PathType = Union[str, PathLike]

TRACE_HEADER = ("iteration", "current_score", "best_score", "temperature", "accepted")


def _parse_int(text: str) -> Optional[int]:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return None


def _write_text(path: PathType, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def read_cm(path: PathType, format: Optional[str] = None) -> ConfusionMatrix:
    """Load a confusion matrix from CSV or JSON (format guessed from the suffix).

    CSV: n rows of n integers, optionally preceded by a header row of labels.
    The first row is a header iff none of its fields parse as an integer.
    """
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "csv"
    text = path.read_text(encoding="utf-8")
    if format == "json":
        return _cm_from_json(text, path)
    if format == "csv":
        return _cm_from_csv(text, path)
    raise ValueError(f"unknown matrix format {format!r}")


def _cm_from_json(text: str, path: Path) -> ConfusionMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "counts" not in doc:
        raise ParseError(f"{path}: expected an object with a 'counts' field")
    counts = doc["counts"]
    if not isinstance(counts, list) or not all(isinstance(r, list) for r in counts):
        raise ParseError(f"{path}: 'counts' must be an array of arrays")
    labels = doc.get("labels")
    if labels is not None and not (
        isinstance(labels, list) and all(isinstance(x, str) for x in labels)
    ):
        raise ParseError(f"{path}: 'labels' must be an array of strings")
    return ConfusionMatrix(counts, None if labels is None else tuple(labels))


def _cm_from_csv(text: str, path: Path) -> ConfusionMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if not rows:
        raise ParseError(f"{path}: no data")
    labels = None
    parsed = [_parse_int(f) for f in rows[0]]
    if all(v is None for v in parsed):
        labels = tuple(f.strip() for f in rows[0])
        rows = rows[1:]
    elif any(v is None for v in parsed):
        raise AmbiguousHeaderError(
            f"{path}: first row mixes numeric and non-numeric fields"
        )
    grid = []
    for lineno, row in enumerate(rows, start=2 if labels else 1):
        values = [_parse_int(f) for f in row]
        if any(v is None for v in values):
            raise ParseError(f"{path}: row {lineno} has a non-integer field")
        grid.append(values)
    return ConfusionMatrix(grid, labels)


def write_cm(M: ConfusionMatrix, path: PathType) -> None:
    """CSV with a quoted label header when the matrix carries labels."""
    buf = io.StringIO()
    if M.labels is not None:
        if any(_parse_int(x) is not None for x in M.labels):
            raise ValidationError("integer-like labels would be misread as a data row")
        csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_ALL).writerow(M.labels)
    for row in M.counts:
        buf.write(",".join(str(int(v)) for v in row) + "\n")
    _write_text(path, buf.getvalue())


def write_cm_json(M: ConfusionMatrix, path: PathType) -> None:
    doc = {}
    if M.labels is not None:
        doc["labels"] = list(M.labels)
    doc["counts"] = M.counts.tolist()
    _write_text(path, json.dumps(doc) + "\n")


def read_taxonomy(path: PathType, n: Optional[int] = None) -> TaxonomyMap:
    """Two-column ``class_index,group_id`` CSV, one row per class.

    Class indices must cover 0..n-1 exactly; ``n`` defaults to the row count.
    """
    path = Path(path)
    group_of: dict[int, int] = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    for lineno, row in enumerate(csv.reader(lines), start=1):
        if not row or not any(f.strip() for f in row):
            continue
        if len(row) != 2:
            raise ParseError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
        cls, group = _parse_int(row[0]), _parse_int(row[1])
        if cls is None or group is None:
            if lineno == 1 and cls is None and group is None:
                continue  # header
            raise ParseError(f"{path}: line {lineno}: fields must be integers")
        if cls in group_of:
            raise DuplicateClassError(f"{path}: class {cls} listed twice")
        group_of[cls] = group
    if n is None:
        n = len(group_of)
    tax = TaxonomyMap(group_of)
    try:
        tax.check(n)
    except IncompleteTaxonomyError as exc:
        raise IncompleteTaxonomyError(f"{path}: {exc}") from None
    return tax


def ordering_document(
    result: Union[AnnealResult, ClassOrdering],
    layout: Optional[TaskLayout] = None,
    labels: Optional[tuple[str, ...]] = None,
    strategy: Optional[str] = None,
    seed: Optional[int] = None,
    score: Optional[int] = None,
) -> dict:
    if isinstance(result, AnnealResult):
        ordering = result.best
        score = result.best_score if score is None else score
        seed = result.seed if seed is None else seed
    else:
        ordering = result
    doc = {"strategy": strategy, "seed": seed}
    if score is not None:
        doc["score"] = int(score)
    doc["ordering"] = list(ordering.perm)
    if labels is not None:
        doc["labels_in_order"] = [labels[c] for c in ordering.perm]
    if layout is not None:
        doc["tasks"] = split_tasks_ordered(ordering, layout)
    return doc


def write_ordering(
    result: Union[AnnealResult, ClassOrdering],
    path: PathType,
    layout: Optional[TaskLayout] = None,
    labels: Optional[tuple[str, ...]] = None,
    strategy: Optional[str] = None,
    seed: Optional[int] = None,
    score: Optional[int] = None,
) -> None:
    """JSON with keys strategy, seed, score, ordering, labels_in_order, tasks.

    Optional keys are left out when unknown; the order of the rest is fixed.
    """
    doc = ordering_document(result, layout, labels, strategy, seed, score)
    _write_text(path, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def read_ordering_document(path: PathType) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("ordering"), list):
        raise ParseError(f"{path}: expected an object with an 'ordering' array")
    return doc


def read_ordering(path: PathType) -> ClassOrdering:
    return ClassOrdering(tuple(read_ordering_document(path)["ordering"]))


def heatmap_pixels(M, scale: str = "linear") -> np.ndarray:
    """8-bit intensities, one per cell; the largest count maps to 255."""
    counts = M.counts if isinstance(M, ConfusionMatrix) else np.asarray(M)
    peak = int(counts.max())
    if peak == 0:
        return np.zeros(counts.shape, dtype=np.uint8)
    if scale == "linear":
        # round half up in exact integer arithmetic
        vals = (2 * 255 * counts.astype(object) + peak) // (2 * peak)
        return np.array(vals, dtype=np.uint8)
    if scale == "log1p":
        denom = math.log1p(peak)
        out = np.empty(counts.shape, dtype=np.uint8)
        for idx, v in np.ndenumerate(counts):
            out[idx] = math.floor(255.0 * math.log1p(int(v)) / denom + 0.5)
        return out
    raise ValueError(f"unknown scale {scale!r}; expected 'linear' or 'log1p'")


def render_heatmap(M, path: PathType, scale: str = "linear") -> None:
    """Binary greyscale PGM (P5): rows are true classes, columns predictions."""
    pixels = heatmap_pixels(M, scale)
    h, w = pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())


def read_pgm(path: PathType) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ParseError(f"{path}: not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ParseError(f"{path}: only 8-bit PGM is supported")
    body = parts[4] if len(parts) == 5 else b""
    if len(body) != w * h:
        raise ParseError(f"{path}: expected {w * h} pixel bytes, found {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


def write_trace(trace: AnnealTrace, path: PathType, stride: int = 1) -> None:
    """CSV, one row per ``stride``-th iteration. The final iteration is always kept."""
    if stride < 1:
        raise ValueError("stride must be at least 1")
    lines = [",".join(TRACE_HEADER)]
    n = len(trace)
    rows = list(range(0, n, stride))
    if n and rows[-1] != n - 1:
        rows.append(n - 1)
    cur, best, temp, acc = (
        trace.current_score, trace.best_score, trace.temperature, trace.accepted
    )
    for i in rows:
        lines.append(f"{i},{int(cur[i])},{int(best[i])},{float(temp[i])!r},{int(acc[i])}")
    _write_text(path, "\n".join(lines) + "\n")


def read_trace(path: PathType) -> list[tuple[int, int, int, float, bool]]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if tuple(header or ()) != TRACE_HEADER:
            raise ParseError(f"{path}: unexpected trace header {header}")
        return [
            (int(r[0]), int(r[1]), int(r[2]), float(r[3]), r[4] == "1") for r in reader
        ]
