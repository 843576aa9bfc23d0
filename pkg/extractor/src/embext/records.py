"""Readers and writers for the two shared on-disk formats.

Dataset rows arrive as TSV with eight fields per line:
``id  task  variant  lang  x0  x1  y  template_id`` where ``x1`` and
``template_id`` hold "-" when absent. Embeddings leave as one UTF-8 JSON
header line followed by packed little-endian records (u64 id, u8 label,
dim float32 values). Both formats are defined by the dataset-producing
package; this module implements them independently so a drift on either
side fails loudly.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from embext.config import DataError

TASKS = ("grammaticality", "comparison")
ABSENT = "-"
EMBEDDING_DTYPE = "f32le"
_RECORD_HEAD = struct.Struct("<QB")


@dataclass(frozen=True)
class Row:
    id: int
    task: str
    variant: str
    lang: str
    x0: str
    x1: str
    label: int

    @property
    def is_pair(self):
        return self.task == "comparison"


def read_rows(path):
    """Parse one dataset split; every row must belong to the same task."""
    path = Path(path)
    rows = []
    seen_task = None
    for number, line in enumerate(
            path.read_text(encoding="utf-8").splitlines(), start=1):
        fields = line.split("\t")
        if len(fields) != 8:
            raise DataError(f"expected 8 tab-separated fields, got "
                            f"{len(fields)}", str(path), number)
        ident, task, _variant, _lang, x0, x1, label, _template = fields
        if task not in TASKS:
            raise DataError(f"unknown task {task!r}", str(path), number)
        if seen_task not in (None, task):
            raise DataError(f"mixed tasks {seen_task!r} and {task!r}",
                            str(path), number)
        seen_task = task
        if not ident.isdigit():
            raise DataError(f"bad id {ident!r}", str(path), number)
        if label not in ("0", "1"):
            raise DataError(f"bad label {label!r}", str(path), number)
        if not x0:
            raise DataError("empty first text", str(path), number)
        if (x1 == ABSENT) == (task == "comparison"):
            raise DataError(f"x1 {x1!r} does not fit task {task!r}",
                            str(path), number)
        rows.append(Row(id=int(ident), task=task, variant=_variant,
                        lang=_lang, x0=x0, x1=x1, label=int(label)))
    if not rows:
        raise DataError("no rows", str(path))
    return rows


def write_embeddings(path, ids, labels, vectors, model, dataset):
    """Write one embedding file; vectors is a (count, dim) float array."""
    vectors = np.ascontiguousarray(vectors, dtype="<f4")
    if vectors.ndim != 2 or not len(vectors):
        raise ValueError("vectors must be a nonempty 2-d array")
    if not (len(ids) == len(labels) == len(vectors)):
        raise ValueError("ids, labels, and vectors disagree on length")
    header = json.dumps({"dim": vectors.shape[1], "count": len(vectors),
                         "dtype": EMBEDDING_DTYPE, "source_model": model,
                         "dataset": dataset}, ensure_ascii=False)
    with open(path, "wb") as handle:
        handle.write(header.encode("utf-8") + b"\n")
        for ident, label, vec in zip(ids, labels, vectors):
            handle.write(_RECORD_HEAD.pack(int(ident), int(label)))
            handle.write(vec.tobytes())


def read_embeddings(path):
    """Return (ids, labels, vectors, header) from one embedding file."""
    path = Path(path)
    with open(path, "rb") as handle:
        try:
            header = json.loads(handle.readline().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DataError(f"bad header: {exc}", str(path), 1) from exc
        payload = handle.read()
    for key in ("dim", "count", "dtype"):
        if key not in header:
            raise DataError(f"header lacks {key!r}", str(path), 1)
    if header["dtype"] != EMBEDDING_DTYPE:
        raise DataError(f"unsupported dtype {header['dtype']!r}",
                        str(path), 1)
    dim, count = header["dim"], header["count"]
    stride = _RECORD_HEAD.size + 4 * dim
    if len(payload) != stride * count:
        raise DataError(f"payload is {len(payload)} bytes, expected "
                        f"{stride * count}", str(path))
    ids = np.empty(count, dtype=np.uint64)
    labels = np.empty(count, dtype=np.uint8)
    vectors = np.empty((count, dim), dtype=np.float32)
    for i in range(count):
        record = payload[i * stride:(i + 1) * stride]
        ids[i], labels[i] = _RECORD_HEAD.unpack_from(record)
        vectors[i] = np.frombuffer(record, dtype="<f4",
                                   offset=_RECORD_HEAD.size)
    return ids, labels, vectors, header
