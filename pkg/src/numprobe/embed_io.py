"""Binary interchange for embedding sets and probe checkpoints.

Embedding file layout: one UTF-8 JSON header line
``{"dim": d, "count": n, "dtype": "f32le", "source_model": ..., "dataset": ...}``
terminated by a newline, then ``n`` packed records of (example id as 8-byte
little-endian unsigned, label as 1 byte, d little-endian float32 components).
Probe checkpoints reuse the header-plus-binary scheme with float64 parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

EMBEDDING_DTYPE = "f32le"
CHECKPOINT_DTYPE = "f64le"
CHECKPOINT_KIND = "mlp-probe"


class BinaryFormatError(ValueError):
    """Embedding or checkpoint file violates the binary format."""


def _record_dtype(dim: int) -> np.dtype:
    return np.dtype([("id", "<u8"), ("label", "u1"), ("vec", "<f4", (dim,))])


@dataclass(frozen=True)
class EmbeddingSet:
    ids: np.ndarray      # (n,) uint64
    labels: np.ndarray   # (n,) uint8, values in {0, 1}
    vectors: np.ndarray  # (n, d) float32
    source_model: str = ""
    dataset: str = ""

    def __post_init__(self):
        ids = np.ascontiguousarray(self.ids, dtype=np.uint64)
        labels = np.ascontiguousarray(self.labels, dtype=np.uint8)
        vectors = np.ascontiguousarray(self.vectors, dtype=np.float32)
        if vectors.ndim != 2:
            raise BinaryFormatError(
                f"vectors must be 2-d, got shape {vectors.shape}")
        if not (len(ids) == len(labels) == len(vectors)):
            raise BinaryFormatError(
                f"length mismatch: {len(ids)} ids, {len(labels)} labels, "
                f"{len(vectors)} vectors")
        if len(vectors) == 0 or vectors.shape[1] == 0:
            raise BinaryFormatError("empty embedding set")
        if labels.size and labels.max() > 1:
            raise BinaryFormatError("labels must be 0 or 1")
        if not np.isfinite(vectors).all():
            raise BinaryFormatError("non-finite vector component")
        for name, arr in (("ids", ids), ("labels", labels),
                          ("vectors", vectors)):
            object.__setattr__(self, name, arr)

    @property
    def count(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __eq__(self, other):
        if not isinstance(other, EmbeddingSet):
            return NotImplemented
        return (self.source_model == other.source_model
                and self.dataset == other.dataset
                and np.array_equal(self.ids, other.ids)
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.vectors, other.vectors))


def write_embeddings(path: str | Path, embeddings: EmbeddingSet) -> Path:
    path = Path(path)
    header = {
        "dim": embeddings.dim,
        "count": embeddings.count,
        "dtype": EMBEDDING_DTYPE,
        "source_model": embeddings.source_model,
        "dataset": embeddings.dataset,
    }
    records = np.empty(embeddings.count, dtype=_record_dtype(embeddings.dim))
    records["id"] = embeddings.ids
    records["label"] = embeddings.labels
    records["vec"] = embeddings.vectors
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8") + b"\n")
        fh.write(records.tobytes())
    return path


def _read_header(fh, path: Path) -> dict:
    line = fh.readline()
    if not line.endswith(b"\n"):
        raise BinaryFormatError(f"{path}: missing header line")
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise BinaryFormatError(f"{path}: bad header: {err}") from None
    if not isinstance(header, dict):
        raise BinaryFormatError(f"{path}: header must be a JSON object")
    return header


def read_embeddings(path: str | Path) -> EmbeddingSet:
    path = Path(path)
    with open(path, "rb") as fh:
        header = _read_header(fh, path)
        for key in ("dim", "count", "dtype"):
            if key not in header:
                raise BinaryFormatError(f"{path}: header missing {key!r}")
        if header["dtype"] != EMBEDDING_DTYPE:
            raise BinaryFormatError(
                f"{path}: unsupported dtype {header['dtype']!r}")
        dim, count = header["dim"], header["count"]
        if not (isinstance(dim, int) and dim > 0
                and isinstance(count, int) and count >= 0):
            raise BinaryFormatError(f"{path}: bad dim/count in header")
        dtype = _record_dtype(dim)
        payload = fh.read()
    if len(payload) != count * dtype.itemsize:
        raise BinaryFormatError(
            f"{path}: expected {count * dtype.itemsize} payload bytes "
            f"for {count} records, found {len(payload)}")
    records = np.frombuffer(payload, dtype=dtype)
    return EmbeddingSet(
        ids=records["id"].copy(),
        labels=records["label"].copy(),
        vectors=records["vec"].copy(),
        source_model=str(header.get("source_model", "")),
        dataset=str(header.get("dataset", "")),
    )


def write_checkpoint(path: str | Path, params: dict[str, np.ndarray],
                     meta: dict | None = None) -> Path:
    """Save named float64 arrays with a self-describing header."""
    path = Path(path)
    arrays = {k: np.ascontiguousarray(v, dtype="<f8") for k, v in params.items()}
    for name, arr in arrays.items():
        if not np.isfinite(arr).all():
            raise BinaryFormatError(f"non-finite values in {name!r}")
    header = {
        "kind": CHECKPOINT_KIND,
        "dtype": CHECKPOINT_DTYPE,
        "params": {k: list(v.shape) for k, v in arrays.items()},
        "meta": meta or {},
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8") + b"\n")
        for _, arr in sorted(arrays.items()):
            fh.write(arr.tobytes())
    return path


def read_checkpoint(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    path = Path(path)
    with open(path, "rb") as fh:
        header = _read_header(fh, path)
        if header.get("kind") != CHECKPOINT_KIND:
            raise BinaryFormatError(
                f"{path}: not a probe checkpoint: kind={header.get('kind')!r}")
        if header.get("dtype") != CHECKPOINT_DTYPE:
            raise BinaryFormatError(
                f"{path}: unsupported dtype {header.get('dtype')!r}")
        shapes = header.get("params")
        if not isinstance(shapes, dict) or not shapes:
            raise BinaryFormatError(f"{path}: header missing param shapes")
        payload = fh.read()
    params = {}
    offset = 0
    for name in sorted(shapes):
        shape = tuple(int(x) for x in shapes[name])
        size = int(np.prod(shape, dtype=np.int64)) * 8
        chunk = payload[offset:offset + size]
        if len(chunk) != size:
            raise BinaryFormatError(f"{path}: truncated payload at {name!r}")
        params[name] = np.frombuffer(chunk, dtype="<f8").reshape(shape).copy()
        offset += size
    if offset != len(payload):
        raise BinaryFormatError(
            f"{path}: {len(payload) - offset} trailing bytes")
    for name, arr in params.items():
        if not np.isfinite(arr).all():
            raise BinaryFormatError(f"{path}: non-finite values in {name!r}")
    meta = header.get("meta") or {}
    return params, meta
