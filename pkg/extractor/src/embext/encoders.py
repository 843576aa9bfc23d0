"""Frozen-weight embedding extraction.

The encoder never trains here: a checksum over the state dict is taken
before and after the forward passes and any drift aborts the run. Pair
rows are encoded as one two-segment sequence using the tokenizer's native
separator convention, so the probe downstream sees a single vector per
dataset row.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from embext.config import ExtractorConfig, ResourceError
from embext.records import read_rows, write_embeddings

log = logging.getLogger(__name__)


def quiet_transformers():
    """Import transformers with progress bars and info logging off."""
    import transformers

    transformers.logging.set_verbosity_error()
    transformers.logging.disable_progress_bar()
    return transformers


def load_components(model, weights_dir=""):
    """Return (tokenizer, encoder) for a model name or local directory."""
    transformers = quiet_transformers()
    source = weights_dir or model
    cache = os.environ.get("EMBEXT_CACHE") or None
    try:
        tokenizer = transformers.AutoTokenizer.from_pretrained(
            source, cache_dir=cache)
        encoder = transformers.AutoModel.from_pretrained(
            source, cache_dir=cache)
    except Exception as exc:
        raise ResourceError(f"cannot load {source!r}: {exc}") from exc
    encoder.eval()
    return tokenizer, encoder


def weight_checksum(model):
    """Order-independent digest of every parameter and buffer."""
    digest = hashlib.sha256()
    for name, tensor in sorted(model.state_dict().items()):
        digest.update(name.encode("utf-8"))
        digest.update(tensor.detach().cpu().numpy().tobytes())
    return digest.hexdigest()


def sequence_inputs(row):
    """Map a dataset row to (text, text_pair) for the tokenizer."""
    return (row.x0, row.x1) if row.is_pair else (row.x0, None)


def _pool(hidden, mask, pooling):
    if pooling == "first-token":
        return hidden[:, 0]
    weights = mask.unsqueeze(-1).to(hidden.dtype)
    return (hidden * weights).sum(dim=1) / weights.sum(dim=1)


@dataclass(frozen=True)
class ExtractReport:
    count: int
    dim: int
    skipped_ids: tuple
    out_path: str


def extract(dataset_path, out_path, cfg: ExtractorConfig) -> ExtractReport:
    """Embed every row of one dataset split into a binary embedding file.

    Rows whose encoding exceeds ``cfg.max_seq_len`` tokens are skipped and
    logged by id; everything else is written in ascending id order.
    """
    rows = sorted(read_rows(dataset_path), key=lambda r: r.id)
    tokenizer, encoder = load_components(cfg.model, cfg.weights_dir)
    device = torch.device(cfg.device)
    encoder.to(device)
    before = weight_checksum(encoder)

    kept, skipped = [], []
    for row in rows:
        text, pair = sequence_inputs(row)
        length = len(tokenizer(text, pair)["input_ids"])
        if length > cfg.max_seq_len:
            skipped.append(row.id)
            log.warning("row %d skipped: %d tokens exceed max_seq_len %d",
                        row.id, length, cfg.max_seq_len)
        else:
            kept.append(row)
    if not kept:
        raise ResourceError(f"every row of {dataset_path} overflows "
                            f"max_seq_len {cfg.max_seq_len}")

    chunks = []
    with torch.no_grad():
        for start in range(0, len(kept), cfg.batch_size):
            batch = kept[start:start + cfg.batch_size]
            texts = [row.x0 for row in batch]
            pairs = [row.x1 for row in batch] if batch[0].is_pair else None
            try:
                encoded = tokenizer(texts, pairs, padding=True,
                                    return_tensors="pt").to(device)
                hidden = encoder(**encoded).last_hidden_state
            except torch.cuda.OutOfMemoryError as exc:
                raise ResourceError(
                    f"device out of memory on a batch of {len(batch)}; "
                    f"reduce batch_size") from exc
            pooled = _pool(hidden, encoded["attention_mask"], cfg.pooling)
            chunks.append(pooled.cpu().numpy().astype(np.float32))

    after = weight_checksum(encoder)
    if after != before:
        raise RuntimeError("encoder weights changed during extraction")

    vectors = np.concatenate(chunks)
    write_embeddings(out_path,
                     ids=[row.id for row in kept],
                     labels=[row.label for row in kept],
                     vectors=vectors,
                     model=cfg.model,
                     dataset=Path(dataset_path).stem)
    if skipped:
        log.warning("%d of %d rows skipped for length", len(skipped),
                    len(rows))
    return ExtractReport(count=len(kept), dim=vectors.shape[1],
                         skipped_ids=tuple(skipped),
                         out_path=str(out_path))
