"""Full-model fine-tuning with a sequence-classification head.

This is the sanity-check counterpart to frozen extraction: if a dataset
is learnable at all, training the whole encoder on it should reach high
accuracy quickly. The returned trace holds validation accuracy before any
training (index 0) and after each epoch.
"""

from __future__ import annotations

import os

import torch

from embext.config import ExtractorConfig, ResourceError
from embext.encoders import quiet_transformers
from embext.records import read_rows

LEARNING_RATE = 1e-5


def _classifier(cfg: ExtractorConfig):
    transformers = quiet_transformers()
    source = cfg.weights_dir or cfg.model
    cache = os.environ.get("EMBEXT_CACHE") or None
    try:
        model = transformers.AutoModelForSequenceClassification.from_pretrained(
            source, cache_dir=cache, num_labels=2)
    except Exception as exc:
        raise ResourceError(f"cannot load {source!r}: {exc}") from exc
    return model


def _batches(rows, order, size):
    for start in range(0, len(order), size):
        yield [rows[i] for i in order[start:start + size]]


def _encode(tokenizer, batch, device, max_len):
    texts = [row.x0 for row in batch]
    pairs = [row.x1 for row in batch] if batch[0].is_pair else None
    encoded = tokenizer(texts, pairs, padding=True, truncation=True,
                        max_length=max_len, return_tensors="pt")
    labels = torch.tensor([row.label for row in batch], dtype=torch.long)
    return encoded.to(device), labels.to(device)


def _accuracy(model, tokenizer, rows, device, cfg):
    model.eval()
    hits = 0
    with torch.no_grad():
        for batch in _batches(rows, range(len(rows)), cfg.batch_size):
            encoded, labels = _encode(tokenizer, batch, device,
                                      cfg.max_seq_len)
            logits = model(**encoded).logits
            hits += int((logits.argmax(dim=-1) == labels).sum())
    return hits / len(rows)


def fine_tune(train_path, cfg: ExtractorConfig, epochs, val_path=None,
              learning_rate=LEARNING_RATE, seed=0):
    """Train the full model on one split; return the val-accuracy trace.

    Without ``val_path`` the last fifth of the training rows is held out.
    The trace has ``epochs + 1`` entries; entry 0 is the untrained head.
    Sequences longer than ``cfg.max_seq_len`` are truncated, unlike
    extraction, which skips them.
    """
    if epochs < 0:
        raise ValueError("epochs must be nonnegative")
    transformers = quiet_transformers()

    train_rows = read_rows(train_path)
    if val_path is not None:
        val_rows = read_rows(val_path)
    else:
        held = max(1, len(train_rows) // 5)
        train_rows, val_rows = train_rows[:-held], train_rows[-held:]
        if not train_rows:
            raise ValueError("too few rows to hold out a validation set")

    torch.manual_seed(seed)
    tokenizer = transformers.AutoTokenizer.from_pretrained(
        cfg.weights_dir or cfg.model,
        cache_dir=os.environ.get("EMBEXT_CACHE") or None)
    model = _classifier(cfg)
    device = torch.device(cfg.device)
    model.to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=learning_rate)

    generator = torch.Generator().manual_seed(seed)
    try:
        trace = [_accuracy(model, tokenizer, val_rows, device, cfg)]
        for _ in range(epochs):
            model.train()
            order = torch.randperm(len(train_rows), generator=generator)
            for batch in _batches(train_rows, order.tolist(),
                                  cfg.batch_size):
                encoded, labels = _encode(tokenizer, batch, device,
                                          cfg.max_seq_len)
                loss = model(**encoded, labels=labels).loss
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
            trace.append(_accuracy(model, tokenizer, val_rows, device, cfg))
    except torch.cuda.OutOfMemoryError as exc:
        raise ResourceError(
            f"device out of memory at batch_size {cfg.batch_size}; "
            f"reduce batch_size") from exc
    return trace
