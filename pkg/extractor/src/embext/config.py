"""Extraction settings and the package's error types."""

from __future__ import annotations

from dataclasses import dataclass

MODELS = (
    "distilbert-base-multilingual-cased",
    "bert-base-multilingual-cased",
    "xlm-mlm-100-1280",
)
POOLINGS = ("first-token", "mean")


class DataError(ValueError):
    """A dataset or embedding file violates the shared format."""

    def __init__(self, message, path="", line=0):
        detail = message
        if path:
            detail = f"{path}:{line}: {message}" if line else f"{path}: {message}"
        super().__init__(detail)
        self.path = path
        self.line = line


class ResourceError(RuntimeError):
    """The device ran out of memory or a model could not be loaded."""


@dataclass(frozen=True)
class ExtractorConfig:
    """How to run an encoder over a dataset.

    ``model`` must name one of the supported published configurations; it
    is what the output header records. ``weights_dir``, when set, loads
    tokenizer and weights from that local directory instead of the hub
    (the hub cache location itself comes from the EMBEXT_CACHE environment
    variable).
    """

    model: str = MODELS[0]
    pooling: str = "first-token"
    max_seq_len: int = 64
    batch_size: int = 32
    device: str = "cpu"
    weights_dir: str = ""

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; "
                             f"expected one of {', '.join(MODELS)}")
        if self.pooling not in POOLINGS:
            raise ValueError(f"unknown pooling {self.pooling!r}; "
                             f"expected one of {', '.join(POOLINGS)}")
        if self.max_seq_len < 8:
            raise ValueError("max_seq_len must be at least 8")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
