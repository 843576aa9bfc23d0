"""Embedding extraction from pretrained multilingual encoders.

Reads number-word dataset TSV files, runs a frozen encoder over them, and
writes pooled vectors in the binary embedding format the probe harness
consumes. ``fine_tune`` trains the full model instead, as a learnability
check.
"""

from embext.config import (
    MODELS,
    POOLINGS,
    DataError,
    ExtractorConfig,
    ResourceError,
)
from embext.encoders import (
    ExtractReport,
    extract,
    load_components,
    sequence_inputs,
    weight_checksum,
)
from embext.finetune import fine_tune
from embext.records import read_embeddings, read_rows, write_embeddings

__version__ = "0.1.0"

__all__ = [
    "MODELS",
    "POOLINGS",
    "DataError",
    "ExtractReport",
    "ExtractorConfig",
    "ResourceError",
    "extract",
    "fine_tune",
    "load_components",
    "read_embeddings",
    "read_rows",
    "sequence_inputs",
    "weight_checksum",
    "write_embeddings",
]
