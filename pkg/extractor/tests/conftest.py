"""Shared fixtures: a tiny local encoder and hand-written dataset files.

The tiny model is a randomly initialized two-layer encoder with a
31-token WordPiece vocabulary covering English number words. It is saved
once per session and loaded through the same path real checkpoints use,
so everything except scale behaves like production.
"""

import pytest
import torch

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "zero", "one", "two", "three", "four", "five", "six", "seven",
    "eight", "nine", "ten", "eleven", "twelve", "twenty", "thirty",
    "forty", "fifty", "ninety", "hundred", "thousand", "million",
    "and", "-", ",", "there", "are",
]

TINY_DIM = 32


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    from embext.encoders import quiet_transformers

    quiet_transformers()
    from transformers import (
        DistilBertConfig,
        DistilBertModel,
        DistilBertTokenizer,
    )

    directory = tmp_path_factory.mktemp("tiny-encoder")
    vocab_file = directory / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    torch.manual_seed(7)
    config = DistilBertConfig(vocab_size=len(VOCAB), dim=TINY_DIM,
                              hidden_dim=2 * TINY_DIM, n_layers=2,
                              n_heads=2, max_position_embeddings=64)
    DistilBertModel(config).save_pretrained(directory)
    DistilBertTokenizer(str(vocab_file)).save_pretrained(directory)
    return str(directory)


@pytest.fixture()
def tiny_config(tiny_model_dir):
    from embext import ExtractorConfig

    return ExtractorConfig(weights_dir=tiny_model_dir, batch_size=8)


def dataset_line(ident, task, x0, x1, label, variant="bare", lang="en",
                 template="-"):
    return "\t".join((str(ident), task, variant, lang, x0, x1, str(label),
                      template))


def write_grammaticality(path, texts_and_labels):
    lines = [dataset_line(i, "grammaticality", text, "-", label)
             for i, (text, label) in enumerate(texts_and_labels)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_comparison(path, triples):
    lines = [dataset_line(i, "comparison", x0, x1, label)
             for i, (x0, x1, label) in enumerate(triples)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def grammar_file(tmp_path):
    rows = [("twenty-one", 0), ("five hundred", 0), ("one one", 1),
            ("hundred twenty five", 1), ("nine hundred and ninety-nine", 0),
            ("thousand one million", 1), ("twelve", 0), ("ten ten", 1)]
    return write_grammaticality(tmp_path / "en_grammaticality_bare_test.tsv",
                                rows)


@pytest.fixture()
def comparison_file(tmp_path):
    rows = [("five hundred", "twenty-one", 0), ("one", "nine hundred", 1),
            ("twelve", "eleven", 0), ("thirty", "forty", 1),
            ("ninety", "ten", 0), ("two", "three", 1)]
    return write_comparison(tmp_path / "en_comparison_bare_test.tsv", rows)
