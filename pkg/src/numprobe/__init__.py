"""Number-word grammars, probing datasets, and a frozen-embedding MLP probe."""

from numprobe.grammar import (
    MAX_VALUE,
    Language,
    LexiconEntry,
    NumberWord,
    ParseError,
    is_grammatical,
    lexicon,
    parse_words,
    to_words,
    tokenize,
)

__all__ = [
    "MAX_VALUE",
    "Language",
    "LexiconEntry",
    "NumberWord",
    "ParseError",
    "is_grammatical",
    "lexicon",
    "parse_words",
    "to_words",
    "tokenize",
]

__version__ = "0.1.0"
