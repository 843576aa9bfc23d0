"""Ungrammatical number-word synthesis.

Two canonical number words are each cut into fragments that are themselves
grammatical (or single lexicon tokens), the two fragment sequences are
interleaved in a random order that keeps each word's internal order, and the
result is kept only if it is not grammatical and not longer than the longest
canonical surface in the value range. Every token of every output therefore
comes from the language's lexicon; no character-level corruption can occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from numprobe.grammar import (
    MAX_VALUE,
    Language,
    NumberWord,
    fragment_joiner,
    get_language,
    is_grammatical,
    lexicon_tokens,
    number_word,
    to_words,
    token_spans,
    tokenize,
)

MAX_ATTEMPTS = 1000


class SynthesisError(RuntimeError):
    """Retry budget exhausted; the config admits no (new) valid output."""


@dataclass(frozen=True)
class SynthConfig:
    language: Language
    value_range: tuple[int, int] = (0, 999)
    max_surface_length: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "language", get_language(self.language))
        lo, hi = self.value_range
        if not (0 <= lo <= hi <= MAX_VALUE):
            raise ValueError(f"bad value range [{lo}, {hi}]")
        if self.max_surface_length is None:
            object.__setattr__(
                self, "max_surface_length",
                _longest_surface(self.language, lo, hi))
        if self.max_surface_length < _shortest_surface(self.language, lo, hi):
            raise ValueError(
                f"max surface length {self.max_surface_length} shorter than "
                f"every canonical surface in [{lo}, {hi}]")


@lru_cache(maxsize=None)
def _surface_extrema(lang: Language, lo: int, hi: int) -> tuple[int, int]:
    lengths = [len(to_words(v, lang)) for v in range(lo, hi + 1)]
    return min(lengths), max(lengths)


def _shortest_surface(lang, lo, hi):
    return _surface_extrema(lang, lo, hi)[0]


def _longest_surface(lang, lo, hi):
    return _surface_extrema(lang, lo, hi)[1]


@lru_cache(maxsize=1 << 16)
def _split_points(lang: Language, surface: str) -> tuple[frozenset[int], ...]:
    tokens = tokenize(surface, lang)
    spans = token_spans(surface, lang)
    n = len(tokens)
    allowed = lexicon_tokens(lang)

    def fragment_ok(i, j):  # tokens[i:j], slice keeps internal joiners
        if j - i == 1 and tokens[i] in allowed:
            return True
        return is_grammatical(surface[spans[i][0]:spans[j - 1][1]], lang)

    ok = {(i, j): fragment_ok(i, j)
          for i in range(n) for j in range(i + 1, n + 1)}
    out = []
    for k in range(n):
        for cuts in combinations(range(1, n), k):
            bounds = (0, *cuts, n)
            if all(ok[i, j] for i, j in zip(bounds, bounds[1:])):
                out.append(frozenset(cuts))
    return tuple(out)


def split_points(word: NumberWord) -> list[frozenset[int]]:
    """All cut-index sets that divide the word into valid fragments.

    A cut index k splits between tokens k-1 and k. Every fragment of a
    returned split is grammatical on its own or is a single lexicon token.
    The empty set (no cut) is always included.
    """
    return list(_split_points(word.language, word.surface))


def fragments(word: NumberWord, cuts: frozenset[int]) -> list[str]:
    """Materialize the fragments of a split, keeping internal joiners."""
    spans = token_spans(word.surface, word.language)
    bounds = (0, *sorted(cuts), len(spans))
    return [word.surface[spans[i][0]:spans[j - 1][1]]
            for i, j in zip(bounds, bounds[1:])]


def interleave(rng: np.random.Generator, first: list, second: list) -> list:
    """Uniform order-preserving interleave of two sequences."""
    labels = np.array([0] * len(first) + [1] * len(second))
    iters = [iter(first), iter(second)]
    return [next(iters[lab]) for lab in rng.permutation(labels)]


def synth_ungrammatical(cfg: SynthConfig,
                        rng: np.random.Generator | None = None) -> str:
    """One ungrammatical string built from two grammatical numbers."""
    return synth_with_sources(cfg, rng)[0]


def synth_with_sources(cfg: SynthConfig,
                       rng: np.random.Generator | None = None
                       ) -> tuple[str, int, int]:
    """Like :func:`synth_ungrammatical` but also returns the source values."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    lang = cfg.language
    lo, hi = cfg.value_range
    joiner = fragment_joiner(lang)
    for _ in range(MAX_ATTEMPTS):
        v0 = int(rng.integers(lo, hi + 1))
        v1 = int(rng.integers(lo, hi + 1))
        if v0 == v1:
            continue
        parts = []
        for v in (v0, v1):
            word = number_word(v, lang)
            splits = _split_points(lang, word.surface)
            cuts = splits[int(rng.integers(len(splits)))]
            parts.append(fragments(word, cuts))
        surface = joiner.join(interleave(rng, parts[0], parts[1]))
        if len(surface) <= cfg.max_surface_length \
                and not is_grammatical(surface, lang):
            return surface, v0, v1
    raise SynthesisError(
        f"no ungrammatical output after {MAX_ATTEMPTS} attempts "
        f"(range {cfg.value_range}, max length {cfg.max_surface_length})")
