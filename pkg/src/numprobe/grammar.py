"""Canonical number-word grammars for English, Danish, French, and Japanese.

Each language is driven by the same engine: an ordered table of "cards"
(value, surface) plus a language-specific merge rule that combines two
rendered parts into one. Rendering an integer walks the card table top-down
(largest card first), which yields exactly one surface form per value.
Parsing runs a liberal token accumulator to get a candidate value, then
verifies by re-rendering, so the accepted set is exactly the canonical set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

MAX_VALUE = 100_000_000

_MILLION = 10**6


class Language(str, Enum):
    EN = "en"
    DA = "da"
    FR = "fr"
    JA = "ja"


def get_language(code: str | Language) -> Language:
    """Resolve a language code, rejecting anything outside the supported four."""
    if isinstance(code, Language):
        return code
    try:
        return Language(str(code).lower())
    except ValueError:
        raise ValueError(
            f"unsupported language {code!r}; expected one of "
            f"{', '.join(lang.value for lang in Language)}"
        ) from None


class ParseError(ValueError):
    """Surface form is not a canonical number word.

    ``position`` is the index of the first offending token (0-based), i.e.
    the point where the input stops matching any canonical rendering.
    """

    def __init__(self, message: str, position: int, token: str = ""):
        super().__init__(message)
        self.position = position
        self.token = token


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    role: str  # unit | ten | scale | connector
    weight: int


@dataclass(frozen=True)
class NumberWord:
    language: Language
    surface: str
    value: int


class _Grammar:
    """Shared rendering/parsing engine; subclasses supply the language rules."""

    code: Language
    zero: str
    one: str
    # (value, surface), strictly descending by value, zero excluded
    cards: list[tuple[int, str]]
    lexicon: list[LexiconEntry]
    # joiner placed between fragments when ungrammatical strings are synthesized
    fragment_joiner = " "
    _token_re = re.compile(r"[^\s,\-]+")

    def render(self, value: int) -> str:
        if value == 0:
            return self.zero
        return self._pair(value)[0]

    def _pair(self, value: int) -> tuple[str, int]:
        for num, text in self.cards:
            if num > value:
                continue
            div, mod = divmod(value, num)
            left = (self.one, 1) if div == 1 else self._pair(div)
            out = self.merge(left, (text, num))
            if mod:
                out = self.merge(out, self._pair(mod))
            return out
        raise AssertionError(f"no card for {value}")  # cards cover 1..MAX_VALUE

    def merge(self, cur: tuple[str, int], nxt: tuple[str, int]) -> tuple[str, int]:
        raise NotImplementedError

    def tokenize(self, surface: str) -> list[str]:
        return self._token_re.findall(surface)

    def token_spans(self, surface: str) -> list[tuple[int, int]]:
        return [m.span() for m in self._token_re.finditer(surface)]

    def candidate(self, tokens: list[str]) -> int:
        raise NotImplementedError

    def token_set(self) -> frozenset[str]:
        """All single tokens that can occur in canonical surfaces."""
        pieces: set[str] = set()
        for entry in self.lexicon:
            pieces.update(self.tokenize(entry.surface))
        return frozenset(pieces)

    def is_lexical(self, token: str) -> bool:
        return token in self.token_set()


def _lex(*triples: tuple[str, str, int]) -> list[LexiconEntry]:
    return [LexiconEntry(s, r, w) for s, r, w in triples]


class _English(_Grammar):
    code = Language.EN
    zero = "zero"
    one = "one"

    _small = {
        "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
        "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
        "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
        "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18,
        "nineteen": 19, "twenty": 20, "thirty": 30, "forty": 40,
        "fifty": 50, "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
    }
    _scales = {"hundred": 100, "thousand": 1000, "million": _MILLION}

    cards = [(w, s) for s, w in sorted(
        {**_small, **_scales}.items(), key=lambda kv: -kv[1]) if w > 0]

    lexicon = _lex(
        *[(s, "unit", w) for s, w in sorted(_small.items(), key=lambda kv: kv[1]) if w < 20],
        *[(s, "ten", w) for s, w in sorted(_small.items(), key=lambda kv: kv[1]) if w >= 20],
        ("hundred", "scale", 100), ("thousand", "scale", 1000),
        ("million", "scale", _MILLION), ("and", "connector", 0),
    )

    def merge(self, cur, nxt):
        ctext, cnum = cur
        ntext, nnum = nxt
        if cnum == 1 and nnum < 100:
            return nxt
        if 100 > cnum > nnum:
            return (f"{ctext}-{ntext}", cnum + nnum)
        if cnum >= 100 > nnum:
            return (f"{ctext} and {ntext}", cnum + nnum)
        if nnum > cnum:
            return (f"{ctext} {ntext}", cnum * nnum)
        return (f"{ctext}, {ntext}", cnum + nnum)

    def candidate(self, tokens):
        total = current = 0
        for i, tok in enumerate(tokens):
            if tok == "and":
                continue
            if tok == "hundred":
                current = max(current, 1) * 100
            elif tok in ("thousand", "million"):
                total += max(current, 1) * self._scales[tok]
                current = 0
            elif tok in self._small:
                current += self._small[tok]
            else:
                raise ParseError(f"unknown token {tok!r}", i, tok)
        return total + current


class _Danish(_Grammar):
    code = Language.DA
    zero = "nul"
    one = "et"

    _small = {
        "nul": 0, "et": 1, "en": 1, "to": 2, "tre": 3, "fire": 4, "fem": 5,
        "seks": 6, "syv": 7, "otte": 8, "ni": 9, "ti": 10, "elleve": 11,
        "tolv": 12, "tretten": 13, "fjorten": 14, "femten": 15,
        "seksten": 16, "sytten": 17, "atten": 18, "nitten": 19, "tyve": 20,
        "tredive": 30, "fyrre": 40, "halvtreds": 50, "tres": 60,
        "halvfjerds": 70, "firs": 80, "halvfems": 90,
    }
    _scales = {
        "hundrede": 100, "tusind": 1000, "tusinde": 1000,
        "million": _MILLION, "millioner": _MILLION,
    }
    # longest-first so fused compounds segment unambiguously
    _morphemes = sorted({**_small, **_scales, "og": 0}, key=len, reverse=True)

    cards = [
        (_MILLION, "million"), (1000, "tusind"), (100, "hundrede"),
        (90, "halvfems"), (80, "firs"), (70, "halvfjerds"), (60, "tres"),
        (50, "halvtreds"), (40, "fyrre"), (30, "tredive"), (20, "tyve"),
        (19, "nitten"), (18, "atten"), (17, "sytten"), (16, "seksten"),
        (15, "femten"), (14, "fjorten"), (13, "tretten"), (12, "tolv"),
        (11, "elleve"), (10, "ti"), (9, "ni"), (8, "otte"), (7, "syv"),
        (6, "seks"), (5, "fem"), (4, "fire"), (3, "tre"), (2, "to"), (1, "et"),
    ]

    lexicon = _lex(
        ("nul", "unit", 0), ("et", "unit", 1), ("en", "unit", 1),
        ("to", "unit", 2), ("tre", "unit", 3), ("fire", "unit", 4),
        ("fem", "unit", 5), ("seks", "unit", 6), ("syv", "unit", 7),
        ("otte", "unit", 8), ("ni", "unit", 9), ("ti", "unit", 10),
        ("elleve", "unit", 11), ("tolv", "unit", 12), ("tretten", "unit", 13),
        ("fjorten", "unit", 14), ("femten", "unit", 15), ("seksten", "unit", 16),
        ("sytten", "unit", 17), ("atten", "unit", 18), ("nitten", "unit", 19),
        ("tyve", "ten", 20), ("tredive", "ten", 30), ("fyrre", "ten", 40),
        ("halvtreds", "ten", 50), ("tres", "ten", 60), ("halvfjerds", "ten", 70),
        ("firs", "ten", 80), ("halvfems", "ten", 90),
        ("hundrede", "scale", 100), ("tusind", "scale", 1000),
        ("tusinde", "scale", 1000), ("million", "scale", _MILLION),
        ("millioner", "scale", _MILLION), ("og", "connector", 0),
    )

    def merge(self, cur, nxt):
        ctext, cnum = cur
        ntext, nnum = nxt
        if cnum == 1:
            if nnum < _MILLION:
                return nxt
            ctext = "en"
        if nnum > cnum:  # multiplication
            if nnum >= _MILLION:
                if cnum != 1:
                    ntext += "er"
                return (f"{ctext} {ntext}", cnum * nnum)
            return (ctext + ntext, cnum * nnum)
        # addition
        if nnum < 10 < cnum < 100:  # unit-before-ten inversion: enogtyve
            ntext = "en" if nnum == 1 else ntext
            return (ntext + "og" + ctext, cnum + nnum)
        if cnum >= _MILLION:
            joiner = " og " if nnum < 100 else " "
            return (ctext + joiner + ntext, cnum + nnum)
        if nnum < 100:
            return (ctext + " og " + ntext, cnum + nnum)
        return (ctext + "e" + ntext, cnum + nnum)  # tusind -> tusinde

    def _segment(self, token: str) -> list[str] | None:
        parts = []
        i = 0
        while i < len(token):
            for m in self._morphemes:
                if token.startswith(m, i):
                    parts.append(m)
                    i += len(m)
                    break
            else:
                return None
        return parts

    def candidate(self, tokens):
        total = current = 0
        for i, tok in enumerate(tokens):
            parts = self._segment(tok)
            if parts is None:
                raise ParseError(f"unknown token {tok!r}", i, tok)
            for part in parts:
                if part == "og":
                    continue
                if part == "hundrede":
                    current = max(current, 1) * 100
                elif part in ("tusind", "tusinde"):
                    total += max(current, 1) * 1000
                    current = 0
                elif part in ("million", "millioner"):
                    total += max(current, 1) * _MILLION
                    current = 0
                else:
                    current += self._small[part]
        return total + current

    def token_set(self):
        # fused compounds make the per-token set open-ended; canonical-piece
        # membership is checked at the morpheme level instead
        return frozenset(self._morphemes)

    def is_lexical(self, token):
        return self._segment(token) is not None


class _French(_Grammar):
    code = Language.FR
    zero = "zéro"
    one = "un"

    _small = {
        "zéro": 0, "un": 1, "deux": 2, "trois": 3, "quatre": 4, "cinq": 5,
        "six": 6, "sept": 7, "huit": 8, "neuf": 9, "dix": 10, "onze": 11,
        "douze": 12, "treize": 13, "quatorze": 14, "quinze": 15, "seize": 16,
        "vingt": 20, "trente": 30, "quarante": 40, "cinquante": 50,
        "soixante": 60,
    }

    cards = [
        (_MILLION, "million"), (1000, "mille"), (100, "cent"),
        (80, "quatre-vingts"), (60, "soixante"), (50, "cinquante"),
        (40, "quarante"), (30, "trente"), (20, "vingt"),
        (19, "dix-neuf"), (18, "dix-huit"), (17, "dix-sept"), (16, "seize"),
        (15, "quinze"), (14, "quatorze"), (13, "treize"), (12, "douze"),
        (11, "onze"), (10, "dix"), (9, "neuf"), (8, "huit"), (7, "sept"),
        (6, "six"), (5, "cinq"), (4, "quatre"), (3, "trois"), (2, "deux"),
        (1, "un"),
    ]

    lexicon = _lex(
        ("zéro", "unit", 0), ("un", "unit", 1), ("deux", "unit", 2),
        ("trois", "unit", 3), ("quatre", "unit", 4), ("cinq", "unit", 5),
        ("six", "unit", 6), ("sept", "unit", 7), ("huit", "unit", 8),
        ("neuf", "unit", 9), ("dix", "unit", 10), ("onze", "unit", 11),
        ("douze", "unit", 12), ("treize", "unit", 13), ("quatorze", "unit", 14),
        ("quinze", "unit", 15), ("seize", "unit", 16), ("dix-sept", "unit", 17),
        ("dix-huit", "unit", 18), ("dix-neuf", "unit", 19),
        ("vingt", "ten", 20), ("vingts", "ten", 20), ("trente", "ten", 30),
        ("quarante", "ten", 40), ("cinquante", "ten", 50),
        ("soixante", "ten", 60), ("quatre-vingts", "ten", 80),
        ("cent", "scale", 100), ("cents", "scale", 100),
        ("mille", "scale", 1000), ("million", "scale", _MILLION),
        ("millions", "scale", _MILLION), ("et", "connector", 0),
    )

    def merge(self, cur, nxt):
        ctext, cnum = cur
        ntext, nnum = nxt
        if cnum == 1:
            if nnum < _MILLION:
                return nxt
        else:
            # quatre-vingts / deux cents drop the plural s before a multiplier
            if ((cnum - 80) % 100 == 0 or (cnum % 100 == 0 and cnum < 1000)) \
                    and nnum < _MILLION and ctext.endswith("s"):
                ctext = ctext[:-1]
            if cnum < 1000 and nnum != 1000 and not ntext.endswith("s") \
                    and nnum % 100 == 0:
                ntext += "s"
        if nnum < cnum < 100:
            if nnum % 10 == 1 and cnum != 80:
                return (f"{ctext} et {ntext}", cnum + nnum)
            return (f"{ctext}-{ntext}", cnum + nnum)
        if nnum > cnum:
            return (f"{ctext} {ntext}", cnum * nnum)
        return (f"{ctext} {ntext}", cnum + nnum)

    def candidate(self, tokens):
        total = current = 0
        prev = ""
        for i, tok in enumerate(tokens):
            if tok == "et":
                prev = tok
                continue
            if tok in ("vingt", "vingts") and prev == "quatre":
                current += 76  # the 4 of quatre-vingt is already in
            elif tok in ("cent", "cents"):
                current = max(current, 1) * 100
            elif tok == "mille":
                total += max(current, 1) * 1000
                current = 0
            elif tok in ("million", "millions"):
                total += max(current, 1) * _MILLION
                current = 0
            elif tok in self._small:
                current += self._small[tok]
            else:
                raise ParseError(f"unknown token {tok!r}", i, tok)
            prev = tok
        return total + current


class _Japanese(_Grammar):
    code = Language.JA
    zero = "零"
    one = "一"
    fragment_joiner = ""

    _units = {"一": 1, "二": 2, "三": 3, "四": 4, "五": 5,
              "六": 6, "七": 7, "八": 8, "九": 9}
    _smalls = {"十": 10, "百": 100, "千": 1000}
    _bigs = {"万": 10**4, "億": 10**8}

    cards = [
        (10**8, "億"), (10**4, "万"), (1000, "千"), (100, "百"), (10, "十"),
        (9, "九"), (8, "八"), (7, "七"), (6, "六"), (5, "五"), (4, "四"),
        (3, "三"), (2, "二"), (1, "一"),
    ]

    lexicon = _lex(
        ("零", "unit", 0),
        *[(s, "unit", w) for s, w in sorted(_units.items(), key=lambda kv: kv[1])],
        ("十", "ten", 10), ("百", "scale", 100), ("千", "scale", 1000),
        ("万", "scale", 10**4), ("億", "scale", 10**8),
    )

    def merge(self, cur, nxt):
        ctext, cnum = cur
        ntext, nnum = nxt
        if cnum == 1 and nnum <= 1000:  # 一 is dropped before 十/百/千
            return nxt
        if nnum > cnum:
            return (ctext + ntext, cnum * nnum)
        return (ctext + ntext, cnum + nnum)

    def tokenize(self, surface):
        return list(surface)

    def token_spans(self, surface):
        return [(i, i + 1) for i in range(len(surface))]

    def candidate(self, tokens):
        total = section = digit = 0
        for i, ch in enumerate(tokens):
            if ch == "零":
                continue
            if ch in self._units:
                digit = self._units[ch]
            elif ch in self._smalls:
                section += max(digit, 1) * self._smalls[ch]
                digit = 0
            elif ch in self._bigs:
                total += (section + digit) * self._bigs[ch]
                section = digit = 0
            else:
                raise ParseError(f"unknown numeral {ch!r}", i, ch)
        return total + section + digit


_GRAMMARS: dict[Language, _Grammar] = {
    Language.EN: _English(),
    Language.DA: _Danish(),
    Language.FR: _French(),
    Language.JA: _Japanese(),
}


def _grammar(lang: str | Language) -> _Grammar:
    return _GRAMMARS[get_language(lang)]


@lru_cache(maxsize=1 << 17)
def to_words(value: int, lang: str | Language) -> str:
    """Render an integer in [0, 100_000_000] to its canonical surface form."""
    g = _grammar(lang)
    if not 0 <= value <= MAX_VALUE:
        raise ValueError(f"value {value} out of range [0, {MAX_VALUE}]")
    return g.render(value)


def parse_words(surface: str, lang: str | Language) -> int:
    """Map a canonical surface form back to its integer value.

    Strict: succeeds iff ``to_words(v, lang) == surface`` for some v in
    range. A liberal accumulator proposes a candidate value; re-rendering
    the candidate enforces canonical spelling, connectors, and joiners.
    """
    g = _grammar(lang)
    tokens = g.tokenize(surface)
    if not tokens:
        raise ParseError("empty surface form", 0)
    value = g.candidate(tokens)  # raises on out-of-lexicon tokens
    if 0 <= value <= MAX_VALUE:
        canonical = to_words(value, lang)
        if canonical == surface:
            return value
        pos = _divergence(tokens, g.tokenize(canonical))
    else:
        pos = 0
    raise ParseError(
        f"{surface!r} is not a canonical {g.code.value} number word",
        pos, tokens[min(pos, len(tokens) - 1)],
    )


def _divergence(got: list[str], want: list[str]) -> int:
    for i, (a, b) in enumerate(zip(got, want)):
        if a != b:
            return i
    if len(got) != len(want):
        return min(len(got), len(want))
    return 0  # same tokens, different joiners


def is_grammatical(surface: str, lang: str | Language) -> bool:
    """True iff the surface is the canonical form of some value in range."""
    try:
        parse_words(surface, lang)
        return True
    except ParseError:
        return False


def tokenize(surface: str, lang: str | Language) -> list[str]:
    """Split on whitespace/hyphens (per numeral kanji for JA). Total."""
    return _grammar(lang).tokenize(surface)


def token_spans(surface: str, lang: str | Language) -> list[tuple[int, int]]:
    """Character spans of :func:`tokenize` tokens within ``surface``."""
    return _grammar(lang).token_spans(surface)


def number_word(value: int, lang: str | Language) -> NumberWord:
    language = get_language(lang)
    return NumberWord(language, to_words(value, language), value)


def lexicon(lang: str | Language) -> list[LexiconEntry]:
    return list(_grammar(lang).lexicon)


def lexicon_dump(lang: str | Language) -> str:
    """One token-role-weight triple per line, tab-separated."""
    return "\n".join(
        f"{e.surface}\t{e.role}\t{e.weight}" for e in _grammar(lang).lexicon
    )


def lexicon_tokens(lang: str | Language) -> frozenset[str]:
    """Single tokens (morphemes for DA) that canonical surfaces are built from."""
    return _grammar(lang).token_set()


def is_lexical(token: str, lang: str | Language) -> bool:
    """True iff the token is built entirely from lexicon pieces."""
    return bool(token) and _grammar(lang).is_lexical(token)


def fragment_joiner(lang: str | Language) -> str:
    return _grammar(lang).fragment_joiner
