"""Sentence templates with a single number slot.

Eleven templates per language, one per line in an editable data file, each
containing exactly one ``{N}`` placeholder. Replacing a template file with
verified translations requires no code change.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from numprobe.grammar import Language, get_language

SLOT = "{N}"
TEMPLATES_PER_LANGUAGE = 11


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Template:
    id: int
    language: Language
    pattern: str

    def __post_init__(self):
        if self.pattern.count(SLOT) != 1:
            raise TemplateError(
                f"template {self.id} ({self.language}) must contain exactly "
                f"one {SLOT} slot: {self.pattern!r}")


def render_in_template(template: Template, word: str) -> str:
    """Substitute the number word into the template's slot."""
    return template.pattern.replace(SLOT, word)


def extract_word(template: Template, text: str) -> str:
    """Invert :func:`render_in_template`."""
    prefix, _, suffix = template.pattern.partition(SLOT)
    if (len(text) < len(prefix) + len(suffix) + 1
            or not text.startswith(prefix)
            or not text.endswith(suffix)):
        raise TemplateError(
            f"text does not fit template {template.id}: {text!r}")
    return text[len(prefix):len(text) - len(suffix)]


@lru_cache(maxsize=None)
def load_templates(lang: str | Language) -> tuple[Template, ...]:
    language = get_language(lang)
    path = resources.files("numprobe").joinpath(
        f"data/templates_{language.value}.txt")
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()
             if ln.strip()]
    if len(lines) != TEMPLATES_PER_LANGUAGE:
        raise TemplateError(
            f"expected {TEMPLATES_PER_LANGUAGE} templates for "
            f"{language.value}, found {len(lines)}")
    return tuple(Template(i, language, p) for i, p in enumerate(lines))
