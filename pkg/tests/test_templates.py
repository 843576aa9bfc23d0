import pytest

from numprobe.grammar import Language
from numprobe.templates import (
    TEMPLATES_PER_LANGUAGE,
    Template,
    TemplateError,
    extract_word,
    load_templates,
    render_in_template,
)

LANGS = [lang.value for lang in Language]


@pytest.mark.parametrize("lang", LANGS)
def test_eleven_templates_each_with_one_slot(lang):
    templates = load_templates(lang)
    assert len(templates) == TEMPLATES_PER_LANGUAGE
    assert [t.id for t in templates] == list(range(TEMPLATES_PER_LANGUAGE))
    for t in templates:
        assert t.pattern.count("{N}") == 1
        assert "\t" not in t.pattern


def test_render_reference_sentences():
    books = Template(0, Language.EN, "There are {N} books in the library")
    oranges = Template(1, Language.EN, "He could eat {N} oranges")
    assert render_in_template(books, "thirty-eight") == \
        "There are thirty-eight books in the library"
    assert render_in_template(books, "seven hundred and eighty-six") == \
        "There are seven hundred and eighty-six books in the library"
    assert render_in_template(oranges, "three hundred and two") == \
        "He could eat three hundred and two oranges"


def test_identity_template():
    t = Template(0, Language.EN, "{N}")
    assert render_in_template(t, "five hundred") == "five hundred"
    assert extract_word(t, "five hundred") == "five hundred"


def test_slot_count_enforced():
    with pytest.raises(TemplateError):
        Template(0, Language.EN, "no slot here")
    with pytest.raises(TemplateError):
        Template(0, Language.EN, "{N} and {N}")


@pytest.mark.parametrize("lang", LANGS)
def test_extract_inverts_render(lang):
    for t in load_templates(lang):
        for word in ("seven", "fifty-five", "三十"):
            assert extract_word(t, render_in_template(t, word)) == word


def test_extract_rejects_mismatch():
    t = Template(0, Language.EN, "He could eat {N} oranges")
    with pytest.raises(TemplateError):
        extract_word(t, "She could eat seven oranges")
    with pytest.raises(TemplateError):
        extract_word(t, "He could eat oranges")
