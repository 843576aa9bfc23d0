from pathlib import Path

import pytest

from numprobe.datasets import (
    CapacityError,
    DatasetBundle,
    FormatError,
    LabeledExample,
    SplitSpec,
    Task,
    Variant,
    build_dataset,
    build_task1,
    build_task2,
    dataset_filename,
    read_dataset,
    read_split,
    write_dataset,
)
from numprobe.grammar import is_grammatical, parse_words
from numprobe.templates import extract_word, load_templates

SMALL = SplitSpec(train_size=600, val_size=200, test_size=200, seed=7)


def bundle_labels(bundle):
    return [ex.y for ex in bundle.all_examples()]


def test_split_spec_validation():
    SplitSpec()  # defaults are the reference sizes
    with pytest.raises(ValueError):
        SplitSpec(train_size=100, val_size=100, test_size=100)  # not 60-20-20
    with pytest.raises(ValueError):
        SplitSpec(train_size=15, val_size=5, test_size=5)  # odd splits
    with pytest.raises(ValueError):
        SplitSpec(value_range=(10, 5))
    with pytest.raises(ValueError):
        SplitSpec(value_range=(0, 0))  # no distinct pair exists


def test_task1_shape_and_balance():
    bundle = build_task1("en", Variant.BARE, SMALL)
    assert [len(s) for s in bundle.splits().values()] == [600, 200, 200]
    for rows in bundle.splits().values():
        assert sum(ex.y for ex in rows) == len(rows) // 2
    ids = [ex.id for ex in bundle.all_examples()]
    assert ids == list(range(1000))


def test_task1_labels_match_grammaticality():
    bundle = build_task1("da", Variant.BARE, SMALL)
    for ex in bundle.all_examples():
        assert is_grammatical(ex.x0, "da") == (ex.y == 0)
        assert ex.x1 is None
        assert ex.template_id is None


def test_task1_ungrammatical_inputs_unique():
    bundle = build_task1("en", Variant.BARE, SMALL)
    bad = [ex.x0 for ex in bundle.all_examples() if ex.y == 1]
    assert len(bad) == len(set(bad))


def test_task1_grammatical_words_parse_to_source():
    bundle = build_task1("fr", Variant.BARE, SMALL)
    for ex in bundle.all_examples():
        if ex.y == 0:
            assert parse_words(ex.x0, "fr") == ex.source_values[0]


def test_task1_sentence_variant_wraps_templates():
    bundle = build_task1("ja", Variant.SENTENCE, SMALL)
    templates = load_templates("ja")
    seen_templates = set()
    for ex in bundle.all_examples():
        assert ex.template_id in range(11)
        seen_templates.add(ex.template_id)
        word = extract_word(templates[ex.template_id], ex.x0)
        assert is_grammatical(word, "ja") == (ex.y == 0)
    assert len(seen_templates) == 11  # uniform sampling hits every template


def test_task1_sentence_templates_carry_no_label_signal():
    bundle = build_task1("en", Variant.SENTENCE, SMALL)
    for tid in range(11):
        rows = [ex for ex in bundle.all_examples() if ex.template_id == tid]
        share = sum(ex.y for ex in rows) / len(rows)
        assert 0.3 < share < 0.7


def test_task1_deterministic():
    a = build_task1("en", Variant.BARE, SMALL)
    b = build_task1("en", Variant.BARE, SMALL)
    assert a == b
    c = build_task1("en", Variant.BARE,
                    SplitSpec(600, 200, 200, seed=8))
    assert a != c


def test_task2_shape_balance_and_distinct_pairs():
    bundle = build_task2("en", Variant.BARE, SMALL)
    assert [len(s) for s in bundle.splits().values()] == [600, 200, 200]
    pairs = set()
    for rows in bundle.splits().values():
        assert sum(ex.y for ex in rows) == len(rows) // 2
        for ex in rows:
            pairs.add(ex.source_values)
    assert len(pairs) == 1000


def test_task2_labels_verified_by_reparse():
    bundle = build_task2("ja", Variant.BARE, SMALL)
    for ex in bundle.all_examples():
        a, b = parse_words(ex.x0, "ja"), parse_words(ex.x1, "ja")
        assert a != b
        assert ex.y == (0 if a > b else 1)
        assert (a, b) == ex.source_values


def test_task2_sentence_shares_template_within_row():
    bundle = build_task2("fr", Variant.SENTENCE, SMALL)
    templates = load_templates("fr")
    for ex in bundle.all_examples():
        t = templates[ex.template_id]
        a = parse_words(extract_word(t, ex.x0), "fr")
        b = parse_words(extract_word(t, ex.x1), "fr")
        assert ex.y == (0 if a > b else 1)


def test_task2_deterministic():
    assert build_task2("da", Variant.SENTENCE, SMALL) == \
        build_task2("da", Variant.SENTENCE, SMALL)


def test_build_dataset_dispatches():
    assert build_dataset("grammaticality", "en", "bare", SMALL).task \
        is Task.GRAMMATICALITY
    assert build_dataset(Task.COMPARISON, "en", Variant.BARE, SMALL).task \
        is Task.COMPARISON


def test_task2_capacity_error():
    tiny = SplitSpec(6, 2, 2, value_range=(0, 2))
    with pytest.raises(CapacityError):
        build_task2("en", Variant.BARE, tiny)


def test_task1_capacity_error_from_synthesis():
    # two single-token words can only concatenate past the length bound
    tiny = SplitSpec(6, 2, 2, value_range=(0, 1))
    with pytest.raises(CapacityError):
        build_task1("en", Variant.BARE, tiny)


def test_write_read_round_trip(tmp_path):
    for task, variant in ((Task.GRAMMATICALITY, Variant.SENTENCE),
                          (Task.COMPARISON, Variant.BARE)):
        bundle = build_dataset(task, "en", variant, SMALL)
        write_dataset(bundle, tmp_path)
        again = read_dataset(tmp_path, "en", task, variant)
        assert again == bundle


def test_write_is_byte_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    write_dataset(build_task2("ja", Variant.SENTENCE, SMALL), out1)
    write_dataset(build_task2("ja", Variant.SENTENCE, SMALL), out2)
    for split in ("train", "val", "test"):
        name = dataset_filename(
            build_task2("ja", Variant.SENTENCE, SMALL).language,
            Task.COMPARISON, Variant.SENTENCE, split)
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_filenames_follow_convention(tmp_path):
    bundle = build_task1("da", Variant.BARE, SMALL)
    paths = write_dataset(bundle, tmp_path)
    assert [p.name for p in paths] == [
        "da_grammaticality_bare_train.tsv",
        "da_grammaticality_bare_val.tsv",
        "da_grammaticality_bare_test.tsv",
    ]


def write_lines(path: Path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


GOOD = "0\tgrammaticality\tbare\ten\tseven\t-\t0\t-"


def test_read_split_rejects_bad_records(tmp_path):
    cases = {
        "seven fields": "0\tgrammaticality\tbare\ten\tseven\t-\t0",
        "bad label": GOOD.replace("\t0\t-", "\t2\t-"),
        "bad task": GOOD.replace("grammaticality", "judging"),
        "bad lang": GOOD.replace("\ten\t", "\tde\t"),
        "bad id": GOOD.replace("0\t", "x\t", 1),
        "pair in task1": GOOD.replace("\t-\t0", "\teight\t0"),
        "template on bare": GOOD.replace("\t0\t-", "\t0\t3"),
    }
    for name, line in cases.items():
        path = tmp_path / "en_grammaticality_bare_train.tsv"
        write_lines(path, [line])
        with pytest.raises(FormatError):
            read_split(path), name


def test_read_split_reports_line_number(tmp_path):
    path = tmp_path / "x.tsv"
    write_lines(path, [GOOD, GOOD.replace("\t0\t-", "\t5\t-")])
    with pytest.raises(FormatError) as err:
        read_split(path)
    assert err.value.line == 2


def test_read_split_rejects_mixed_languages(tmp_path):
    path = tmp_path / "x.tsv"
    write_lines(path, [GOOD, GOOD.replace("\ten\t", "\tfr\t")])
    with pytest.raises(FormatError):
        read_split(path)


def test_read_dataset_missing_split(tmp_path):
    with pytest.raises(FormatError):
        read_dataset(tmp_path, "en", Task.GRAMMATICALITY, Variant.BARE)


def test_source_values_do_not_affect_equality():
    a = LabeledExample(0, "seven", None, 0, None, (7,))
    b = LabeledExample(0, "seven", None, 0, None, ())
    assert a == b
