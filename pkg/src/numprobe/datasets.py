"""Task datasets: grammaticality judgment and value comparison.

Both tasks come in a bare variant (the number word alone) and a sentence
variant (the word substituted into one of eleven templates). Builders are
deterministic functions of a seeded spec; serialized bundles are
byte-identical across runs.

Label conventions:
  grammaticality: y = 1 iff the input is not a canonical number word
  comparison:     y = 0 iff value(x0) > value(x1), y = 1 iff less
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from numprobe.grammar import MAX_VALUE, Language, get_language, to_words
from numprobe.synthesis import SynthConfig, SynthesisError, synth_with_sources
from numprobe.templates import Template, load_templates, render_in_template

# consecutive rejected candidates before the input space is declared exhausted
DEDUP_PATIENCE = 20_000

ABSENT = "-"


class Task(str, Enum):
    GRAMMATICALITY = "grammaticality"
    COMPARISON = "comparison"


class Variant(str, Enum):
    BARE = "bare"
    SENTENCE = "sentence"


class CapacityError(RuntimeError):
    """The value range cannot supply enough distinct inputs."""


class FormatError(ValueError):
    """A serialized dataset line violates the record format."""

    def __init__(self, message: str, path: str = "", line: int = 0):
        super().__init__(
            f"{path}:{line}: {message}" if path else message)
        self.path = path
        self.line = line


@dataclass(frozen=True)
class SplitSpec:
    train_size: int = 30_000
    val_size: int = 10_000
    test_size: int = 10_000
    seed: int = 1
    value_range: tuple[int, int] = (0, 999)
    shuffle: bool = True

    def __post_init__(self):
        sizes = (self.train_size, self.val_size, self.test_size)
        if any(n <= 0 for n in sizes):
            raise ValueError(f"split sizes must be positive: {sizes}")
        if any(n % 2 for n in sizes):
            raise ValueError(
                f"split sizes must be even for exact label balance: {sizes}")
        if not (self.train_size == 3 * self.val_size
                and self.val_size == self.test_size):
            raise ValueError(f"split sizes must be in 60-20-20 ratio: {sizes}")
        lo, hi = self.value_range
        if not (0 <= lo < hi <= MAX_VALUE):
            raise ValueError(f"bad value range [{lo}, {hi}]")

    @property
    def total(self) -> int:
        return self.train_size + self.val_size + self.test_size

    def split_sizes(self) -> tuple[int, int, int]:
        return (self.train_size, self.val_size, self.test_size)


@dataclass(frozen=True)
class LabeledExample:
    id: int
    x0: str
    x1: str | None
    y: int
    template_id: int | None
    # generation-time provenance; not serialized, excluded from equality
    source_values: tuple[int, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class DatasetBundle:
    task: Task
    variant: Variant
    language: Language
    train: tuple[LabeledExample, ...]
    val: tuple[LabeledExample, ...]
    test: tuple[LabeledExample, ...]

    def splits(self) -> dict[str, tuple[LabeledExample, ...]]:
        return {"train": self.train, "val": self.val, "test": self.test}

    def all_examples(self) -> tuple[LabeledExample, ...]:
        return self.train + self.val + self.test


def _pick_template(rng: np.random.Generator,
                   templates: tuple[Template, ...]) -> Template:
    return templates[int(rng.integers(len(templates)))]


def _assemble(task: Task, variant: Variant, language: Language,
              spec: SplitSpec, rng: np.random.Generator,
              pools: tuple[list[LabeledExample], list[LabeledExample]],
              ) -> DatasetBundle:
    """Stratified 60-20-20 assembly with exact per-split label balance.

    Each label pool is cut 60-20-20 in generation order, the label halves of
    every split are concatenated, each split is permuted, and ids are
    assigned sequentially train-then-val-then-test.
    """
    splits: list[list[LabeledExample]] = [[], [], []]
    for pool in pools:
        bounds = np.cumsum((0,) + spec.split_sizes()) // 2
        for k in range(3):
            splits[k].extend(pool[bounds[k]:bounds[k + 1]])
    next_id = 0
    final: list[tuple[LabeledExample, ...]] = []
    for rows in splits:
        order = rng.permutation(len(rows)) if spec.shuffle else range(len(rows))
        renumbered = []
        for idx in order:
            ex = rows[int(idx)]
            renumbered.append(LabeledExample(
                next_id, ex.x0, ex.x1, ex.y, ex.template_id,
                ex.source_values))
            next_id += 1
        final.append(tuple(renumbered))
    return DatasetBundle(task, variant, language, *final)


def build_task1(lang: str | Language, variant: Variant | str,
                spec: SplitSpec = SplitSpec()) -> DatasetBundle:
    """Grammaticality dataset: half canonical words, half synthesized junk.

    Grammatical inputs are uniform draws from the value range (repeats are
    unavoidable: the range admits at most a few thousand distinct texts).
    Ungrammatical inputs are globally unique as full texts.
    """
    language = get_language(lang)
    variant = Variant(variant)
    rng = np.random.default_rng(spec.seed)
    templates = load_templates(language) if variant is Variant.SENTENCE else None
    half = spec.total // 2
    lo, hi = spec.value_range

    grammatical: list[LabeledExample] = []
    for _ in range(half):
        value = int(rng.integers(lo, hi + 1))
        word = to_words(value, language)
        x0, tid = word, None
        if templates:
            t = _pick_template(rng, templates)
            x0, tid = render_in_template(t, word), t.id
        grammatical.append(LabeledExample(-1, x0, None, 0, tid, (value,)))

    synth_cfg = SynthConfig(language=language, value_range=spec.value_range,
                            seed=spec.seed)
    ungrammatical: list[LabeledExample] = []
    seen: set[str] = set()
    misses = 0
    while len(ungrammatical) < half:
        try:
            word, v0, v1 = synth_with_sources(synth_cfg, rng)
        except SynthesisError as err:
            raise CapacityError(str(err)) from err
        x0, tid = word, None
        if templates:
            t = _pick_template(rng, templates)
            x0, tid = render_in_template(t, word), t.id
        if x0 in seen:
            misses += 1
            if misses >= DEDUP_PATIENCE:
                raise CapacityError(
                    f"could not find {half} distinct ungrammatical inputs in "
                    f"range {spec.value_range}")
            continue
        misses = 0
        seen.add(x0)
        ungrammatical.append(LabeledExample(-1, x0, None, 1, tid, (v0, v1)))

    return _assemble(Task.GRAMMATICALITY, variant, language, spec, rng,
                     (grammatical, ungrammatical))


def build_task2(lang: str | Language, variant: Variant | str,
                spec: SplitSpec = SplitSpec()) -> DatasetBundle:
    """Comparison dataset: ordered pairs of distinct values, no pair reused."""
    language = get_language(lang)
    variant = Variant(variant)
    rng = np.random.default_rng(spec.seed)
    templates = load_templates(language) if variant is Variant.SENTENCE else None
    half = spec.total // 2
    lo, hi = spec.value_range
    n_values = hi - lo + 1
    per_direction = n_values * (n_values - 1) // 2
    if per_direction < half:
        raise CapacityError(
            f"range {spec.value_range} admits only {per_direction} ordered "
            f"pairs per label, need {half}")

    pools: tuple[list[LabeledExample], list[LabeledExample]] = ([], [])
    seen: set[tuple[int, int]] = set()
    misses = 0
    while len(pools[0]) < half or len(pools[1]) < half:
        a = int(rng.integers(lo, hi + 1))
        b = int(rng.integers(lo, hi + 1))
        y = 0 if a > b else 1
        if a == b or (a, b) in seen or len(pools[y]) >= half:
            misses += 1
            if misses >= DEDUP_PATIENCE:
                raise CapacityError(
                    f"could not find {half} distinct pairs per label in "
                    f"range {spec.value_range}")
            continue
        misses = 0
        seen.add((a, b))
        x0, x1 = to_words(a, language), to_words(b, language)
        tid = None
        if templates:
            t = _pick_template(rng, templates)  # both sides share it
            x0, x1, tid = (render_in_template(t, x0),
                           render_in_template(t, x1), t.id)
        pools[y].append(LabeledExample(-1, x0, x1, y, tid, (a, b)))

    return _assemble(Task.COMPARISON, variant, language, spec, rng, pools)


def build_dataset(task: Task | str, lang: str | Language,
                  variant: Variant | str,
                  spec: SplitSpec = SplitSpec()) -> DatasetBundle:
    task = Task(task)
    builder = build_task1 if task is Task.GRAMMATICALITY else build_task2
    return builder(lang, variant, spec)


def dataset_filename(language: Language, task: Task, variant: Variant,
                     split: str) -> str:
    return f"{language.value}_{task.value}_{variant.value}_{split}.tsv"


def _format_row(ex: LabeledExample, task: Task, variant: Variant,
                language: Language) -> str:
    fields = [str(ex.id), task.value, variant.value, language.value,
              ex.x0, ex.x1 if ex.x1 is not None else ABSENT,
              str(ex.y),
              str(ex.template_id) if ex.template_id is not None else ABSENT]
    for value in fields:
        if "\t" in value or "\n" in value:
            raise FormatError(f"field contains tab or newline: {value!r}")
    return "\t".join(fields)


def write_dataset(bundle: DatasetBundle, directory: str | Path) -> list[Path]:
    """One TSV per split; byte-deterministic for a given bundle."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for split, rows in bundle.splits().items():
        path = directory / dataset_filename(
            bundle.language, bundle.task, bundle.variant, split)
        lines = [_format_row(ex, bundle.task, bundle.variant, bundle.language)
                 for ex in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8",
                        newline="\n")
        paths.append(path)
    return paths


def _parse_row(line: str, path: str, lineno: int) -> tuple[LabeledExample, Task,
                                                           Variant, Language]:
    parts = line.split("\t")
    if len(parts) != 8:
        raise FormatError(f"expected 8 fields, got {len(parts)}", path, lineno)
    raw_id, task_s, variant_s, lang_s, x0, x1, y_s, tid_s = parts
    try:
        task = Task(task_s)
        variant = Variant(variant_s)
        language = get_language(lang_s)
    except ValueError as err:
        raise FormatError(str(err), path, lineno) from None
    if not raw_id.isdigit():
        raise FormatError(f"bad id {raw_id!r}", path, lineno)
    if y_s not in ("0", "1"):
        raise FormatError(f"label must be 0 or 1, got {y_s!r}", path, lineno)
    if not x0:
        raise FormatError("empty input text", path, lineno)
    if task is Task.COMPARISON and x1 == ABSENT:
        raise FormatError("comparison row missing second text", path, lineno)
    if task is Task.GRAMMATICALITY and x1 != ABSENT:
        raise FormatError("grammaticality row has second text", path, lineno)
    if tid_s == ABSENT:
        template_id = None
        if variant is Variant.SENTENCE:
            raise FormatError("sentence row missing template id", path, lineno)
    elif tid_s.isdigit():
        template_id = int(tid_s)
        if variant is Variant.BARE:
            raise FormatError("bare row has template id", path, lineno)
    else:
        raise FormatError(f"bad template id {tid_s!r}", path, lineno)
    example = LabeledExample(int(raw_id), x0, None if x1 == ABSENT else x1,
                             int(y_s), template_id)
    return example, task, variant, language


def read_split(path: str | Path,
               expected: tuple[Task, Variant, Language] | None = None,
               ) -> list[LabeledExample]:
    """Parse one split file, validating every record."""
    path = Path(path)
    rows = []
    signature = expected
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                raise FormatError("blank line", str(path), lineno)
            example, task, variant, language = _parse_row(
                line, str(path), lineno)
            if signature is None:
                signature = (task, variant, language)
            elif signature != (task, variant, language):
                raise FormatError("task/variant/lang does not match "
                                  "the rest of the dataset",
                                  str(path), lineno)
            rows.append(example)
    if not rows:
        raise FormatError("empty dataset file", str(path), 0)
    return rows


def read_dataset(directory: str | Path, lang: str | Language,
                 task: Task | str, variant: Variant | str) -> DatasetBundle:
    directory = Path(directory)
    language, task, variant = get_language(lang), Task(task), Variant(variant)
    splits = []
    for split in ("train", "val", "test"):
        path = directory / dataset_filename(language, task, variant, split)
        if not path.exists():
            raise FormatError(f"missing split file {path.name}",
                              str(directory), 0)
        splits.append(tuple(read_split(path, (task, variant, language))))
    return DatasetBundle(task, variant, language, *splits)
