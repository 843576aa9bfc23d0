"""Command-line interface.

Verbs: gen-data, check, synth-ungrammatical, extract-manifest, train-probe,
eval-probe, report. Every flag can also be set through an environment
variable named NUMPROBE_<FLAG> (dashes as underscores, upper case).

Exit codes: 0 success, 1 usage, 2 data/format error, 3 capacity/synthesis.
Failures print exactly one line to stderr: ``error[<category>]: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from numprobe.datasets import (
    CapacityError,
    FormatError,
    SplitSpec,
    Task,
    Variant,
    build_dataset,
    read_split,
    write_dataset,
)
from numprobe.embed_io import (
    BinaryFormatError,
    EmbeddingSet,
    read_embeddings,
)
from numprobe.grammar import (
    MAX_VALUE,
    Language,
    ParseError,
    lexicon_dump,
    parse_words,
    to_words,
)
from numprobe.probe import ProbeConfig, ProbeModel, evaluate, train_probe
from numprobe.synthesis import SynthConfig, SynthesisError, synth_ungrammatical
from numprobe.templates import TemplateError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_CAPACITY = 3

LANG_CHOICES = [lang.value for lang in Language]
TASK_ALIASES = {"1": Task.GRAMMATICALITY, "grammaticality": Task.GRAMMATICALITY,
                "2": Task.COMPARISON, "comparison": Task.COMPARISON}

ABSENT = "-"


def _env(flag: str) -> str | None:
    return os.environ.get("NUMPROBE_" + flag.replace("-", "_").upper())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _fail("usage", message, EXIT_USAGE)


def _fail(category: str, message: str, code: int):
    flat = " ".join(str(message).split())
    print(f"error[{category}]: {flat}", file=sys.stderr)
    raise SystemExit(code)


def _add(parser: argparse.ArgumentParser, flag: str, *, required=False, **kw):
    """add_argument with an environment-variable default."""
    env_value = _env(flag)
    if env_value is not None:
        if kw.get("action") == "store_true":
            kw["default"] = env_value.lower() not in ("", "0", "false", "no")
        elif kw.get("nargs") in ("+", "*"):
            kw["default"] = env_value.split()
        else:
            kw["default"] = env_value
        required = False
    parser.add_argument(f"--{flag}", required=required, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="numprobe",
                     description="number-word grammars, datasets, and probes")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen-data", prog="numprobe gen-data",
                       help="write the three split files for one bundle")
    _add(p, "lang", required=True, choices=LANG_CHOICES)
    _add(p, "task", required=True, choices=sorted(TASK_ALIASES))
    _add(p, "variant", required=True,
         choices=[v.value for v in Variant])
    _add(p, "seed", type=int, default=1)
    _add(p, "out-dir", required=True)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("check", prog="numprobe check",
                       help="render a value or judge a surface form")
    _add(p, "lang", required=True, choices=LANG_CHOICES)
    _add(p, "dump-lexicon", action="store_true", default=False)
    p.add_argument("query", nargs="?", default=None,
                   help="integer to render or text to judge")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synth-ungrammatical", prog="numprobe synth-ungrammatical",
                       help="print synthesized ungrammatical number words")
    _add(p, "lang", required=True, choices=LANG_CHOICES)
    _add(p, "count", type=int, default=1)
    _add(p, "seed", type=int, default=0)
    _add(p, "range-lo", type=int, default=0)
    _add(p, "range-hi", type=int, default=999)
    _add(p, "max-surface-length", type=int, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract-manifest", prog="numprobe extract-manifest",
                       help="emit id/x0/x1/y rows for embedding extraction")
    _add(p, "data", required=True, nargs="+",
         help="dataset split files (TSV)")
    _add(p, "out", default=None)
    p.set_defaults(func=cmd_extract_manifest)

    p = sub.add_parser("train-probe", prog="numprobe train-probe",
                       help="train the MLP probe on an embedding file")
    _add(p, "embeddings", required=True)
    _add(p, "val-embeddings", default=None,
         help="held-out embeddings (default: last 20%% of --embeddings)")
    _add(p, "config", default=None, help="JSON file of probe settings")
    _add(p, "model-out", default=None)
    _add(p, "metrics-out", default=None)
    p.set_defaults(func=cmd_train_probe)

    p = sub.add_parser("eval-probe", prog="numprobe eval-probe",
                       help="accuracy of a saved probe on an embedding file")
    _add(p, "embeddings", required=True)
    _add(p, "model-in", required=True)
    _add(p, "metrics-out", default=None)
    p.set_defaults(func=cmd_eval_probe)

    p = sub.add_parser("report", prog="numprobe report",
                       help="aggregate metric JSON files into one TSV")
    _add(p, "metrics-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def cmd_gen_data(args) -> int:
    task = TASK_ALIASES[args.task]
    bundle = build_dataset(task, args.lang, Variant(args.variant),
                           SplitSpec(seed=args.seed))
    paths = write_dataset(bundle, args.out_dir)
    for path, (split, rows) in zip(paths, bundle.splits().items()):
        ones = sum(ex.y for ex in rows)
        print(f"{split}: {len(rows)} rows, labels {len(rows) - ones}/{ones} "
              f"-> {path}")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.dump_lexicon:
        print(lexicon_dump(args.lang))
        return EXIT_OK
    if args.query is None:
        _fail("usage", "check needs a word, a value, or --dump-lexicon",
              EXIT_USAGE)
    query = args.query
    stripped = query.lstrip("+-")
    if stripped.isdigit():
        value = int(query)
        if 0 <= value <= MAX_VALUE:
            print(to_words(value, args.lang))
        else:
            print(f"out of range [0, {MAX_VALUE}]")
        return EXIT_OK
    try:
        print(f"grammatical {parse_words(query, args.lang)}")
    except ParseError:
        print("ungrammatical")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.count < 1:
        _fail("usage", "--count must be >= 1", EXIT_USAGE)
    cfg = SynthConfig(language=args.lang,
                      value_range=(args.range_lo, args.range_hi),
                      max_surface_length=args.max_surface_length,
                      seed=args.seed)
    rng = np.random.default_rng(args.seed)
    for _ in range(args.count):
        print(synth_ungrammatical(cfg, rng))
    return EXIT_OK


def cmd_extract_manifest(args) -> int:
    lines = []
    for path in args.data:
        for ex in read_split(path):
            x1 = ex.x1 if ex.x1 is not None else ABSENT
            lines.append(f"{ex.id}\t{ex.x0}\t{x1}\t{ex.y}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(lines)} rows -> {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_probe_settings(path: str | None) -> dict:
    if not path:
        return {}
    try:
        settings = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise BinaryFormatError(f"bad probe config {path}: {err}") from None
    casts = {"hidden_dim": int, "epochs": int, "learning_rate": float,
             "batch_size": int, "seed": int}
    unknown = set(settings) - set(casts)
    if unknown:
        raise BinaryFormatError(
            f"unknown probe config keys {sorted(unknown)}; "
            f"allowed: {sorted(casts)}")
    try:
        return {key: casts[key](value) for key, value in settings.items()}
    except (TypeError, ValueError) as err:
        raise BinaryFormatError(f"bad probe config value: {err}") from None


def _split_for_validation(data: EmbeddingSet) -> tuple[EmbeddingSet,
                                                       EmbeddingSet]:
    n_val = max(1, data.count // 5)
    if data.count < 2:
        raise BinaryFormatError("need at least 2 records to hold out "
                                "validation data")
    cut = data.count - n_val
    make = lambda sl: EmbeddingSet(data.ids[sl], data.labels[sl],
                                   data.vectors[sl], data.source_model,
                                   data.dataset)
    return make(slice(None, cut)), make(slice(cut, None))


def _dataset_facets(dataset: str) -> dict:
    parts = dataset.split("_")
    if len(parts) == 4 and parts[0] in LANG_CHOICES:
        return {"lang": parts[0], "task": parts[1], "variant": parts[2]}
    return {"lang": ABSENT, "task": ABSENT, "variant": ABSENT}


def _emit_metrics(metrics: dict, out_path: str | None):
    line = json.dumps(metrics, sort_keys=True)
    print(line)
    if out_path:
        Path(out_path).write_text(line + "\n", encoding="utf-8")


def cmd_train_probe(args) -> int:
    train_set = read_embeddings(args.embeddings)
    if args.val_embeddings:
        val_set = read_embeddings(args.val_embeddings)
    else:
        train_set, val_set = _split_for_validation(train_set)
    if val_set.dim != train_set.dim:
        raise BinaryFormatError(
            f"dimension mismatch: train {train_set.dim}, val {val_set.dim}")
    settings = _load_probe_settings(args.config)
    cfg = ProbeConfig(input_dim=train_set.dim, **settings)
    result = train_probe(train_set, val_set, cfg)
    metrics = {
        "accuracy": result.best_val_accuracy,
        "epochs": cfg.epochs,
        "best_epoch": result.best_epoch,
        "seed": cfg.seed,
        "model": train_set.source_model or ABSENT,
        **_dataset_facets(train_set.dataset),
    }
    if args.model_out:
        result.model.save(args.model_out, meta=metrics)
        print(f"saved probe -> {args.model_out}", file=sys.stderr)
    _emit_metrics(metrics, args.metrics_out)
    return EXIT_OK


def cmd_eval_probe(args) -> int:
    data = read_embeddings(args.embeddings)
    model, meta = ProbeModel.load(args.model_in)
    if model.input_dim != data.dim:
        raise BinaryFormatError(
            f"probe expects dimension {model.input_dim}, "
            f"embeddings have {data.dim}")
    metrics = {
        "accuracy": evaluate(model, data),
        "epochs": meta.get("epochs", ABSENT),
        "seed": meta.get("seed", ABSENT),
        "model": data.source_model or ABSENT,
        **_dataset_facets(data.dataset),
    }
    _emit_metrics(metrics, args.metrics_out)
    return EXIT_OK


REPORT_COLUMNS = ("lang", "model", "task", "variant",
                  "accuracy", "epochs", "seed")


def cmd_report(args) -> int:
    directory = Path(args.metrics_dir)
    if not directory.is_dir():
        raise FormatError(f"not a directory: {directory}")
    cells: dict[tuple, tuple[float, dict]] = {}
    for path in sorted(directory.glob("*.json")):
        try:
            metrics = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(metrics, dict):
                raise ValueError("metric file must hold a JSON object")
        except (ValueError, OSError) as err:
            raise FormatError(f"bad metrics file {path}: {err}") from None
        key = tuple(str(metrics.get(c, ABSENT))
                    for c in ("lang", "model", "task", "variant"))
        mtime = path.stat().st_mtime
        if key in cells:
            keep = "newer" if mtime >= cells[key][0] else "older"
            print(f"warning: duplicate metrics for {'/'.join(key)}; "
                  f"keeping the {keep} file", file=sys.stderr)
            if mtime < cells[key][0]:
                continue
        cells[key] = (mtime, metrics)
    print("\t".join(REPORT_COLUMNS))
    for key in sorted(cells):
        _, metrics = cells[key]
        print("\t".join(str(metrics.get(c, ABSENT)) for c in REPORT_COLUMNS))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, BinaryFormatError, TemplateError, OSError) as err:
        _fail("format", str(err), EXIT_FORMAT)
    except (CapacityError, SynthesisError) as err:
        _fail("capacity", str(err), EXIT_CAPACITY)
    except ValueError as err:
        _fail("usage", str(err), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
