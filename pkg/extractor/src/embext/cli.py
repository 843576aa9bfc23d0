"""Command-line front end: ``embext extract`` and ``embext fine-tune``.

Exit codes: 0 success, 1 usage, 2 data/resource error. Failures print one
line to stderr: ``error[<category>]: <message>``.
"""

from __future__ import annotations

import argparse
import sys

from embext.config import MODELS, POOLINGS, DataError, ExtractorConfig, ResourceError
from embext.encoders import extract
from embext.finetune import LEARNING_RATE, fine_tune

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"error[usage]: {message}\n")


def _add_config_flags(parser):
    parser.add_argument("--model", default=MODELS[0], choices=MODELS)
    parser.add_argument("--pooling", default="first-token",
                        choices=POOLINGS)
    parser.add_argument("--max-seq-len", type=int, default=64)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--weights-dir", default="",
                        help="load weights from this directory, not the hub")


def _config(args):
    return ExtractorConfig(model=args.model, pooling=args.pooling,
                           max_seq_len=args.max_seq_len,
                           batch_size=args.batch_size, device=args.device,
                           weights_dir=args.weights_dir)


def cmd_extract(args):
    report = extract(args.data, args.out, _config(args))
    line = f"wrote {report.count} vectors (dim {report.dim}) -> {report.out_path}"
    if report.skipped_ids:
        line += (f" ({len(report.skipped_ids)} rows skipped: "
                 + ", ".join(str(i) for i in report.skipped_ids) + ")")
    print(line)
    return EXIT_OK


def cmd_fine_tune(args):
    trace = fine_tune(args.data, _config(args), args.epochs,
                      val_path=args.val, learning_rate=args.learning_rate,
                      seed=args.seed)
    for epoch, accuracy in enumerate(trace):
        tag = "untrained" if epoch == 0 else f"epoch {epoch}"
        print(f"{tag}: val accuracy {accuracy:.4f}")
    print(f"best: {max(trace):.4f}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="embext",
                     description="embed number-word datasets with "
                                 "pretrained encoders")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("extract", prog="embext extract",
                       help="write frozen embeddings for one dataset split")
    p.add_argument("--data", required=True, help="dataset TSV file")
    p.add_argument("--out", required=True, help="embedding file to write")
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("fine-tune", prog="embext fine-tune",
                       help="train the full model on one dataset split")
    p.add_argument("--data", required=True, help="training TSV file")
    p.add_argument("--val", default=None,
                   help="validation TSV file (default: last fifth of --data)")
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--learning-rate", type=float, default=LEARNING_RATE)
    p.add_argument("--seed", type=int, default=0)
    _add_config_flags(p)
    p.set_defaults(func=cmd_fine_tune)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except DataError as exc:
        print(f"error[data]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ResourceError, OSError) as exc:
        print(f"error[resource]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
