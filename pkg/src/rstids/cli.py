"""``rstids`` command line.

Exit codes: 0 success, 1 usage error, 2 data error, 3 partial arm failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from . import discretize, entropy_rank, eval_metrics, pipeline, rough_set, svm_core
from .errors import DataError, RstIdsError
from .kdd_ingest import SymbolMaps, load_dataset, sample_lines, to_arrays
from .masks import diff_report

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _maps(args) -> SymbolMaps:
    return SymbolMaps.from_file(args.maps) if args.maps else SymbolMaps.default()


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise DataError(f"file not found: {p}")
    return p


def cmd_ingest(args) -> int:
    _, report = load_dataset(_existing(args.path), _maps(args), strict=args.strict)
    sys.stdout.write(report.table())
    for err in report.errors[: args.show_errors]:
        print(f"skipped {err}")
    return EXIT_OK


def cmd_sample(args) -> int:
    ratios = pipeline.parse_ratios(args.ratios)
    lines = sample_lines(_existing(args.path), ratios, args.total, args.seed, _maps(args), args.strict)
    text = "".join(ln if ln.endswith("\n") else ln + "\n" for ln in lines)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    mask = pipeline.reduce_file(_existing(args.path), args.bins, args.seed, _maps(args), args.strict)
    ref = rough_set.reference_mask()
    print(f"reduct ({len(mask)} features): {mask.to_csv()}")
    sys.stdout.write(diff_report(mask, ref))
    logging.getLogger("rstids.reduce").info("overlap with reference: %d", len(mask.diff(ref)["common"]))
    if args.out:
        mask.save(args.out, [f"source={args.path}", f"bins={args.bins}", f"seed={args.seed}"])
    return EXIT_OK


def cmd_entropy(args) -> int:
    mask, scores = pipeline.entropy_file(_existing(args.path), args.bins, args.k, _maps(args), args.strict)
    sys.stdout.write(entropy_rank.score_report(scores))
    print(f"top {args.k}: {mask.to_csv()}")
    if args.out:
        mask.save(args.out, [f"source={args.path}", f"bins={args.bins}", f"k={args.k}"])
    return EXIT_OK


def cmd_train(args) -> int:
    data, _ = load_dataset(_existing(args.path), _maps(args), strict=args.strict)
    if not data:
        raise DataError(f"no usable records in {args.path}")
    X, y = to_arrays(data)
    mask = pipeline.resolve_mask(args.mask)
    cfg = svm_core.TrainConfig(C=args.C, gamma=args.gamma or None, tolerance=args.tolerance,
                               max_passes=args.max_passes, seed=args.seed)
    model = svm_core.train_masked(X, y, mask, cfg)
    svm_core.save_model(model, args.out, [f"source={args.path}", f"seed={args.seed}"])
    print(f"{model.n_support} support vectors, {len(mask)} features, "
          f"converged={model.info.converged} -> {args.out}")
    return EXIT_OK


def cmd_test(args) -> int:
    model = svm_core.load_model(_existing(args.model))
    data, _ = load_dataset(_existing(args.path), _maps(args), strict=args.strict)
    if not data:
        raise DataError(f"no usable records in {args.path}")
    X, y = to_arrays(data)
    signs, _ = svm_core.predict_batch(model, X)
    report = eval_metrics.compute_metrics(eval_metrics.tally(signs, y))
    text = report.dumps()
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _run_overrides(args) -> dict:
    out = {}
    for f in fields(pipeline.ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            out[f.name] = value
    return out


def cmd_run(args) -> int:
    overrides = _run_overrides(args)
    try:
        if args.config:
            cfg = pipeline.ExperimentConfig.from_file(_existing(args.config), overrides)
        else:
            cfg = pipeline.ExperimentConfig.from_mapping(overrides)
    except ValueError as e:
        raise UsageError(str(e)) from None
    for split in ("train", "test"):
        _existing(str(cfg.resolved_path(split)))
    bundle = pipeline.run_experiment(cfg)
    sys.stdout.write(bundle.comparison)
    for arm in bundle.failed:
        print(f"FAILED {bundle.arms[arm].error}", file=sys.stderr)
    print(f"bundle: {cfg.output_dir} (config_hash={cfg.config_hash()})")
    return EXIT_PARTIAL if bundle.failed else EXIT_OK


def cmd_report(args) -> int:
    sys.stdout.write(pipeline.render_report(args.dir))
    return EXIT_OK


def _add_common(p, bins: bool = False):
    p.add_argument("--maps", help="symbol map file (default: bundled)")
    p.add_argument("--strict", action="store_true", help="fail on the first malformed line")
    if bins:
        p.add_argument("--bins", type=int, default=discretize.DEFAULT_BINS)


def _add_run_flags(p):
    """One flag per ExperimentConfig field; unset flags leave the config value alone."""
    for f in fields(pipeline.ExperimentConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.type == "bool":
            p.add_argument(flag, dest=f.name, default=None, action=argparse.BooleanOptionalAction)
        else:
            kind = {"int": int, "float": float}.get(f.type, str)
            p.add_argument(flag, dest=f.name, type=kind, default=None,
                           help=f"config key {f.name} (default {f.default!r})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rstids", description="Rough-set feature reduction + SVM intrusion detection")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse a KDD file and print class counts")
    p.add_argument("path")
    p.add_argument("--show-errors", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sample", help="stratified sample of raw KDD lines")
    p.add_argument("path")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--ratios", default="train", help="train, test, or Normal=..,DoS=..,...")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reduce", help="rough-set reduct, diffed against the reference mask")
    p.add_argument("path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_common(p, bins=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("entropy", help="information gain ranking and top-k mask")
    p.add_argument("path")
    p.add_argument("-k", type=int, default=entropy_rank.DEFAULT_K)
    p.add_argument("--out")
    _add_common(p, bins=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("train", help="train an RBF SVM on a KDD file")
    p.add_argument("path")
    p.add_argument("--mask", default="full", help="full, reference, a mask file or 1,5,6,...")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--max-passes", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("test", help="evaluate a saved model on a KDD file")
    p.add_argument("model")
    p.add_argument("path")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("run", help="full experiment over the configured arms")
    p.add_argument("--config", help="INI file with an [experiment] section")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="render the comparison table of a stored bundle")
    p.add_argument("dir")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (RstIdsError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
