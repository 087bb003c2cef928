import argparse
import logging
import math
import re
import sys

import numpy as np
import pandas as pd
import ujson

from .ann import ActivationKind, NetworkSpec, TrainConfig, dump_network, evaluate, load_network, train
from .config import DEFAULT_DATASET, DEFAULT_SEED, SCHEMA_VERSION, DerivedSettings, load_suite
from .derived_invariants import derive_table
from .exceptions import DataError, KnotstatError, MissingDataError, NumericError
from .experiments import (
    Ann,
    ExperimentConfig,
    InputInvariant,
    TargetInvariant,
    baseline_mean,
    build_features,
    distill_formula,
    export_scatter,
    features_for_recipe,
    mahler_clusters,
    network_size_sweep,
    phase_sweep,
    run_correlation_table,
    run_error_tables,
    split,
)
from .experiments.base import prepare
from .experiments.tables import configs_from_suite, default_error_configs
from .knot_data import parse_dataset, summarize
from .models import KnotClass


__all__ = ["main", "parse_phase", "build_parser"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

DEFAULT_PHASES = "1/2,2/5,3/5,3/7,4/7,5/11,6/11,7/15,8/15"

_ROOT_OF_UNITY = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_RADIANS = re.compile(r"^\s*([0-9.]*)\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """ Raises UsageError instead of exiting, so main can pick the exit code """

    def error(self, message):
        raise UsageError(message)


#### ------------ Argument helpers ------------- ####


def parse_phase(text):
    """
    Phase in radians from "k/n" (the root of unity e^(2 pi i k / n)),
    "Xpi/Y", "Xpi", "pi" or a plain number of radians
    """
    match = _ROOT_OF_UNITY.match(text)
    if match:
        k, n = int(match.group(1)), int(match.group(2))
        if n <= 0:
            raise argparse.ArgumentTypeError("bad root of unity {!r}".format(text))
        return 2.0 * math.pi * k / n
    match = _RADIANS.match(text)
    if match:
        factor = float(match.group(1)) if match.group(1) else 1.0
        divisor = float(match.group(2)) if match.group(2) else 1.0
        if divisor == 0:
            raise argparse.ArgumentTypeError("bad phase {!r}".format(text))
        return factor * math.pi / divisor
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("cannot read phase {!r}".format(text))


def _phase_list(text):
    phases = []
    for item in text.split(","):
        match = _ROOT_OF_UNITY.match(item)
        if not match:
            raise argparse.ArgumentTypeError("expected k/n pairs, got {!r}".format(item))
        phases.append((int(match.group(1)), int(match.group(2))))
    return phases


def _hidden(text):
    try:
        sizes = tuple(int(size) for size in text.split(",") if size.strip())
    except ValueError:
        raise argparse.ArgumentTypeError("hidden sizes are comma separated integers")
    if any(size <= 0 for size in sizes):
        raise argparse.ArgumentTypeError("hidden sizes must be positive")
    return sizes


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not a number: {!r}".format(text))
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("fraction must lie in (0, 1), got {}".format(value))
    return value


def _layouts(text):
    return [_hidden(layout) for layout in text.split(";")]


def _choices(enum_type):
    return [member.value for member in enum_type]


VECTOR_INPUTS = [i.value for i in InputInvariant if not i.is_scalar]
SCALAR_INPUT_CHOICES = [i.value for i in InputInvariant if i.is_scalar]


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument("--data", default=DEFAULT_DATASET, help="dataset file (csv or json)")
    common.add_argument("--data-format", choices=["csv", "json"], default=None,
                        help="dataset format, read from the extension by default")
    common.add_argument("--out", default=None, help="output file, stdout by default")
    common.add_argument("--class", dest="knot_class", choices=_choices(KnotClass), default=None,
                        help="restrict to all / alternating / non-alternating knots")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every generator")
    common.add_argument("--format", choices=["json", "text", "csv"], default="json")
    common.add_argument("-v", "--verbose", action="count", default=0)

    training = ArgumentParser(add_help=False)
    training.add_argument("--hidden", type=_hidden, default=(100, 100))
    training.add_argument("--activation", choices=_choices(ActivationKind), default="relu")
    training.add_argument("--epochs", type=int, default=400)
    training.add_argument("--learning-rate", type=float, default=1e-3)
    training.add_argument("--batch-size", type=int, default=32)
    training.add_argument("--momentum", type=float, default=0.9)
    training.add_argument("--no-standardize", action="store_true")

    parser = ArgumentParser(prog="knotstat", description="Knot invariant statistics")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    commands.add_parser("validate", parents=[common], help="load a dataset and summarize it")
    commands.add_parser("derive", parents=[common], help="derived invariants per record")

    correlate = commands.add_parser("correlate", parents=[common], help="correlation tables")
    correlate.add_argument("--target", action="append", choices=_choices(TargetInvariant))
    correlate.add_argument("--clusters", action="store_true",
                           help="add the two-line fit of rescaled Mahler measure against vol")

    tables = commands.add_parser("tables", parents=[common, training], help="error tables")
    tables.add_argument("--suite", default=None, help="experiment suite JSON file")
    tables.add_argument("--target", action="append", choices=_choices(TargetInvariant))
    tables.add_argument("--threads", type=int, default=None)

    train_ann = commands.add_parser("train-ann", parents=[common, training], help="train one network")
    train_ann.add_argument("--input", choices=VECTOR_INPUTS, default="jones_vector")
    train_ann.add_argument("--target", choices=_choices(TargetInvariant), default="vol")
    train_ann.add_argument("--train-fraction", type=_fraction, default=0.8,
                           help="share of the records used for training")
    train_ann.add_argument("--save", default=None, help="write the trained network here")

    evaluate_cmd = commands.add_parser("evaluate", parents=[common], help="score a saved network")
    evaluate_cmd.add_argument("--network", required=True)
    evaluate_cmd.add_argument("--target", choices=_choices(TargetInvariant), default="vol")

    distill = commands.add_parser("distill", parents=[common], help="fit a log(|J| + b) - c")
    distill.add_argument("--phase", type=parse_phase, default=parse_phase("3pi/4"))
    distill.add_argument("--target", choices=_choices(TargetInvariant), default="vol")

    sweep = commands.add_parser("sweep", parents=[common, training], help="phase or network size sweep")
    sweep.add_argument("kind", choices=["phase", "size"])
    sweep.add_argument("--phases", type=_phase_list, default=_phase_list(DEFAULT_PHASES))
    sweep.add_argument("--layouts", type=_layouts, default=[(100, 100), (5,)])
    sweep.add_argument("--target", choices=_choices(TargetInvariant), default="vol")

    scatter = commands.add_parser("scatter", parents=[common], help="plot data for one regression")
    scatter.add_argument("--input", choices=SCALAR_INPUT_CHOICES, default="rescaled_zeta")
    scatter.add_argument("--target", choices=_choices(TargetInvariant), default="vol")

    return parser


def _train_config(args):
    return TrainConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        epochs=args.epochs,
        momentum=args.momentum,
        seed=args.seed,
        input_standardize=not args.no_standardize,
    )


def _classes(args):
    return [KnotClass(args.knot_class)] if args.knot_class else list(KnotClass)


def _knot_class(args):
    return KnotClass(args.knot_class or KnotClass.ALL.value)


#### ------------ Output ------------- ####


def _clean(value):
    """ JSON-safe copy: numpy scalars unwrapped, non-finite floats as null """
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _artifact(args, dataset, config, result):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "dataset": dataset.provenance if dataset is not None else None,
        "config": config,
        "result": result,
    }


def _write(args, text):
    if args.out is None:
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def artifact_header(artifact):
    """ '#' comment lines carrying everything of an artifact except its result """
    lines = [
        "# schema_version={}".format(artifact["schema_version"]),
        "# command={}".format(artifact["command"]),
        "# dataset={}".format(artifact["dataset"]),
        "# config={}".format(ujson.dumps(_clean(artifact["config"]), sort_keys=True)),
    ]
    return "\n".join(lines) + "\n"


def _emit(args, artifact, text=None, frame=None):
    if args.format == "text" and text is not None:
        _write(args, artifact_header(artifact) + text)
    elif args.format == "csv" and frame is not None:
        _write(args, artifact_header(artifact) + frame.to_csv(index=False, float_format="%.17g"))
    elif args.format == "json":
        _write(args, ujson.dumps(_clean(artifact), sort_keys=True, indent=2) + "\n")
    else:
        raise UsageError("--format {} is not available for {}".format(args.format, args.command))


def _base_config(args):
    return {
        "data": args.data,
        "class": args.knot_class,
        "seed": args.seed,
        "format": args.format,
    }


#### ------------ Commands ------------- ####


def cmd_validate(args, dataset):
    summary = summarize(dataset)
    lines = ["records: {}".format(summary["records"])]
    lines += ["class {}: {}".format(k, v) for k, v in summary["classes"].items()]
    lines += ["{}: {}".format(k, v) for k, v in summary["targets"].items()]
    lines.append("khovanov: {}".format(summary["khovanov"]))
    _emit(args, _artifact(args, dataset, _base_config(args), summary), text="\n".join(lines) + "\n")


def cmd_derive(args, dataset):
    settings = DerivedSettings()
    rows = derive_table(dataset.with_records(r for r in dataset if _knot_class(args).admits(r)), settings)
    config = dict(_base_config(args), derived=settings.to_dict())
    frame = pd.DataFrame(rows)
    _emit(args, _artifact(args, dataset, config, rows), text=frame.to_string(index=False) + "\n", frame=frame)


def cmd_correlate(args, dataset):
    targets = [TargetInvariant(t) for t in args.target] if args.target else None
    table = run_correlation_table(dataset, targets=targets, classes=_classes(args))
    result = {"correlation": table.to_dict()}
    text = table.render()
    if args.clusters:
        clusters = mahler_clusters(dataset, knot_class=_knot_class(args), seed=args.seed)
        result["clusters"] = clusters.to_dict()
        text += "\ntwo-line fit r: {}\n".format(
            ", ".join("{:.2f}".format(r) for r in clusters.pearson)
        )
    config = dict(_base_config(args), derived=DerivedSettings().to_dict())
    _emit(args, _artifact(args, dataset, config, result), text=text)


def cmd_tables(args, dataset):
    if args.suite:
        suite = load_suite(args.suite)
        if suite.get("dataset") and args.data == DEFAULT_DATASET:
            dataset = parse_dataset(suite["dataset"], suite.get("format"))
        configs = configs_from_suite(suite, seed=args.seed)
    else:
        ann = Ann(hidden=args.hidden, activation=ActivationKind(args.activation), train=_train_config(args))
        targets = [TargetInvariant(t) for t in args.target] if args.target else None
        configs = default_error_configs(
            targets=targets, classes=_classes(args), ann=ann, split_seed=args.seed
        )
    table = run_error_tables(dataset, configs, threads=args.threads)
    config = dict(_base_config(args), suite=args.suite, cells=[c.to_dict() for c in configs])
    _emit(args, _artifact(args, dataset, config, table.to_dict()), text=table.render())


def _training_data(dataset, input_invariant, target, knot_class):
    cfg = ExperimentConfig(input=input_invariant, target=target, knot_class=knot_class)
    data, _ = prepare(dataset, cfg)
    if len(data) == 0:
        raise MissingDataError("no records left to train on")
    return data


def cmd_train_ann(args, dataset):
    input_invariant = InputInvariant(args.input)
    target = TargetInvariant(args.target)
    data = _training_data(dataset, input_invariant, target, _knot_class(args))
    X, data, _, recipe = build_features(data, input_invariant)
    y = np.asarray([target.of(r) for r in data], dtype=float)
    train_part, test_part = split(data, args.train_fraction, args.seed)
    position = {name: i for i, name in enumerate(data.names)}
    train_rows = [position[name] for name in train_part.names]
    test_rows = [position[name] for name in test_part.names]

    cfg = _train_config(args)
    spec = NetworkSpec.from_hidden(X.shape[1], args.hidden, ActivationKind(args.activation))
    net, history = train(spec, X[train_rows], y[train_rows], cfg)
    # training target mean, the baseline of the evaluate command
    net.features = dict(recipe, target=target.value, target_mean=float(y[train_rows].mean()))
    baseline = baseline_mean(y[train_rows]).predict(X[test_rows])
    baseline_mse = float(np.mean((baseline - y[test_rows]) ** 2))
    report = evaluate(net, X[test_rows], y[test_rows], baseline_mse=baseline_mse)
    if args.save:
        dump_network(net, args.save)

    config = dict(
        _base_config(args),
        input=input_invariant.value,
        target=target.value,
        train_fraction=args.train_fraction,
        spec=list(spec.layer_sizes),
        activation=spec.activation.value,
        train=cfg.to_dict(),
        features=net.features,
    )
    result = dict(
        report.to_dict(),
        final_loss=float(history[-1]),
        n_train=len(train_rows),
        n_test=len(test_rows),
    )
    text = "test mse {:.4g}, relative {:.2f}, mape {}\n".format(
        report.mse,
        report.relative_mse,
        "-" if report.mape is None else "{:.1f}%".format(report.mape),
    )
    _emit(args, _artifact(args, dataset, config, result), text=text)


def cmd_evaluate(args, dataset):
    net = load_network(args.network)
    target = TargetInvariant(args.target)
    if net.features.get("target") != target.value or net.features.get("target_mean") is None:
        raise MissingDataError(
            "{} holds no training mean of {}, retrain it with train-ann --save".format(args.network, target.value)
        )
    input_invariant = InputInvariant(net.features.get("input", "jones_vector"))
    data = _training_data(dataset, input_invariant, target, _knot_class(args))
    X = features_for_recipe(data, net.features)
    y = np.asarray([target.of(r) for r in data], dtype=float)
    baseline_mse = float(np.mean((y - net.features["target_mean"]) ** 2))
    report = evaluate(net, X, y, baseline_mse=baseline_mse)
    config = dict(_base_config(args), network=args.network, target=target.value, features=net.features)
    text = "mse {:.4g}, mape {}\n".format(
        report.mse, "-" if report.mape is None else "{:.1f}%".format(report.mape)
    )
    _emit(args, _artifact(args, dataset, config, dict(report.to_dict(), n=len(y))), text=text)


def cmd_distill(args, dataset):
    target = TargetInvariant(args.target)
    data = dataset.with_records(r for r in dataset if _knot_class(args).admits(r))
    fit = distill_formula(data, phase=args.phase, target=target)
    config = dict(_base_config(args), phase=args.phase, target=target.value)
    text = "{} ~ {:.4f} log(|J| + {:.4f}) - {:.4f}, mape {:.2f}%\n".format(
        target.value, fit.a, fit.b, fit.c, fit.mape
    )
    _emit(args, _artifact(args, dataset, config, fit.to_dict()), text=text)


def cmd_sweep(args, dataset):
    target = TargetInvariant(args.target)
    if args.kind == "phase":
        scores = phase_sweep(dataset, args.phases, target=target, knot_class=_knot_class(args))
        rows = [s.to_dict() for s in scores]
        config = dict(_base_config(args), kind="phase", target=target.value, phases=args.phases)
    else:
        rows = [
            row.to_dict()
            for row in network_size_sweep(
                dataset,
                hidden_layouts=args.layouts,
                target=target,
                knot_class=_knot_class(args),
                train=_train_config(args),
                split_seed=args.seed,
            )
        ]
        config = dict(
            _base_config(args),
            kind="size",
            target=target.value,
            layouts=args.layouts,
            train=_train_config(args).to_dict(),
        )
    frame = pd.DataFrame(rows)
    _emit(args, _artifact(args, dataset, config, rows), text=frame.to_string(index=False) + "\n", frame=frame)


def cmd_scatter(args, dataset):
    if args.out is None:
        raise UsageError("scatter needs --out")
    model = export_scatter(
        dataset,
        InputInvariant(args.input),
        TargetInvariant(args.target),
        _knot_class(args),
        args.out,
        config=_clean(
            dict(
                _base_config(args),
                input=args.input,
                target=args.target,
                schema_version=SCHEMA_VERSION,
                dataset=dataset.provenance,
            )
        ),
    )
    logger.info("line through %s: slope %r, intercept %r", args.out, model.slope, model.intercept)


COMMANDS = {
    "validate": cmd_validate,
    "derive": cmd_derive,
    "correlate": cmd_correlate,
    "tables": cmd_tables,
    "train-ann": cmd_train_ann,
    "evaluate": cmd_evaluate,
    "distill": cmd_distill,
    "sweep": cmd_sweep,
    "scatter": cmd_scatter,
}


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write("knotstat: error: {}\n".format(e))
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        dataset = parse_dataset(args.data, args.data_format)
        COMMANDS[args.command](args, dataset)
    except UsageError as e:
        sys.stderr.write("knotstat {}: error: {}\n".format(args.command, e))
        return EXIT_USAGE
    except DataError as e:
        sys.stderr.write("knotstat: data error: {}\n".format(e))
        return EXIT_DATA
    except NumericError as e:
        sys.stderr.write("knotstat: numeric error: {}\n".format(e))
        return EXIT_NUMERIC
    except KnotstatError as e:
        sys.stderr.write("knotstat: {}\n".format(e))
        return EXIT_DATA
    except OSError as e:
        sys.stderr.write("knotstat: {}\n".format(e))
        return EXIT_DATA
    return EXIT_OK
