import asyncio
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..ann import ActivationKind, NetworkSpec, TrainConfig, param_count
from ..config import DEFAULT_SEED, DerivedSettings, threads_from_env
from ..exceptions import KnotstatError, MissingDataError, NumericError
from ..knot_data import filter_class
from ..models import KnotClass
from ..stats_linear import pearson, two_cluster_fit
from .base import (
    SCALAR_INPUTS,
    Ann,
    BaselineMean,
    ExperimentConfig,
    InputInvariant,
    LinearRegression,
    TargetInvariant,
    run_experiment,
    scalar_features,
)


__all__ = [
    "CorrelationTable",
    "ResultTable",
    "ClusterSummary",
    "SizeSweepRow",
    "run_correlation_table",
    "mahler_clusters",
    "default_error_configs",
    "configs_from_suite",
    "run_cells",
    "run_error_tables",
    "network_size_sweep",
]

logger = logging.getLogger(__name__)


CELL_FAILED_MSG = ("table cell {label} failed and is left empty: {error}", RuntimeWarning)

ERROR_TABLE_INPUTS = (
    InputInvariant.KHOVANOV_VECTOR,
    InputInvariant.JONES_VECTOR,
) + SCALAR_INPUTS

BASELINE_ROW = "base line"

ABSENT = "-"


def _render_block(title, row_labels, col_labels, values):
    """ Aligned text block, values[r][c] already formatted """
    head = [""] + list(col_labels)
    body = [[label] + list(row) for label, row in zip(row_labels, values)]
    widths = [max(len(line[c]) for line in [head] + body) for c in range(len(head))]
    lines = [title]
    for line in [head] + body:
        cells = [line[0].ljust(widths[0])]
        cells += [text.rjust(width) for text, width in zip(line[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def _format(value, digits, bold=False):
    if value is None:
        return ABSENT
    text = "{:.{}f}".format(value, digits)
    return "**{}**".format(text) if bold else text


#### ------------ Correlation tables ------------- ####


@dataclass
class CorrelationTable:
    """
    Full-data Pearson r per (scalar input, target, class). Cells where the
    correlation is undefined hold None.
    """

    inputs: tuple
    targets: tuple
    classes: tuple
    cells: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def get(self, input_invariant, target, knot_class=KnotClass.ALL):
        return self.cells.get((input_invariant, target, knot_class))

    def render(self):
        blocks = []
        for knot_class in self.classes:
            values = [
                [_format(self.get(i, t, knot_class), 2) for t in self.targets]
                for i in self.inputs
            ]
            blocks.append(
                _render_block(
                    "r for {}".format(knot_class.value),
                    [i.label for i in self.inputs],
                    [t.value for t in self.targets],
                    values,
                )
            )
        return "\n\n".join(blocks) + "\n"

    def to_dict(self):
        return {
            "inputs": [i.value for i in self.inputs],
            "targets": [t.value for t in self.targets],
            "classes": [c.value for c in self.classes],
            "cells": [
                {
                    "input": i.value,
                    "target": t.value,
                    "class": c.value,
                    "pearson": self.cells[(i, t, c)],
                    "n": self.counts[(i, t, c)],
                }
                for c in self.classes
                for i in self.inputs
                for t in self.targets
            ],
        }


def run_correlation_table(dataset, targets=None, classes=None, settings=None):
    """
    Pearson r between each rescaled scalar invariant and each target on all
    records of each class, without a train/test split.

    The default grid (every target, every class) covers both correlation
    layouts: vol against the three classes, and all targets per class.
    """
    if len(dataset) == 0:
        raise MissingDataError("cannot correlate an empty dataset")
    targets = tuple(targets or TargetInvariant)
    classes = tuple(classes or KnotClass)
    table = CorrelationTable(inputs=SCALAR_INPUTS, targets=targets, classes=classes)
    for knot_class in classes:
        data = filter_class(dataset, knot_class)
        for input_invariant in SCALAR_INPUTS:
            x, kept, _ = scalar_features(data, input_invariant, settings)
            for target in targets:
                values = [target.of(record) for record in kept]
                mask = np.asarray([v is not None for v in values], dtype=bool)
                y = np.asarray([v for v in values if v is not None], dtype=float)
                key = (input_invariant, target, knot_class)
                table.counts[key] = int(mask.sum())
                try:
                    table.cells[key] = pearson(x[mask], y)
                except NumericError as e:
                    logger.debug("r(%s, %s) on %s undefined: %s", *[k.value for k in key], e)
                    table.cells[key] = None
    return table


@dataclass
class ClusterSummary:
    """ One line through all points against one line per 2-means cluster """

    overall_pearson: Optional[float]
    pearson: tuple
    slopes: tuple
    intercepts: tuple
    sizes: tuple
    config: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "overall_pearson": self.overall_pearson,
            "pearson": list(self.pearson),
            "slopes": list(self.slopes),
            "intercepts": list(self.intercepts),
            "sizes": list(self.sizes),
            "config": self.config,
        }


def mahler_clusters(
    dataset,
    target=TargetInvariant.VOL,
    knot_class=KnotClass.ALL,
    input_invariant=InputInvariant.RESCALED_MAHLER,
    seed=DEFAULT_SEED,
    settings=None,
):
    data = filter_class(dataset, knot_class)
    data = data.with_records(r for r in data if target.of(r) is not None)
    x, kept, _ = scalar_features(data, input_invariant, settings)
    y = np.asarray([target.of(r) for r in kept], dtype=float)
    try:
        overall = pearson(x, y)
    except NumericError:
        overall = None
    fit = two_cluster_fit(x, y, seed)
    return ClusterSummary(
        overall_pearson=overall,
        pearson=fit.pearson,
        slopes=tuple(m.slope for m in fit.models),
        intercepts=tuple(m.intercept for m in fit.models),
        sizes=tuple(int(n) for n in np.bincount(fit.assignment, minlength=2)),
        config={
            "input": input_invariant.value,
            "target": target.value,
            "class": knot_class.value,
            "seed": seed,
            "derived": (settings or DerivedSettings()).to_dict(),
        },
    )


#### ------------ Error tables ------------- ####


def default_error_configs(
    targets=None,
    classes=None,
    inputs=ERROR_TABLE_INPUTS,
    ann=None,
    split_fraction=0.8,
    split_seed=DEFAULT_SEED,
    derived=None,
):
    """
    The full error matrix: vector inputs with the ANN, scalar inputs with
    linear regression, and the mean-predicting baseline, per target and class
    """
    ann = ann or Ann()
    derived = derived or DerivedSettings()
    configs = []
    for knot_class in classes or KnotClass:
        for target in targets or TargetInvariant:
            for input_invariant in inputs:
                model = LinearRegression() if input_invariant.is_scalar else ann
                configs.append(
                    ExperimentConfig(
                        input=input_invariant,
                        target=target,
                        knot_class=knot_class,
                        model=model,
                        split_fraction=split_fraction,
                        split_seed=split_seed,
                        derived=derived,
                    )
                )
            configs.append(
                ExperimentConfig(
                    input=InputInvariant.JONES_VECTOR,
                    target=target,
                    knot_class=knot_class,
                    model=BaselineMean(),
                    split_fraction=split_fraction,
                    split_seed=split_seed,
                    derived=derived,
                )
            )
    return configs


def configs_from_suite(suite, seed=None):
    """ ExperimentConfigs for a suite dict as returned by config.load_suite """
    train_options = dict(suite.get("train") or {})
    if seed is not None:
        train_options["seed"] = seed
    ann_options = dict((suite.get("models") or {}).get("ann") or {})
    ann = Ann(
        hidden=tuple(ann_options.get("hidden", (100, 100))),
        activation=ActivationKind(ann_options.get("activation", "relu")),
        train=TrainConfig.from_dict(train_options),
    )
    inputs = suite.get("inputs")
    return default_error_configs(
        targets=[TargetInvariant(t) for t in suite["targets"]] if suite.get("targets") else None,
        classes=[KnotClass(c) for c in suite["classes"]] if suite.get("classes") else None,
        inputs=tuple(InputInvariant(i) for i in inputs) if inputs else ERROR_TABLE_INPUTS,
        ann=ann,
        split_fraction=suite.get("split_fraction", 0.8),
        split_seed=suite.get("split_seed", DEFAULT_SEED if seed is None else seed),
        derived=DerivedSettings(**(suite.get("derived") or {})),
    )


@dataclass
class ResultTable:
    """
    Cells keyed by (row label, target, class). A cell that failed holds None
    and its error message sits under the same key in ``errors``.
    """

    rows: tuple
    targets: tuple
    classes: tuple
    cells: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def get(self, row, target, knot_class=KnotClass.ALL):
        return self.cells.get((row, target, knot_class))

    def _render(self, title, metric, digits, bold):
        blocks = []
        for knot_class in self.classes:
            values = []
            for row in self.rows:
                line = []
                for target in self.targets:
                    cell = self.get(row, target, knot_class)
                    if cell is None:
                        line.append(ABSENT)
                    else:
                        line.append(_format(getattr(cell, metric), digits, getattr(cell, bold)))
                values.append(line)
            blocks.append(
                _render_block(
                    "{} for {}".format(title, knot_class.value),
                    self.rows,
                    [t.value for t in self.targets],
                    values,
                )
            )
        return "\n\n".join(blocks) + "\n"

    def render_mape(self):
        return self._render("MAPE (%)", "mape", 1, "bold_mape")

    def render_relative_mse(self):
        return self._render("relative MSE", "relative_mse", 2, "bold_mse")

    def render(self):
        return self.render_mape() + "\n" + self.render_relative_mse()

    def to_dict(self):
        cells = []
        for knot_class in self.classes:
            for row in self.rows:
                for target in self.targets:
                    key = (row, target, knot_class)
                    if key not in self.cells:
                        continue
                    cell = self.cells[key]
                    cells.append(
                        {
                            "row": row,
                            "target": target.value,
                            "class": knot_class.value,
                            "result": None if cell is None else cell.to_dict(),
                            "error": self.errors.get(key),
                        }
                    )
        return {
            "rows": list(self.rows),
            "targets": [t.value for t in self.targets],
            "classes": [c.value for c in self.classes],
            "cells": cells,
        }


def _run_cell(dataset, cfg, index):
    try:
        return run_experiment(dataset, cfg, cell_index=index), None
    except KnotstatError as e:
        return None, "{}: {}".format(type(e).__name__, e)


async def run_cells(dataset, configs, threads=None):
    """
    Runs every config on a thread pool. Each cell seeds itself from its
    position in ``configs``, so the thread count does not change the results.

    Returns a list of (ResultCell or None, error message or None).
    """
    threads = threads or threads_from_env()
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            loop.run_in_executor(pool, _run_cell, dataset, cfg, index)
            for index, cfg in enumerate(configs)
        ]
        results = await asyncio.gather(*futures)
    for cfg, (cell, error) in zip(configs, results):
        if error is not None:
            label = "{}/{}/{}".format(cfg.row_label, cfg.target.value, cfg.knot_class.value)
            message, category = CELL_FAILED_MSG
            warnings.warn(message.format(label=label, error=error), category)
            logger.warning("cell %s failed: %s", label, error)
    return results


def _table_from(configs, results):
    rows, targets, classes = [], [], []
    for cfg in configs:
        for seen, value in ((rows, cfg.row_label), (targets, cfg.target), (classes, cfg.knot_class)):
            if value not in seen:
                seen.append(value)
    table = ResultTable(rows=tuple(rows), targets=tuple(targets), classes=tuple(classes))
    for cfg, (cell, error) in zip(configs, results):
        key = (cfg.row_label, cfg.target, cfg.knot_class)
        table.cells[key] = cell
        if error is not None:
            table.errors[key] = error
    return table


async def run_error_tables_async(dataset, configs=None, threads=None):
    configs = list(configs) if configs is not None else default_error_configs()
    results = await run_cells(dataset, configs, threads)
    return _table_from(configs, results)


def run_error_tables(dataset, configs=None, threads=None):
    """
    MAPE and relative-MSE tables over ``configs`` (default: the full matrix
    of default_error_configs). A failing cell is left empty, the rest of the
    table still runs.
    """
    return asyncio.run(run_error_tables_async(dataset, configs, threads))


#### ------------ Network size sweep ------------- ####


@dataclass
class SizeSweepRow:
    hidden: tuple
    n_weights: Optional[int]
    n_biases: Optional[int]
    mape: Optional[float]
    relative_mse: Optional[float]
    error: Optional[str] = None

    def to_dict(self):
        return {
            "hidden": list(self.hidden),
            "n_weights": self.n_weights,
            "n_biases": self.n_biases,
            "mape": self.mape,
            "relative_mse": self.relative_mse,
            "error": self.error,
        }


def network_size_sweep(
    dataset,
    hidden_layouts=((100, 100), (5,)),
    target=TargetInvariant.VOL,
    knot_class=KnotClass.ALL,
    input_invariant=InputInvariant.JONES_VECTOR,
    train=None,
    split_seed=DEFAULT_SEED,
    threads=None,
):
    """ Test errors of the same experiment for networks of different sizes """
    train = train or TrainConfig()
    configs = [
        ExperimentConfig(
            input=input_invariant,
            target=target,
            knot_class=knot_class,
            model=Ann(hidden=tuple(hidden), train=train),
            split_seed=split_seed,
        )
        for hidden in hidden_layouts
    ]
    results = asyncio.run(run_cells(dataset, configs, threads))
    rows = []
    for hidden, (cell, error) in zip(hidden_layouts, results):
        if cell is None:
            rows.append(SizeSweepRow(tuple(hidden), None, None, None, None, error))
            continue
        n_weights, n_biases = param_count(NetworkSpec.from_hidden(cell.input_width, hidden))
        rows.append(
            SizeSweepRow(tuple(hidden), n_weights, n_biases, cell.mape, cell.relative_mse)
        )
    return rows
