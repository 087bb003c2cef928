import enum
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from ..ann import ActivationKind, NetworkSpec, TrainConfig, train
from ..config import DEFAULT_SEED, DerivedSettings
from ..derived_invariants import (
    Determinant,
    MahlerMeasure,
    RootOfUnityEval,
    degree,
    rescale,
    roots_of_unity_vector,
)
from ..exceptions import DataError, DomainError, NumericError, SplitError
from ..knot_data import filter_class, vectorize_jones, vectorize_khovanov
from ..models import KnotClass
from ..stats_linear import (
    linear_fit,
    metric_report,
    pearson,
    relative_error,
    wrapped_mse,
)


__all__ = [
    "InputInvariant",
    "TargetInvariant",
    "LinearRegression",
    "Ann",
    "BaselineMean",
    "ExperimentConfig",
    "ResultCell",
    "BaselinePredictor",
    "split",
    "baseline_mean",
    "bold_rule",
    "scalar_feature",
    "build_features",
    "run_experiment",
]

logger = logging.getLogger(__name__)


RESCALE_DROP_MSG = (
    "{count} record(s) dropped from the {input} input: rescaling needs a positive "
    "value and a jones degree of at least 2",
    RuntimeWarning,
)


class InputInvariant(enum.Enum):
    RESCALED_DET = "rescaled_det"
    RESCALED_MAHLER = "rescaled_mahler"
    RESCALED_ZETA_EVAL = "rescaled_zeta"
    JONES_VECTOR = "jones_vector"
    KHOVANOV_VECTOR = "khovanov_vector"
    ROOTS_OF_UNITY_VECTOR = "roots_vector"

    @property
    def is_scalar(self):
        return self in SCALAR_INPUTS

    @property
    def label(self):
        return _INPUT_LABELS[self]


SCALAR_INPUTS = (
    InputInvariant.RESCALED_DET,
    InputInvariant.RESCALED_MAHLER,
    InputInvariant.RESCALED_ZETA_EVAL,
)

_INPUT_LABELS = {
    InputInvariant.RESCALED_DET: "det",
    InputInvariant.RESCALED_MAHLER: "mahler",
    InputInvariant.RESCALED_ZETA_EVAL: "J(zeta)",
    InputInvariant.JONES_VECTOR: "J",
    InputInvariant.KHOVANOV_VECTOR: "KH",
    InputInvariant.ROOTS_OF_UNITY_VECTOR: "J(roots)",
}


class TargetInvariant(enum.Enum):
    """ Values are the HyperbolicInvariants field names """

    VOL = "vol"
    LONGITUDE_LENGTH = "longitude_length"
    MERIDIAN_LENGTH = "meridian_length"
    MU_X = "mu_x"
    MU_Y = "mu_y"
    CUSP_VOLUME = "cusp_volume"
    CHERN_SIMONS = "chern_simons"

    def of(self, record):
        return record.hyperbolic.get(self.value)


#### ------------ Model kinds ------------- ####


@dataclass(frozen=True)
class LinearRegression:
    kind = "linear"

    def to_dict(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Ann:
    """ Hidden layer sizes only, the input width comes from the data """

    hidden: Tuple[int, ...] = (100, 100)
    activation: ActivationKind = ActivationKind.RELU
    train: TrainConfig = field(default_factory=TrainConfig)

    kind = "ann"

    def to_dict(self):
        return {
            "kind": self.kind,
            "hidden": list(self.hidden),
            "activation": ActivationKind(self.activation).value,
            "train": self.train.to_dict(),
        }


@dataclass(frozen=True)
class BaselineMean:
    kind = "baseline"

    def to_dict(self):
        return {"kind": self.kind}


ModelKind = Union[LinearRegression, Ann, BaselineMean]


@dataclass(frozen=True)
class ExperimentConfig:
    input: InputInvariant
    target: TargetInvariant
    knot_class: KnotClass = KnotClass.ALL
    model: Optional[ModelKind] = None
    split_fraction: float = 0.8
    split_seed: int = DEFAULT_SEED
    derived: DerivedSettings = field(default_factory=DerivedSettings)

    def __post_init__(self):
        if self.model is None:
            default = LinearRegression() if self.input.is_scalar else Ann()
            object.__setattr__(self, "model", default)
        if isinstance(self.model, LinearRegression) and not self.input.is_scalar:
            raise DomainError("linear regression takes a scalar input, not {}".format(self.input.value))
        if isinstance(self.model, Ann) and self.input.is_scalar:
            raise DomainError("the ANN takes a vector input, not {}".format(self.input.value))
        if not 0 < self.split_fraction < 1:
            raise DomainError("split_fraction must lie in (0, 1)")

    @property
    def row_label(self):
        if isinstance(self.model, BaselineMean):
            return "base line"
        return self.input.label

    def to_dict(self):
        return {
            "input": self.input.value,
            "target": self.target.value,
            "class": self.knot_class.value,
            "model": self.model.to_dict(),
            "split_fraction": self.split_fraction,
            "split_seed": self.split_seed,
            "derived": self.derived.to_dict(),
        }


@dataclass
class ResultCell:
    """
    Test-set errors of one (input, target, class, model) experiment

    relative_mse is mse over the mean-predicting baseline's mse on the same
    split. bold_mape / bold_mse mark errors below half the baseline's.
    """

    mse: float
    relative_mse: float
    mape: Optional[float]
    pearson: Optional[float]
    n_train: int
    n_test: int
    baseline_mse: float
    baseline_mape: Optional[float]
    bold_mape: bool
    bold_mse: bool
    input_width: int = 1
    wrapped_mse: Optional[float] = None
    dropped: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def bold(self):
        return self.bold_mse

    def to_dict(self):
        return {
            "mse": self.mse,
            "relative_mse": self.relative_mse,
            "mape": self.mape,
            "pearson": self.pearson,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "baseline_mse": self.baseline_mse,
            "baseline_mape": self.baseline_mape,
            "bold_mape": self.bold_mape,
            "bold_mse": self.bold_mse,
            "input_width": self.input_width,
            "wrapped_mse": self.wrapped_mse,
            "dropped": dict(self.dropped),
            "config": self.config,
        }


#### ------------ Building blocks ------------- ####


def split(dataset, fraction, seed):
    """ Seeded shuffle, the first ceil(fraction * n) records train """
    if not 0 < fraction < 1:
        raise DomainError("split fraction must lie in (0, 1), got {}".format(fraction))
    n = len(dataset)
    if n == 0:
        raise SplitError("cannot split an empty dataset")
    n_train = math.ceil(round(fraction * n, 9))
    if n_train >= n:
        raise SplitError(
            "a {:g} split of {} records leaves the test set empty".format(fraction, n)
        )
    order = np.random.default_rng(seed).permutation(n)
    train_part = dataset.with_records(dataset[int(i)] for i in order[:n_train])
    test_part = dataset.with_records(dataset[int(i)] for i in order[n_train:])
    return train_part, test_part


@dataclass(frozen=True)
class BaselinePredictor:
    mean: float

    def predict(self, X):
        return np.full(len(X), self.mean, dtype=float)


def baseline_mean(train_targets):
    train_targets = np.asarray(train_targets, dtype=float)
    if len(train_targets) == 0:
        raise DataError("baseline needs at least one training target")
    return BaselinePredictor(mean=float(train_targets.mean()))


def bold_rule(value, baseline_value):
    """ An error is printed bold when it is less than half the baseline's """
    if value is None or baseline_value is None:
        return False
    return value < 0.5 * baseline_value


def _kind_for(input_invariant, settings):
    if input_invariant is InputInvariant.RESCALED_DET:
        return Determinant()
    if input_invariant is InputInvariant.RESCALED_MAHLER:
        return MahlerMeasure(settings.mahler_points, settings.mahler_tolerance)
    return RootOfUnityEval(settings.zeta_k, settings.zeta_n)


def scalar_feature(record, input_invariant, settings=None):
    """ Rescaled derived invariant of one record, raises DomainError/DataError if undefined """
    settings = settings or DerivedSettings()
    kind = _kind_for(input_invariant, settings)
    return rescale(kind(record.jones), degree(record.jones))


def scalar_features(dataset, input_invariant, settings=None):
    """ (values, kept dataset, number dropped) """
    values, kept = [], []
    for record in dataset:
        try:
            values.append(scalar_feature(record, input_invariant, settings))
        except (DomainError, DataError) as e:
            logger.debug("%s dropped from %s: %s", record.name, input_invariant.value, e)
            continue
        kept.append(record)
    dropped = len(dataset) - len(kept)
    if dropped:
        message, category = RESCALE_DROP_MSG
        warnings.warn(message.format(count=dropped, input=input_invariant.value), category)
    return np.asarray(values, dtype=float), dataset.with_records(kept), dropped


def build_features(dataset, input_invariant, settings=None):
    """
    Returns (X, kept dataset, dropped count, recipe)

    Scalar inputs give a 1-D X. Vector inputs are built on the whole dataset
    passed in, so a later train/test split shares one window.
    """
    settings = settings or DerivedSettings()
    if input_invariant.is_scalar:
        X, kept, dropped = scalar_features(dataset, input_invariant, settings)
        return X, kept, dropped, {"input": input_invariant.value}
    if input_invariant is InputInvariant.JONES_VECTOR:
        X, window = vectorize_jones(dataset)
        return X, dataset, 0, {"input": input_invariant.value, "window": list(window)}
    if input_invariant is InputInvariant.KHOVANOV_VECTOR:
        X, grid = vectorize_khovanov(dataset)
        return X, dataset, 0, {"input": input_invariant.value, "grid": list(grid)}
    X = np.vstack(
        [roots_of_unity_vector(record.jones, settings.roots_vector_n) for record in dataset]
    )
    return X, dataset, 0, {"input": input_invariant.value, "n": settings.roots_vector_n}


def features_for_recipe(dataset, recipe, settings=None):
    """ Rebuilds input vectors for a stored network on new data """
    kind = InputInvariant(recipe["input"])
    if kind is InputInvariant.JONES_VECTOR:
        return vectorize_jones(dataset, window=recipe["window"])[0]
    if kind is InputInvariant.KHOVANOV_VECTOR:
        return vectorize_khovanov(dataset, grid=recipe["grid"])[0]
    if kind is InputInvariant.ROOTS_OF_UNITY_VECTOR:
        return np.vstack([roots_of_unity_vector(r.jones, recipe["n"]) for r in dataset])
    raise DataError("networks take vector inputs, recipe says {!r}".format(recipe["input"]))


def cell_seed(*parts):
    """ Independent, reproducible seed for one table cell """
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


#### ------------ Experiment ------------- ####


def fit_and_predict(model, X_train, y_train, X_test, seed):
    """ Returns (test predictions, fitted object) """
    if isinstance(model, LinearRegression):
        fitted, _ = linear_fit(X_train, y_train)
        return fitted.predict(X_test), fitted
    if isinstance(model, Ann):
        spec = NetworkSpec.from_hidden(X_train.shape[1], model.hidden, model.activation)
        cfg = TrainConfig(**dict(model.train.to_dict(), seed=seed))
        net, _ = train(spec, X_train, y_train, cfg)
        return net.predict(X_test), net
    fitted = baseline_mean(y_train)
    return fitted.predict(X_test), fitted


def prepare(dataset, cfg):
    """ Class filter, then drop records lacking the target or khovanov data """
    data = filter_class(dataset, cfg.knot_class)
    with_target = [r for r in data if cfg.target.of(r) is not None]
    dropped = {"missing_target": len(data) - len(with_target)}
    if cfg.input is InputInvariant.KHOVANOV_VECTOR:
        with_khovanov = [r for r in with_target if r.khovanov is not None]
        dropped["missing_khovanov"] = len(with_target) - len(with_khovanov)
        with_target = with_khovanov
    return data.with_records(with_target), dropped


def run_experiment(dataset, cfg, cell_index=0):
    data, dropped = prepare(dataset, cfg)
    if len(data) == 0:
        raise SplitError(
            "no {} records with {} left for {}".format(
                cfg.knot_class.value, cfg.target.value, cfg.input.value
            )
        )
    X, data, feature_drops, recipe = build_features(data, cfg.input, cfg.derived)
    dropped["features"] = feature_drops
    y = np.asarray([cfg.target.of(r) for r in data], dtype=float)

    train_part, test_part = split(data, cfg.split_fraction, cfg.split_seed)
    position = {name: i for i, name in enumerate(data.names)}
    train_rows = np.asarray([position[name] for name in train_part.names])
    test_rows = np.asarray([position[name] for name in test_part.names])
    X_train, y_train = X[train_rows], y[train_rows]
    X_test, y_test = X[test_rows], y[test_rows]

    seed = cell_seed(getattr(cfg.model, "train", TrainConfig()).seed, cfg.split_seed, cell_index)
    pred, _ = fit_and_predict(cfg.model, X_train, y_train, X_test, seed)
    baseline = metric_report(baseline_mean(y_train).predict(X_test), y_test)
    report = metric_report(pred, y_test)
    try:
        correlation = pearson(pred, y_test)
    except NumericError:
        correlation = None

    config = cfg.to_dict()
    config["features"] = recipe
    if isinstance(cfg.model, Ann):
        config["model"]["train"]["seed"] = seed

    cell = ResultCell(
        mse=report.mse,
        relative_mse=relative_error(report.mse, baseline.mse),
        mape=report.mape,
        pearson=correlation,
        n_train=len(train_rows),
        n_test=len(test_rows),
        baseline_mse=baseline.mse,
        baseline_mape=baseline.mape,
        bold_mape=bold_rule(report.mape, baseline.mape),
        bold_mse=bold_rule(report.mse, baseline.mse),
        input_width=1 if X.ndim == 1 else X.shape[1],
        wrapped_mse=wrapped_mse(pred, y_test) if cfg.target is TargetInvariant.CHERN_SIMONS else None,
        dropped=dropped,
        config=config,
    )
    logger.info(
        "%s -> %s [%s, %s]: mse %.4g (relative %.3g), mape %s",
        cfg.input.value,
        cfg.target.value,
        cfg.knot_class.value,
        cfg.model.kind,
        cell.mse,
        cell.relative_mse,
        "-" if cell.mape is None else "{:.2f}%".format(cell.mape),
    )
    return cell
