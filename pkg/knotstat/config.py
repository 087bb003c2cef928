import os
from dataclasses import dataclass
from typing import Optional

import ujson

from .exceptions import DataError, DatasetNotFound


SCHEMA_VERSION = 1

DEFAULT_SEED = 42

DEFAULT_DATASET = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "data", "knots_micro.csv"
)

THREADS_ENV_VAR = "KNOTSTAT_THREADS"


@dataclass(frozen=True)
class DerivedSettings:
    """
    Knobs for the one-dimensional derived invariants

    Arguments:

        zeta_k, zeta_n (int):

            Root of unity e^(2 pi i k / n) used for the rescaled evaluation.
            Default 3/5

        mahler_points (int):

            Midpoint-rule node count for the Mahler measure. Default 4096

        mahler_tolerance (float or None):

            When set, the node count is doubled from mahler_points until two
            successive values differ by less than this
    """

    zeta_k: int = 3
    zeta_n: int = 5
    mahler_points: int = 4096
    mahler_tolerance: Optional[float] = None
    roots_vector_n: int = 16

    def to_dict(self):
        return {
            "zeta_k": self.zeta_k,
            "zeta_n": self.zeta_n,
            "mahler_points": self.mahler_points,
            "mahler_tolerance": self.mahler_tolerance,
            "roots_vector_n": self.roots_vector_n,
        }


def threads_from_env(environ=None):
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise DataError("{} must be an integer, got {!r}".format(THREADS_ENV_VAR, raw))
    if threads < 1:
        raise DataError("{} must be positive, got {}".format(THREADS_ENV_VAR, threads))
    return threads


_SUITE_KEYS = {
    "dataset",
    "format",
    "classes",
    "inputs",
    "targets",
    "models",
    "split_fraction",
    "split_seed",
    "train",
    "derived",
}


def load_suite(path, decoder=ujson.loads):
    """
    Reads an experiment suite file

        {
            "dataset": "knots.csv",
            "classes": ["all", "alt", "nonalt"],
            "inputs": ["jones_vector", "rescaled_det"],
            "targets": ["vol", "chern_simons"],
            "models": {"ann": {"hidden": [100, 100], "activation": "relu"}},
            "split_fraction": 0.8,
            "split_seed": 42,
            "train": {"epochs": 400, "learning_rate": 0.001},
            "derived": {"zeta_k": 3, "zeta_n": 5}
        }

    Every key is optional. Relative dataset paths resolve against the
    directory of the suite file.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            suite = decoder(f.read())
    except FileNotFoundError:
        raise DatasetNotFound("suite file not found: {}".format(path))
    except ValueError as e:
        raise DataError("suite file {} is not valid JSON: {}".format(path, e))
    if not isinstance(suite, dict):
        raise DataError("suite file {} must hold a JSON object".format(path))
    unknown = set(suite) - _SUITE_KEYS
    if unknown:
        raise DataError(
            "unknown keys in suite file {}: {}".format(path, ", ".join(sorted(unknown)))
        )
    dataset = suite.get("dataset")
    if dataset is not None and not os.path.isabs(dataset):
        suite["dataset"] = os.path.join(os.path.dirname(os.path.abspath(path)), dataset)
    return suite
