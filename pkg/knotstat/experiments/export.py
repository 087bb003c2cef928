import logging

import numpy as np
import pandas as pd
import ujson

from ..config import SCHEMA_VERSION
from ..exceptions import DataError, DomainError, MissingDataError, NumericError
from ..knot_data import filter_class
from ..models import KnotClass
from ..stats_linear import linear_fit, pearson
from .base import scalar_features


__all__ = ["export_scatter", "read_scatter"]

logger = logging.getLogger(__name__)

SCATTER_COLUMNS = ["x", "y", "name", "alternating"]


def export_scatter(dataset, input_invariant, target, knot_class, path, settings=None, config=None):
    """
    Writes the (rescaled invariant, target) points of one class as CSV for
    external plotting, preceded by comment lines

        # schema_version=1
        # input=rescaled_det target=vol class=all n=7
        # slope=... intercept=... pearson=...

    holding the least-squares line through the same points. A ``config``
    dict, when given, follows as compact JSON on a "# config=" line.
    Returns the fitted LinearModel.
    """
    if not input_invariant.is_scalar:
        raise DomainError("scatter export takes a scalar input, not {}".format(input_invariant.value))
    data = filter_class(dataset, knot_class)
    data = data.with_records(r for r in data if target.of(r) is not None)
    x, kept, _ = scalar_features(data, input_invariant, settings)
    if len(kept) < 2:
        raise MissingDataError(
            "need at least 2 {} records with {} to fit a line".format(knot_class.value, target.value)
        )
    y = np.asarray([target.of(r) for r in kept], dtype=float)
    model, _ = linear_fit(x, y)
    try:
        r = pearson(x, y)
    except NumericError:
        r = float("nan")

    frame = pd.DataFrame(
        {
            "x": x,
            "y": y,
            "name": kept.names,
            "alternating": ["true" if rec.alternating else "false" for rec in kept],
        },
        columns=SCATTER_COLUMNS,
    )
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("# schema_version={}\n".format(SCHEMA_VERSION))
        f.write(
            "# input={} target={} class={} n={}\n".format(
                input_invariant.value, target.value, knot_class.value, len(kept)
            )
        )
        f.write("# slope={!r} intercept={!r} pearson={!r}\n".format(model.slope, model.intercept, r))
        if config is not None:
            f.write("# config={}\n".format(ujson.dumps(config, sort_keys=True)))
        frame.to_csv(f, index=False, float_format="%.17g")
    logger.info("wrote %d points to %s", len(kept), path)
    return model


def read_scatter(path):
    """ (header dict, DataFrame) of a file written by export_scatter """
    header = {}
    with open(path, "r", encoding="utf-8") as f:
        position = f.tell()
        line = f.readline()
        while line.startswith("#"):
            if line.startswith("# config="):
                header["config"] = ujson.loads(line[len("# config="):])
            else:
                for pair in line[1:].split():
                    key, _, value = pair.partition("=")
                    header[key] = value
            position = f.tell()
            line = f.readline()
        f.seek(position)
        frame = pd.read_csv(f, dtype={"name": str, "alternating": str})
    if list(frame.columns) != SCATTER_COLUMNS:
        raise DataError("{} is not a scatter export, columns {}".format(path, list(frame.columns)))
    for key in ("slope", "intercept", "pearson"):
        if key in header:
            header[key] = float(header[key])
    header["class"] = KnotClass(header["class"]) if "class" in header else KnotClass.ALL
    return header, frame
