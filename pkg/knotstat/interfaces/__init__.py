import os

from ..exceptions import DataError
from .incsv import CsvInterface
from .injson import JsonInterface


INTERFACES = {CsvInterface.format: CsvInterface, JsonInterface.format: JsonInterface}


def interface_for(path, fmt=None):
    """ Picks the interface by explicit format, else by file extension """
    if fmt is None:
        fmt = os.path.splitext(str(path))[1].lstrip(".").lower() or "csv"
    try:
        return INTERFACES[fmt]()
    except KeyError:
        raise DataError(
            "unknown dataset format {!r}, expected one of: {}".format(
                fmt, ", ".join(sorted(INTERFACES))
            )
        )
