#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Reports
=======

The JSON document written by every `alv` command, and the CSV dumps of sampled fields.

A report is a mapping with the keys `schema` (always `alv-report/1`), `command`, `version`, `config` (the validated
configuration), `checks` (margins grouped by check), `sections` (free-form results such as invariant summaries,
Reeb pairings or dynamics estimates), `exit_code` and, unless the report is deterministic, `timings`. Keys are
sorted and non-finite numbers are written as the strings `"inf"`, `"-inf"` and `"nan"`.
"""

import csv
import io
import json
import math
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from . import __version__, compat
from .criteria import Margin, MarginReport
from .frames import ScalarField
from .utils import gen_repr, write_if_changed

logger = compat.getLogger("report")

SCHEMA = "alv-report/1"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, Path):
        return str(value)
    return value


def summarize_field(field: ScalarField) -> Dict[str, Any]:
    """`min`, `max` and where the minimum is attained."""
    return {"min": field.min(), "max": field.max(), "argmin": field.manifold.grid.point(field.argmin())}


class ReportDocument:
    """The results of one command: the checks that decide the exit code, and everything else worth keeping."""

    __slots__ = ("command", "config", "checks", "sections", "timings")

    __repr__ = gen_repr(show=("command",))

    def __init__(self, command: str, config: Dict[str, Any]):
        self.command = command
        self.config = config
        self.checks: Dict[str, Dict[str, Margin]] = {}
        self.sections: Dict[str, Any] = {}
        self.timings: Dict[str, float] = {}

    def add_checks(self, group: str, margins: Union[MarginReport, Margin, Dict[str, Margin]]):
        """Record margins under `group`; they all take part in the exit code."""
        if isinstance(margins, Margin):
            margins = {margins.name: margins}
        elif isinstance(margins, MarginReport):
            margins = margins.margins
        self.checks.setdefault(group, {}).update(margins)

    def add_section(self, name: str, data: Any):
        self.sections[name] = data

    @contextmanager
    def timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = time.perf_counter() - start
            logger.debug("%s took %.3fs", stage, self.timings[stage])

    def failed_checks(self):
        return [f"{group}.{name}" for group, ms in self.checks.items() for name, m in ms.items() if not m.flag]

    @property
    def exit_code(self) -> int:
        """0 when every check passes, 1 when the command ran but some margin is negative or undecided."""
        return EXIT_NEGATIVE if self.failed_checks() else EXIT_OK

    def to_dict(self, deterministic: bool = False) -> Dict[str, Any]:
        doc = {
            "schema": SCHEMA,
            "command": self.command,
            "version": __version__,
            "config": self.config,
            "checks": {g: {n: m.to_dict() for n, m in ms.items()} for g, ms in self.checks.items()},
            "sections": self.sections,
            "exit_code": self.exit_code,
        }
        if not deterministic:
            doc["timings"] = self.timings
        return _jsonable(doc)

    def to_json(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def write(self, path: Union[str, Path], deterministic: bool = False) -> bool:
        """Write the JSON document to `path`. Returns `True` if the file changed."""
        changed = write_if_changed(path, self.to_json(deterministic))
        logger.info("report %s %s", path, "written" if changed else "unchanged")
        return changed


def format_fields_csv(fields: Dict[str, ScalarField]) -> str:
    """One row per grid point and field, with the header `coord..., coefficient, value`."""
    if not fields:
        raise ValueError("No field to dump")
    grid = next(iter(fields.values())).manifold.grid
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(grid.axes) + ["coefficient", "value"])
    mesh = grid.mesh()
    coords = [np.broadcast_to(mesh[a], grid.shape).ravel() for a in grid.axes]
    for name, field in fields.items():
        values = np.broadcast_to(field.values, grid.shape).ravel()
        for i, value in enumerate(values):
            writer.writerow(["%.17g" % c[i] for c in coords] + [name, "%.17g" % value])
    return buffer.getvalue()


def write_fields_csv(path: Union[str, Path], fields: Dict[str, ScalarField]) -> bool:
    return write_if_changed(path, format_fields_csv(fields))
