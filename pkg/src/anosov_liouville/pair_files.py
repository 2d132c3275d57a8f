#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Pair files
==========

A plain-text coefficient table describing a `ContactFormPair` on the grid of a model::

    # any comment
    model: sol:catmap
    grid: t=256
    [alpha_minus.a0]
    0
    [alpha_minus.a_s]
    1 1 1 ...
    ...
    [alpha_plus.a_u]
    1
    [dvol.c]
    1

Every block holds the samples of one coframe coefficient, in C order, one row per line of the last grid axis. A block
with a single value is a constant. The `[dvol.c]` block is optional and defaults to the coframe volume.
"""

from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from . import compat
from .criteria import ContactFormPair
from .errors import PairFileError
from .forms import OneForm, ThreeForm
from .frames import FrameManifold, ScalarField
from .utils import write_if_changed

logger = compat.getLogger("pair_files")

BLOCKS = (
    "alpha_minus.a0",
    "alpha_minus.a_s",
    "alpha_minus.a_u",
    "alpha_plus.a0",
    "alpha_plus.a_s",
    "alpha_plus.a_u",
)
OPTIONAL_BLOCKS = ("dvol.c",)
HEADERS = ("model", "grid")


def grid_signature(manifold: FrameManifold) -> str:
    """`t=256`, `x=16 y=16 z=16`, or `-` for models without grid axes."""
    grid = manifold.grid
    return " ".join(f"{name}={n}" for name, n in zip(grid.axes, grid.shape)) or "-"


def _parse(text: str, source: str) -> Tuple[Dict[str, str], Dict[str, Tuple[int, List[float]]]]:
    headers: Dict[str, str] = {}
    blocks: Dict[str, Tuple[int, List[float]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise PairFileError(f"{source}:{lineno}: unterminated block name {line!r}")
            current = line[1:-1].strip()
            if current not in BLOCKS + OPTIONAL_BLOCKS:
                known = BLOCKS + OPTIONAL_BLOCKS
                raise PairFileError(f"{source}:{lineno}: unknown block {current!r}. Known blocks: {known}")
            if current in blocks:
                raise PairFileError(f"{source}:{lineno}: duplicate block {current!r}")
            blocks[current] = (lineno, [])
        elif current is None:
            key, sep, value = line.partition(":")
            if not sep or key.strip() not in HEADERS:
                raise PairFileError(f"{source}:{lineno}: expected a header 'model: ...' or 'grid: ...', got {line!r}")
            headers[key.strip()] = value.strip()
        else:
            try:
                blocks[current][1].extend(float(v) for v in line.split())
            except ValueError:
                raise PairFileError(f"{source}:{lineno}: non-numeric value in block [{current}]: {line!r}")
    return headers, blocks


def read_pair_file(path: Union[str, Path], manifold: FrameManifold) -> ContactFormPair:
    """Read a pair file for `manifold`.

    Raises
    ------
    PairFileError
        If the file can not be read, is malformed, or was written for another grid.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise PairFileError(f"Can not read pair file {path}: {e}") from e

    headers, blocks = _parse(text, str(path))
    for key in HEADERS:
        if key not in headers:
            raise PairFileError(f"{path}: missing header {key!r}")
    expected = grid_signature(manifold)
    if headers["grid"].split() != expected.split():
        raise PairFileError(f"{path}: file grid '{headers['grid']}' does not match the model grid '{expected}'")
    missing = [b for b in BLOCKS if b not in blocks]
    if missing:
        raise PairFileError(f"{path}: missing block(s) {missing}")

    fields = {}
    for name, (lineno, values) in blocks.items():
        if len(values) not in (1, manifold.grid.size):
            raise PairFileError(
                f"{path}:{lineno}: block [{name}] has {len(values)} values, expected 1 or {manifold.grid.size}"
            )
        array = np.array(values[0]) if len(values) == 1 else np.array(values).reshape(manifold.grid.shape)
        fields[name] = ScalarField(array, manifold)

    alpha_minus = OneForm(*(fields[f"alpha_minus.{c}"] for c in ("a0", "a_s", "a_u")))
    alpha_plus = OneForm(*(fields[f"alpha_plus.{c}"] for c in ("a0", "a_s", "a_u")))
    dvol = ThreeForm(fields["dvol.c"]) if "dvol.c" in fields else None
    logger.debug("read pair file %s (model %s)", path, headers["model"])
    return ContactFormPair(alpha_minus, alpha_plus, dvol)


def _format_field(field: ScalarField) -> str:
    if field.is_constant():
        return "%.17g" % float(field.values.flat[0])
    values = field.values.reshape(-1, field.values.shape[-1])
    return "\n".join(" ".join("%.17g" % v for v in row) for row in values)


def format_pair(pair: ContactFormPair, model_spec: str) -> str:
    """The contents of the pair file describing `pair`."""
    lines = [f"model: {model_spec}", f"grid: {grid_signature(pair.manifold)}"]
    for name, form in (("alpha_minus", pair.alpha_minus), ("alpha_plus", pair.alpha_plus)):
        for coef, field in zip(("a0", "a_s", "a_u"), form.components):
            lines += [f"[{name}.{coef}]", _format_field(field)]
    lines += ["[dvol.c]", _format_field(pair.dvol.c)]
    return "\n".join(lines) + "\n"


def write_pair_file(path: Union[str, Path], pair: ContactFormPair, model_spec: str) -> bool:
    """Write `pair` to `path`. Returns `True` if the file changed."""
    return write_if_changed(path, format_pair(pair, model_spec))
