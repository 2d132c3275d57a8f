#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Utilities
=========

Miscellaneous utilities: slotted-class reprs and change-aware file writing.
"""

import hashlib
import os
from pathlib import Path
from shutil import move
from typing import Iterable, Union

from . import compat

logger = compat.getLogger("utils")


def gen_repr(hide: Union[str, Iterable] = (), show: Union[str, Iterable] = ()):
    """
    Generate a repr for a slotted class with either a list of shown or hidden attr names.

    Parameters
    ----------
    hide
    show

    Returns
    -------
    __repr__ : Callable
        The generated repr implementation
    """
    if show and hide:
        raise ValueError("Either provide show or hide")

    if isinstance(show, str):
        show = (show,)

    if isinstance(hide, str):
        hide = (hide,)

    def __repr__(self):
        show_ = self.__slots__ if not show else show

        attrs = ",".join("%s=%r" % (k, getattr(self, k)) for k in show_ if k not in hide)
        return "%s(%s)" % (type(self).__name__, attrs)

    return __repr__


def get_md5sum(file: Path) -> str:
    """Return the md5 of the binary contents of `file`."""
    return hashlib.md5(Path(file).read_bytes()).hexdigest()


def _new_file(file: Path) -> Path:
    """Return the same file path with a .new additional extension."""
    return file.with_suffix(f"{file.suffix}.new")


def write_if_changed(file: Union[str, Path], contents: str) -> bool:
    """Write `contents` to `file` through a `.new` sibling, touching `file` only if its md5 changes.

    Returns `True` if `file` was (re)written.
    """
    file = Path(file).absolute()
    file.parent.mkdir(parents=True, exist_ok=True)
    file_new = _new_file(file)
    with open(file_new, "w", encoding="utf-8", newline="\n") as f:
        f.write(contents)

    if file.exists() and get_md5sum(file) == get_md5sum(file_new):
        # Shortcut: destination is already identical, just delete the source
        os.remove(file_new)
        logger.debug("%s is up to date", file)
        return False

    move(str(file_new), file)
    logger.debug("wrote %s", file)
    return True
