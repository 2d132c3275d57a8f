#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Backwards-compatibility shims: the package logger and numpy functions that were renamed.
"""

import logging

import numpy as np
from packaging.version import parse as parse_version

numpy_version = parse_version(np.__version__)
is_numpy_2_or_greater = numpy_version >= parse_version("2.0")

if is_numpy_2_or_greater:
    trapezoid = np.trapezoid
else:  # pragma: no cover
    trapezoid = np.trapz


def getLogger(name=None):
    """Return the package logger, or one of its children."""
    log = logging.getLogger("anosov_liouville" if name is None else f"anosov_liouville.{name}")

    # the verbose method does not exist
    log.verbose = log.debug

    return log
