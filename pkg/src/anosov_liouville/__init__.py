#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
try:
    # -- Distribution mode --
    # import from _version.py generated by setuptools_scm during release
    from ._version import version as __version__
except ImportError:
    # -- Source mode --
    # use setuptools_scm to get the current version from src using git
    try:
        from os import path as _path

        from setuptools_scm import get_version as _gv

        __version__ = _gv(_path.join(_path.dirname(__file__), _path.pardir, _path.pardir))
    except Exception:  # not a git checkout
        __version__ = "0.0.0.dev0"


__all__ = [
    "__version__",
    # submodules
    "frames",
    "forms",
    "criteria",
    "constructions",
    "liouville",
    "dynamics",
    "cli",
]
