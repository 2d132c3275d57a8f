from importlib.metadata import distribution

from packaging.version import Version

import anosov_liouville
from anosov_liouville.registry import ModelFamily


def test_version():
    """The version is a valid version string, also in source checkouts"""

    assert Version(anosov_liouville.__version__) >= Version("0.0.0.dev0")


def test_entry_point():
    """The `alv` console script points to the click group"""

    entry_points = distribution("anosov-liouville").entry_points
    scripts = {ep.name: ep.value for ep in entry_points if ep.group == "console_scripts"}
    assert scripts["alv"] == "anosov_liouville.cli:cli"


def test_model_families_documented():
    """Each model family has a one-line description for `alv models list`"""

    for family in ModelFamily:
        assert family.description
