import pytest

from anosov_liouville.utils import gen_repr, get_md5sum, write_if_changed


class _Point:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y


class TestGenRepr:

    @pytest.mark.parametrize("kwargs, expected", [
        (dict(), "_Point(x=1,y='a')"),
        (dict(show="x"), "_Point(x=1)"),
        (dict(hide=("x",)), "_Point(y='a')"),
    ])
    def test_repr(self, kwargs, expected):
        """Test that the generated repr shows the expected attributes"""

        assert gen_repr(**kwargs)(_Point(1, "a")) == expected

    def test_show_and_hide(self):
        with pytest.raises(ValueError):
            gen_repr(show="x", hide="y")


class TestWriteIfChanged:

    def test_behavior(self, tmp_root_dir):
        """Test that the file is only touched when its contents change"""

        target = tmp_root_dir / "sub" / "report.json"
        assert write_if_changed(target, "{}\n")
        md5 = get_md5sum(target)
        assert not write_if_changed(target, "{}\n")
        assert get_md5sum(target) == md5
        assert write_if_changed(str(target), "[]\n")
        assert target.read_text() == "[]\n"
        assert not (tmp_root_dir / "sub" / "report.json.new").exists()
