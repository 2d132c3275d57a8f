import numpy as np
import pytest

from anosov_liouville.constructions import conformal_action
from anosov_liouville.errors import ConfigError, PairFileError
from anosov_liouville.pair_files import format_pair, grid_signature, read_pair_file, write_pair_file


def test_grid_signature(sol, sl2, abelian):
    assert grid_signature(sol) == "t=64"
    assert grid_signature(sl2) == "-"
    assert grid_signature(abelian) == "x=8 y=8 z=8"


def test_write_and_read(tmp_root_dir, sol, sol_standard):
    """A written pair is read back exactly, volume included"""

    pair = conformal_action(sol.field(lambda t: 0.1 * np.sin(2 * np.pi * t)), sol_standard)
    path = tmp_root_dir / "pair.txt"
    assert write_pair_file(path, pair, "sol:catmap")
    assert not write_pair_file(path, pair, "sol:catmap")

    back = read_pair_file(path, sol)
    assert back.sup_distance(pair) == 0
    assert back.dvol.c.sup_distance(pair.dvol.c) == 0


def test_constant_blocks(sol_standard):
    """Constant coefficients are written as a single value"""

    text = format_pair(sol_standard, "sol:catmap")
    assert text.startswith("model: sol:catmap\ngrid: t=64\n[alpha_minus.a0]\n0\n")


def test_comments_and_default_volume(tmp_root_dir, sl2):
    path = tmp_root_dir / "pair.txt"
    path.write_text("""# the standard pair of the geodesic flow
model: sl2
grid: -
[alpha_minus.a0]
0
[alpha_minus.a_s]
1  # theta_s
[alpha_minus.a_u]
1
[alpha_plus.a0]
0
[alpha_plus.a_s]
-1
[alpha_plus.a_u]
1
""")
    pair = read_pair_file(path, sl2)
    assert pair.dvol.c.values == pytest.approx(1.0)
    assert pair.alpha_plus.a_s.values == pytest.approx(-1.0)


HEADER = "model: sol:catmap\ngrid: t=64\n"
BODY = "".join(f"[{b}]\n1\n" for b in ("alpha_minus.a0", "alpha_minus.a_s", "alpha_minus.a_u", "alpha_plus.a0",
                                          "alpha_plus.a_s"))


@pytest.mark.parametrize("text, match", [
    (HEADER + BODY, "missing block"),
    (HEADER + BODY + "[alpha_plus.a_u\n1\n", ":13: unterminated"),
    (HEADER + BODY + "[alpha_plus.a_w]\n1\n", ":13: unknown block"),
    (HEADER + BODY + "[alpha_plus.a_s]\n1\n", ":13: duplicate block"),
    (HEADER + BODY + "[alpha_plus.a_u]\none\n", ":14: non-numeric"),
    (HEADER + BODY + "[alpha_plus.a_u]\n1 2 3\n", ":13: block \\[alpha_plus.a_u\\] has 3 values"),
    ("grid: t=64\n" + BODY, "missing header 'model'"),
    ("model: sol\ngrid: t=32\n" + BODY, "does not match the model grid"),
    ("colour: blue\n" + BODY, ":1: expected a header"),
])
def test_malformed(tmp_root_dir, sol, text, match):
    path = tmp_root_dir / "bad.txt"
    path.write_text(text)
    with pytest.raises(PairFileError, match=match):
        read_pair_file(path, sol)


def test_missing_file(tmp_root_dir, sol):
    with pytest.raises(PairFileError, match="Can not read"):
        read_pair_file(tmp_root_dir / "nope.txt", sol)


def test_is_config_error():
    assert issubclass(PairFileError, ConfigError)
