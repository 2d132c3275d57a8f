import json

import numpy as np
import pytest
from click.testing import CliRunner

from anosov_liouville import __version__
from anosov_liouville.cli import cli
from anosov_liouville.liouville import BumpProfile
from anosov_liouville.registry import ModelFamily

# linear-Liouville on the cat map suspension, but f_0 + 2 sqrt(f_- f_+) dips below zero where cos(2 pi t) = -1
LIN_ONLY_PAIR = "skewed:A=1|conformal:0.125*sin(2*pi*t)"


@pytest.fixture
def run(tmp_root_dir):
    """Invoke `alv` in a temporary directory. Returns the result and the JSON report, if any."""

    runner = CliRunner()

    def _run(*args):
        report = tmp_root_dir / "report.json"
        if report.exists():
            report.unlink()
        result = runner.invoke(cli, list(args) + ["--out", str(report), "-q"])
        doc = json.loads(report.read_text()) if report.exists() else None
        return result, doc

    return _run


def test_version():
    result = CliRunner().invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_models_list():
    result = CliRunner().invoke(cli, ["models", "list"])
    assert result.exit_code == 0
    for family in ModelFamily:
        assert family.name in result.output


class TestVerify:

    def test_standard(self, run):
        """Test that the standard pair of the cat map suspension passes every check"""

        result, doc = run("verify", "--model", "sol:catmap", "--pair", "standard", "--deterministic")
        assert result.exit_code == 0, result.output
        assert doc["exit_code"] == 0
        assert doc["command"] == "verify"
        assert "timings" not in doc
        assert doc["checks"]["classification"]["AL"]["value"] == pytest.approx(3.8496946005, abs=1e-9)
        assert doc["checks"]["sigma"]["sigma_roundtrip"]["flag"]

    def test_counterexample(self, run):
        """An AL pair that is not linear-Liouville runs fine but exits with 1"""

        result, doc = run("verify", "--pair", "counterexample:A=1", "--grid", "64")
        assert result.exit_code == 1
        assert doc["exit_code"] == 1
        assert doc["checks"]["classification"]["AL"]["flag"]
        assert not doc["checks"]["classification"]["lin_liouville"]["flag"]
        assert not doc["checks"]["reeb"]["reeb_lin"]["flag"]

    def test_csv(self, run, tmp_root_dir):
        result, _ = run("verify", "--model", "sl2", "--csv", "fields.csv")
        assert result.exit_code == 0
        assert (tmp_root_dir / "fields.csv").read_text().startswith("coefficient,value\n")

    def test_config_file(self, run, tmp_root_dir):
        """Test that the command line wins over the configuration file"""

        (tmp_root_dir / "run.yml").write_text("model: sl2\npair: counterexample:A=1\n")
        result, doc = run("verify", "--config", "run.yml", "--pair", "standard")
        assert result.exit_code == 0
        assert doc["config"]["model"] == "sl2"
        assert doc["config"]["pair"] == "standard"


@pytest.mark.parametrize("args, match", [
    (["verify", "--pair", "nope"], "nope"),
    (["verify", "--model", "sol:kappa=-1"], "kappa"),
    (["verify", "--pair", "file:missing.txt"], "missing.txt"),
    (["homotopy", "--pair", "counterexample:A=1", "--grid", "32"], "not linear-Liouville"),
    (["homotopy", "--pair", LIN_ONLY_PAIR, "--grid", "32"], "not Liouville"),
    (["homotopy", "--epsilon", "0.02", "--grid", "32"], "epsilon"),
    (["dump-fields"], "--csv PATH"),
])
def test_could_not_run(run, args, match):
    """Test that errors exit with 2 and an error message, without a report"""

    result, doc = run(*args)
    assert result.exit_code == 2
    assert "Error:" in result.output
    assert match in result.output
    assert doc is None


def test_malformed_pair_file(run, tmp_root_dir):
    (tmp_root_dir / "bad.txt").write_text("this is not a pair file\n")
    result, _ = run("verify", "--model", "sl2", "--pair", "file:bad.txt")
    assert result.exit_code == 2
    assert "bad.txt" in result.output


def test_dump_fields_round_trip(run, tmp_root_dir):
    """A pair dumped to a pair file classifies exactly like the pair it was built from"""

    pair = "skewed:A=0.5|conformal:0.1*sin(2*pi*t)"
    result, doc = run("dump-fields", "--grid", "32", "--pair", pair, "--pair-out", "pair.txt", "--csv", "f.csv")
    assert result.exit_code == 0
    assert doc["sections"]["written"] == {"csv": "f.csv", "pair_file": "pair.txt"}
    assert (tmp_root_dir / "f.csv").read_text().startswith("t,coefficient,value\n")

    _, direct = run("verify", "--grid", "32", "--pair", pair, "--deterministic")
    _, from_file = run("verify", "--grid", "32", "--pair", "file:pair.txt", "--deterministic")
    assert from_file["checks"]["classification"] == direct["checks"]["classification"]
    assert from_file["sections"]["invariants"] == direct["sections"]["invariants"]


def test_homotopy(run):
    result, doc = run("homotopy", "--grid", "32", "--tau-steps", "4", "--s-range", "0:5:64")
    assert result.exit_code == 0
    assert doc["checks"]["precondition"]["liouville"]["flag"]
    assert doc["checks"]["precondition"]["lin_liouville"]["flag"]
    assert doc["checks"]["interpolation"]["density"]["flag"]


def test_homotopy_needs_both_families(run):
    """A linear-Liouville pair that is not Liouville is refused by `homotopy`"""

    result, doc = run("verify", "--grid", "32", "--pair", LIN_ONLY_PAIR)
    assert result.exit_code == 1
    classification = doc["checks"]["classification"]
    assert classification["lin_liouville"]["value"] == pytest.approx(2.9702 - 19.391 * 0.125, abs=1e-3)
    assert classification["liouville"]["value"] == pytest.approx(3.8497 - 38.782 * 0.125, abs=1e-3)

    result, doc = run("homotopy", "--grid", "32", "--pair", LIN_ONLY_PAIR)
    assert result.exit_code == 2
    assert "liouville margin" in result.output
    assert doc is None


def test_homotopy_invalid_profile(run, monkeypatch):
    """A bump profile with a slope above 1 stops `homotopy` with exit code 2"""

    monkeypatch.setattr(BumpProfile, "dphi", lambda self, s: 1.5 * np.ones_like(np.asarray(s, dtype=float)))
    result, doc = run("homotopy", "--grid", "32", "--tau-steps", "4", "--s-range", "0:5:64")
    assert result.exit_code == 2
    assert "phi' <= 1" in result.output
    assert doc is None


def test_dynamics(run):
    result, doc = run("dynamics", "--grid", "32", "--T", "5", "--dt", "0.01", "--rescale", "2")
    assert result.exit_code == 0
    assert doc["sections"]["lyapunov"]["Lambda_u"] == pytest.approx(0.9624236501, abs=1e-6)
    assert doc["checks"]["rescaled"]["c=2"]["flag"]


def test_selftest(run):
    result, doc = run("selftest", "--grid", "32")
    assert result.exit_code == 0
    assert set(doc["checks"]) == set(ModelFamily.all_names())
