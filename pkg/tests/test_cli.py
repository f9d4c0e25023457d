import json

import pytest
from click.testing import CliRunner

from src import __version__
from src.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


class TestVerify:
    def test_passes(self, runner):
        result = runner.invoke(cli, ["verify"])
        assert result.exit_code == 0, result.output
        assert "identities passed" in result.output
        assert "PASS  F^2 = I" in result.output


class TestEval:
    def test_exact_word(self, runner):
        result = runner.invoke(cli, ["eval", "3 2 1 1 2 3"])
        assert result.exit_code == 0, result.output
        assert "length 6" in result.output
        assert '"leakage_free": true' in result.output

    def test_named_braid(self, runner):
        result = runner.invoke(cli, ["eval", "Delta"])
        assert result.exit_code == 0, result.output
        assert "length 15" in result.output

    def test_float_three_strands(self, runner):
        result = runner.invoke(cli, ["eval", "1 2", "--strands", "3", "--backend", "float"])
        assert result.exit_code == 0, result.output
        assert "leakage_free" not in result.output

    def test_bad_words(self, runner):
        assert runner.invoke(cli, ["eval", "1 x"]).exit_code == 2
        assert runner.invoke(cli, ["eval", "5", "--strands", "3"]).exit_code == 2
        assert runner.invoke(cli, ["eval", "Delta", "--strands", "3"]).exit_code == 2


class TestSearch:
    @pytest.fixture(autouse=True)
    def workdir(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)

    def test_writes_results(self, runner, tmp_path):
        out = tmp_path / "results.jsonl"
        result = runner.invoke(
            cli, ["search", "--max-len", "1", "--shards", "1", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "leakage-free gates: 8" in result.output
        lines = out.read_text().splitlines()
        assert json.loads(lines[-1])["summary"]["words_visited"] == 10

    def test_yaml_config_with_flag_override(self, runner, tmp_path):
        config = tmp_path / "search.yaml"
        config.write_text("max_length: 3\nshards: 1\nnormalize_commuting: true\n")
        result = runner.invoke(cli, ["search", "--config", str(config), "--max-len", "1"])
        assert result.exit_code == 0, result.output
        assert '"max_length": 1' in result.output

    def test_invalid_option(self, runner):
        result = runner.invoke(cli, ["search", "--max-len", "0", "--shards", "1"])
        assert result.exit_code == 2


class TestApproximate:
    def test_converges(self, runner, tmp_path):
        trace = tmp_path / "trace.jsonl"
        program = tmp_path / "word.txt"
        result = runner.invoke(
            cli, ["approximate", "--trace", str(trace), "--emit-word", str(program)]
        )
        assert result.exit_code == 0, result.output
        assert "diagonal entangling gap" in result.output
        assert "density witnesses" in result.output
        first = json.loads(trace.read_text().splitlines()[0])
        assert first["k"] == 0
        assert "# k = " in program.read_text()

    def test_convergence_failure_writes_trace(self, runner, tmp_path):
        trace = tmp_path / "trace.jsonl"
        result = runner.invoke(cli, ["approximate", "--max-iter", "2", "--trace", str(trace)])
        assert result.exit_code == 1
        assert len(trace.read_text().splitlines()) == 3

    def test_precondition_failure(self, runner):
        result = runner.invoke(cli, ["approximate", "--d-word", "2"])
        assert result.exit_code == 1
        assert "precondition failed" in result.output


def test_info(runner):
    result = runner.invoke(cli, ["info"])
    assert result.exit_code == 0, result.output
    assert "tau x tau = 1 + tau" in result.output
    assert "0:|NC>" in result.output


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert __version__ in result.output
