import json

import pytest
from click.testing import CliRunner

from quarticflex import __version__
from quarticflex._cli import main
from quarticflex._group import NotAGroup


@pytest.fixture
def runner(tmp_path, monkeypatch):
    # Keep configuration files of the working directory out of the tests
    monkeypatch.chdir(tmp_path)
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def test_version(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


class Test_classify:
    def test_table(self, runner):
        result = runner.invoke(main, ["classify", "--a", "3", "--b", "3", "--c", "0"])
        assert result.exit_code == 0, result.output
        assert "table row  IV: 24/0" in result.output
        assert "6_4" in result.output

    def test_json(self, runner):
        args = ["--format", "json", "classify", "--a", "3", "--b", "3", "--c", "0"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["case"] == "IV"
        assert (data["ordinary"], data["hyperflex"]) == (24, 0)
        assert data["params"]["a"] == [3.0, 0.0]
        assert len(data["flexes"]) == 24

    def test_json_is_reproducible(self, runner):
        args = ["--format", "json", "classify", "--a", "3", "--b", "0.5i", "--c", "2i"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == second.exit_code
        assert first.stdout == second.stdout

    def test_csv(self, runner):
        args = ["--format", "csv", "classify", "--a", "6", "--b", "0", "--c", "0"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        header, row = result.stdout.splitlines()
        assert header.startswith("a,b,c,case")
        assert row.startswith("6,0,0,I,0,12")

    def test_singular(self, runner):
        result = runner.invoke(main, ["classify", "--a", "1", "--b", "0", "--c", "0"])
        assert result.exit_code == 2
        assert "a^2-1" in result.output

    def test_invalid_literal(self, runner):
        result = runner.invoke(main, ["classify", "--a", "3 + 2i", "--b", "0", "--c", "0"])
        assert result.exit_code == 1
        assert "invalid complex literal" in result.output

    def test_table_mismatch(self, runner):
        result = runner.invoke(main, ["classify", "--a", "0", "--b", "0", "--c", "0"])
        assert result.exit_code == 4
        assert "6_2" in result.output
        assert "matches no table row" in result.output

    def test_inconsistent_group(self, runner, monkeypatch):
        def classify(*args, **kwargs):
            msg = "orbit of size 3 in a group of order 4"
            raise NotAGroup(msg)

        monkeypatch.setattr("quarticflex._cli.classify", classify)
        result = runner.invoke(main, ["classify", "--a", "3", "--b", "3", "--c", "0"])
        assert result.exit_code == 3
        assert "orbit of size 3" in result.output


class Test_flexes:
    def test_fermat(self, runner, write):
        path = write("fermat.txt", "x^4 + y^4 + z^4\n")
        result = runner.invoke(main, ["flexes", str(path)])
        assert result.exit_code == 0, result.output
        assert "12 flexes, 12 hyperflexes, weight sum 24" in result.output

    def test_json(self, runner, write):
        path = write("quartic.txt", "x^4 + y^4 + z^4 + 3*x^2*y^2 + 3*x^2*z^2")
        result = runner.invoke(main, ["--format", "json", "flexes", str(path)])
        data = json.loads(result.stdout)
        assert data["weight_sum"] == 24
        assert {f["contact_order"] for f in data["flexes"]} == {3}

    def test_not_quartic(self, runner, write):
        path = write("cubic.txt", "x^3 + y^3 + z^3")
        result = runner.invoke(main, ["flexes", str(path)])
        assert result.exit_code == 1
        assert "degree 4" in result.output

    def test_syntax_error(self, runner, write):
        path = write("broken.txt", "x^4 + y^4 +")
        result = runner.invoke(main, ["flexes", str(path)])
        assert result.exit_code == 1
        assert "invalid polynomial" in result.output
        assert "broken.txt" in result.output

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["flexes", "missing.txt"])
        assert result.exit_code == 2


class Test_verify:
    def test_samples(self, runner):
        args = ["--format", "json", "--seed", "3", "verify", "--samples", "2"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        summary = json.loads(result.stdout)
        assert summary["passed"]
        assert summary["seed"] == 3
        assert summary["samples"] == 2
        assert runner.invoke(main, args).stdout == result.stdout

    def test_no_samples(self, runner):
        result = runner.invoke(main, ["verify", "--samples", "0"])
        assert result.exit_code == 0
        assert "3 identities × 0 samples" in result.output
        assert "passed" in result.output


def test_orbits(runner):
    result = runner.invoke(main, ["orbits", "--a", "3", "--b", "3", "--c", "0.5"])
    assert result.exit_code == 0, result.output
    assert "6 orbits, 12 points with nontrivial stabilizer" in result.output


class Test_examples:
    def test_single(self, runner):
        result = runner.invoke(main, ["examples", "--only", "IV(1)"])
        assert result.exit_code == 0, result.output
        assert "IV(1)" in result.output
        assert "24/0" in result.output
        assert "ok" in result.output

    def test_documented(self, runner):
        args = ["--format", "json", "examples", "--only", "IV(2)", "--only", "I(a=0)"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        checks = {check["name"]: check for check in json.loads(result.stdout)}
        assert checks["IV(2)"]["verdict"] == "documented"
        assert checks["IV(2)"]["report"] is None
        assert checks["IV(2)"]["singular"] == ["a^2+b^2+c^2-abc-4"]
        assert checks["I(a=0)"]["verdict"] == "documented"
        assert checks["I(a=0)"]["shapes_match"] is False

    def test_misprinted_representative(self, runner):
        args = ["--format", "json", "examples", "--only", "II(1)"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        (check,) = json.loads(result.stdout)
        assert check["verdict"] == "documented"

    def test_unknown(self, runner):
        result = runner.invoke(main, ["examples", "--only", "V(1)"])
        assert result.exit_code == 2
        assert "unknown example V(1)" in result.output


class Test_configuration:
    def test_output_format(self, runner, write):
        path = write("settings.toml", '[tool.quarticflex.output]\nformat = "json"\n')
        args = ["--config", str(path), "classify", "--a", "3", "--b", "3", "--c", "0"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        assert json.loads(result.stdout)["case"] == "IV"

    def test_local_config_file(self, runner, write):
        write("quarticflex.toml", '[tool.quarticflex.output]\nformat = "csv"\n')
        result = runner.invoke(main, ["classify", "--a", "3", "--b", "3", "--c", "0"])
        assert result.exit_code == 0
        assert result.stdout.startswith("a,b,c,case")

    def test_invalid_tolerance(self, runner, write):
        path = write("settings.toml", "[tool.quarticflex.tolerances]\nlocus = -1\n")
        result = runner.invoke(main, ["--config", str(path), "verify", "--samples", "0"])
        assert result.exit_code == 2
        assert "configuration" in result.output

    def test_invalid_format(self, runner, write):
        path = write("settings.toml", '[tool.quarticflex.output]\nformat = "xml"\n')
        result = runner.invoke(main, ["--config", str(path), "verify", "--samples", "0"])
        assert result.exit_code == 2
        assert "unknown output format 'xml'" in result.output

    def test_tolerance_factor(self, runner):
        args = ["--tol", "0", "classify", "--a", "3", "--b", "3", "--c", "0"]
        assert runner.invoke(main, args).exit_code == 2
