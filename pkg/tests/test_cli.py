import json

import pytest
from click.testing import CliRunner

from app.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def _run(runner, args, tmp_path, name="report.json"):
    out = tmp_path / name
    result = runner.invoke(cli, args + ["--out", str(out)])
    return result, out


def test_field_command(runner, tmp_path):
    result, out = _run(runner, ["field", "--p", "3", "--m", "5"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["q"] == 243
    assert report["modulus"][-1] == 1


def test_field_rejects_even_prime(runner):
    result = runner.invoke(cli, ["field", "--p", "2", "--m", "5"])
    assert result.exit_code == 2
    assert "p must be an odd prime" in result.output


def test_wd_closed_form(runner, tmp_path):
    result, out = _run(runner, ["wd", "--p", "3", "--m", "7", "--k", "2", "--method", "closed"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["method"] == "closed"
    assert {e["w"]: e["freq"] for e in report["weights"]} == {
        0: "1",
        1296: "8951670",
        1404: "1732767876",
        1458: "7102473578",
        1512: "1608998742",
        1620: "7161336",
    }


def test_wd_closed_form_csv(runner, tmp_path):
    result, out = _run(runner, ["wd", "--p", "3", "--m", "5", "--k", "1", "--method", "closed", "--format", "csv"],
                       tmp_path, name="wd.csv")
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "weight,frequency"
    assert lines[1] == "0,1"
    assert lines[2] == "108,14520"


def test_wd_is_deterministic(runner, tmp_path):
    args = ["wd", "--p", "5", "--m", "5", "--k", "1", "--method", "closed"]
    first, out_a = _run(runner, args, tmp_path, name="a.json")
    second, out_b = _run(runner, args, tmp_path, name="b.json")
    assert first.exit_code == second.exit_code == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_wd_rejects_even_m(runner):
    result = runner.invoke(cli, ["wd", "--p", "3", "--m", "6", "--k", "1", "--method", "closed"])
    assert result.exit_code == 2
    assert "even" in result.output


def test_wd_exact_over_budget(runner):
    result = runner.invoke(cli, ["wd", "--p", "3", "--m", "7", "--k", "2", "--method", "exact", "--jobs", "1"])
    assert result.exit_code == 3
    assert "--budget" in result.output


def test_wd_unknown_method(runner):
    result = runner.invoke(cli, ["wd", "--p", "3", "--m", "5", "--k", "1", "--method", "guess"])
    assert result.exit_code == 2


def test_wd_sampled(runner, tmp_path):
    result, out = _run(runner, ["wd", "--p", "3", "--m", "7", "--k", "2", "--method", "sampled",
                                "--samples", "2000", "--seed", "9"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["samples"] == 2000
    assert report["seed"] == 9
    assert sum(int(e["freq"]) for e in report["weights"]) == 2000


def test_s_dist_sampled_with_rank(runner, tmp_path):
    result, out = _run(runner, ["s-dist", "--p", "3", "--m", "7", "--k", "2", "--method", "sampled",
                                "--samples", "3000", "--rank"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert {e["s"] for e in report["values"]} <= {2187, 0, 81, -81, 243, -243}
    assert all(3 <= e["rank"] <= 7 for e in report["ranks"])


def test_verify_examples(runner, tmp_path):
    result, out = _run(runner, ["verify", "--which", "examples"], tmp_path)
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["passed"] is True


def test_verify_n3(runner, tmp_path):
    result, out = _run(runner, ["verify", "--which", "n3", "--p", "3", "--m", "5", "--k", "1"], tmp_path)
    assert result.exit_code == 0, result.output
    record = json.loads(out.read_text())["reports"][0]
    assert record["lemma"] == "N3"
    assert record["computed"] == "969"


def test_verify_needs_parameters(runner):
    result = runner.invoke(cli, ["verify", "--which", "n3"])
    assert result.exit_code == 2


def test_verify_appendix(runner, tmp_path):
    result, out = _run(runner, ["verify", "--which", "appendix", "--p", "3", "--m", "5", "--k", "1",
                                "--samples", "20"], tmp_path)
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["passed"] is True


def test_verify_csv(runner, tmp_path):
    result, out = _run(runner, ["verify", "--which", "lemmas", "--p", "3", "--m", "5", "--k", "1",
                                "--format", "csv"], tmp_path, name="lemmas.csv")
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "lemma,computed,predicted,match"
    assert lines[2] == "N3,969,969,True"


def test_tables_command(runner, tmp_path):
    result, out = _run(runner, ["tables", "--p", "3", "--m", "5"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["parameters"] == [242, 15, 108]
    assert report["enumerator"].startswith("1+14520z^108+")
    assert report["frequency_system"] == ["2548260", "2038608", "14520", "7260"]


def test_tables_general_e(runner, tmp_path):
    result, out = _run(runner, ["tables", "--p", "3", "--m", "10", "--e", "2"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert report["moments"] is None
    assert sum(int(r["freq"]) for r in report["weights"]) == 3 ** 30


def test_tables_reject_even_ratio(runner):
    result = runner.invoke(cli, ["tables", "--p", "3", "--m", "8", "--e", "2"])
    assert result.exit_code == 2


def test_stdout_output(runner):
    result = runner.invoke(cli, ["tables", "--p", "5", "--m", "5"])
    assert result.exit_code == 0
    assert '"enumerator": "1+1218360z^2000+' in result.output
    assert '"parameters"' in result.output


@pytest.mark.slow
def test_wd_verify_c351(runner, tmp_path):
    result, out = _run(runner, ["wd", "--p", "3", "--m", "5", "--k", "1", "--method", "verify", "--jobs", "2"],
                       tmp_path)
    assert result.exit_code == 0, result.output
    assert json.loads(out.read_text())["method"] == "verify"


@pytest.mark.slow
def test_wd_exact_is_byte_identical_across_jobs(runner, tmp_path):
    args = ["wd", "--p", "3", "--m", "5", "--k", "1", "--method", "exact"]
    single, out_a = _run(runner, args + ["--jobs", "1"], tmp_path, name="one.json")
    pooled, out_b = _run(runner, args + ["--jobs", "2"], tmp_path, name="two.json")
    wide, out_c = _run(runner, args + ["--jobs", "8"], tmp_path, name="eight.json")
    assert single.exit_code == pooled.exit_code == wide.exit_code == 0
    assert out_a.read_bytes() == out_b.read_bytes() == out_c.read_bytes()


def test_non_integer_jobs_environment(runner):
    result = runner.invoke(cli, ["wd", "--p", "3", "--m", "5", "--k", "1", "--method", "closed"],
                           env={"CWDW_JOBS": "four"})
    assert result.exit_code == 2
    assert "CWDW_JOBS" in result.output


def test_s_dist_general_e_with_rank(runner, tmp_path):
    result, out = _run(runner, ["s-dist", "--p", "3", "--m", "10", "--k", "2", "--mode", "t3",
                                "--method", "sampled", "--samples", "300", "--rank"], tmp_path)
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())
    assert {e["s"] for e in report["values"]} <= {3 ** 10, 0, 729, -729, 6561, -6561}
    assert all(e["rank"] % 2 == 0 for e in report["ranks"])
