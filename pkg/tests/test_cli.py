import csv
import io
import json

import pytest

from jintegral.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_special_t2(capsys):
    code, out, _ = run(capsys, "special", "--t", "2")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["checks"][0]["values"]["value"].startswith("0.25304569056671431285537928737")


def test_j_hyper_json(capsys):
    code, out, _ = run(capsys, "j-hyper", "--alpha", "0.1", "--digits", "30")
    rec = json.loads(out)["checks"][0]
    assert code == EXIT_OK
    assert rec["err_bound"] < 1e-25
    assert rec["values"]["method"] == "closed-form-5F4"


def test_complex_alpha(capsys):
    code, out, _ = run(capsys, "j-hyper", "--alpha", "0.03+0.02i", "--format", "plain")
    assert code == EXIT_OK and "j" in out


def test_csv_format(capsys):
    code, out, _ = run(capsys, "j-lattice", "--v", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert rows[0]["name"] == "j-lattice" and rows[0]["passed"] == "True"


@pytest.mark.parametrize(
    "argv",
    [
        ["j-direct", "--t", "2.5", "--grid-order", "16", "--panels", "2"],
        ["j-direct", "--t", "2.05", "--rule", "tanh-sinh"],
        ["g", "--t", "3"],
        ["g", "--t", "3", "--route", "direct"],
        ["mahler", "--family", "P5", "--param", "5", "--grid-order", "32"],
        ["special", "--t", "5/2"],
        ["j-lattice", "--v", "2", "--cutoff-radius", "1000"],
    ],
)
def test_subcommands(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "plain")
    assert code == EXIT_OK
    assert out.startswith(argv[0])


def test_domain_error_is_usage(capsys):
    code, _, err = run(capsys, "j-direct", "--t", "1.5")
    assert code == EXIT_USAGE and "t must be" in err
    code, _, _ = run(capsys, "j-hyper", "--alpha", "0.2")
    assert code == EXIT_USAGE


def test_bad_flags_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["j-hyper", "--alpha", "0.1", "--digits", "5"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == EXIT_USAGE


def test_numerical_failure_exit_one(capsys):
    code, _, err = run(capsys, "j-lattice", "--v", "1", "--cutoff-radius", "16")
    assert code == EXIT_FAIL and "CutoffError" in err


def test_env_digits(capsys, monkeypatch):
    monkeypatch.setenv("JINTEGRAL_DIGITS", "20")
    _, out, _ = run(capsys, "special", "--t", "2")
    assert json.loads(out)["meta"]["digits"] == 20
    _, out, _ = run(capsys, "special", "--t", "2", "--digits", "25")
    assert json.loads(out)["meta"]["digits"] == 25


def test_verify_subset_and_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--only", "4,7", "--out", str(path))
    assert code == EXIT_OK and out == ""
    report = json.loads(path.read_text())
    assert {c["criterion"] for c in report["checks"]} == {4, 7}
    assert report["meta"]["all_passed"] is True
    assert set(report["runtime"]["wall_seconds"]) == {"4", "7"}


def test_verify_unknown_criterion(capsys):
    code, _, _ = run(capsys, "verify", "--only", "12")
    assert code == EXIT_USAGE


def test_reports_deterministic(capsys):
    reports = []
    for _ in range(2):
        _, out, _ = run(capsys, "verify", "--only", "5,6")
        report = json.loads(out)
        report.pop("runtime")
        reports.append(json.dumps(report, sort_keys=True))
    assert reports[0] == reports[1]
