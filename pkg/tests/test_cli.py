import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from ratlab import schemas
from ratlab.cli import ExperimentConfig, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def validate_lines(text, schema_name):
    schema = schemas.load(schema_name)
    docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    assert docs
    for doc in docs:
        jsonschema.validate(doc, schema)
    return docs


def test_all_schemas_are_valid():
    for name in schemas.NAMES:
        jsonschema.Draft7Validator.check_schema(schemas.load(name))


def test_pairs_csv_and_svg(tmp_path, capsys):
    out, svg = tmp_path / "p.csv", tmp_path / "p.svg"
    code, text = run_cli(capsys, "pairs", "--preset", "fig1", "--alpha", "0.7", "--count", "500",
                         "--out", str(out), "--svg", str(svg))
    assert code == 0
    summary = validate_lines(text, "pairs")[0]
    assert summary["outputs"][0]["rows"] == 500
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.startswith(b"k,w,z\n")
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert len(rows) == 501 and rows[1][0] == "1"
    assert all(0 < float(w) < 0.7 and 0 < float(z) < 0.7 for _, w, z in rows[1:])
    text_svg = svg.read_text()
    assert 'viewBox="0 0 600 600"' in text_svg and text_svg.count('width="1" height="1"') == 500


def test_pairs_several_alphas_get_suffixes(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code, text = run_cli(capsys, "pairs", "--preset", "fig1", "--count", "100", "--out", str(out))
    assert code == 0
    paths = [o["csv"] for o in validate_lines(text, "pairs")[0]["outputs"]]
    assert [p.rsplit("_", 1)[1] for p in paths] == ["a1.csv", "a0.7.csv", "a0.5.csv"]


def test_outputs_are_byte_identical(tmp_path, capsys):
    files = []
    for i in range(2):
        out = tmp_path / f"run{i}.csv"
        run_cli(capsys, "pairs", "--seed", "4", "--bits", "20000", "--alpha", "0.5",
                "--count", "300", "--out", str(out), "--svg", str(tmp_path / f"run{i}.svg"))
        files.append((out.read_bytes(), (tmp_path / f"run{i}.svg").read_bytes()))
    assert files[0] == files[1]
    a = run_cli(capsys, "levy", "--alpha", "1", "0.5", "--k", "300", "--seeds", "3")[1]
    b = run_cli(capsys, "levy", "--alpha", "1", "0.5", "--k", "300", "--seeds", "3")[1]
    assert a == b


def test_worker_count_does_not_change_output(capsys):
    one = run_cli(capsys, "--threads", "1", "ratio", "--alpha", "0.8", "--k", "300", "--seeds", "3")[1]
    two = run_cli(capsys, "--threads", "2", "ratio", "--alpha", "0.8", "--k", "300", "--seeds", "3")[1]
    assert one == two


def test_levy_and_ratio_reports(capsys):
    code, text = run_cli(capsys, "levy", "--alpha", "1", "--k", "500", "--seeds", "3")
    rep = validate_lines(text, "report")[0]
    assert code == 0 and rep["expected"] == pytest.approx(1.186569, abs=1e-6)
    assert rep["seeds"] == [1, 2, 3] and rep["bits"] >= 64 and rep["k"] == 500
    code, text = run_cli(capsys, "ratio", "--alpha", "0.5", "--k", "500", "--seeds", "2",
                         "--first-seed", "10")
    rep = validate_lines(text, "report")[0]
    assert rep["seeds"] == [10, 11] and rep["expected"] == pytest.approx(0.721348, abs=1e-6)


def test_hist_reports(capsys):
    code, text = run_cli(capsys, "dl-hist", "--alpha", "0.5", "--samples", "20000", "--bins", "20")
    rep = validate_lines(text, "report")[0]
    assert code == 0 and sum(rep["counts"]) + rep["outside"] == 20000
    code, text = run_cli(capsys, "pair-hist", "--alpha", "0.7", "--samples", "20000",
                         "--grid", "10")
    reps = validate_lines(text, "report")
    assert {r["variant"] for r in reps} == {"PlainRadical", "AlphaInRadical"}
    assert all(r["oracle_accepted"] == "PlainRadical" for r in reps)


def test_geom_check(capsys):
    code, text = run_cli(capsys, "geom-check", "--alpha", "0.48", "--count", "300")
    rep = validate_lines(text, "geom_check")[0]
    assert rep["agree"] + rep["disagree"] + rep["certified_failures"] == 300
    assert rep["disagree"] == 0


def test_hurwitz_list_and_report(tmp_path, capsys):
    report = tmp_path / "h.json"
    code, text = run_cli(capsys, "hurwitz", "--alpha", "0.44", "--n", "1000",
                         "--report", str(report))
    assert code == 0 and json.loads(text) == [1, 3]
    validate_lines(text, "hurwitz_returns")
    full = validate_lines(report.read_text(), "hurwitz_report")[0]
    assert full["tail"]["outcome"] == "NoReturnWithinCap" and full["bits"] == 3000


def test_library_error_gives_error_json(capsys):
    code, text = run_cli(capsys, "pairs", "--x", "0.25", "--count", "10")
    assert code == 2
    err = validate_lines(text, "error")[0]
    assert err["error"] == "PrecisionExhausted" and isinstance(err["index"], int)


def test_bad_arguments_exit_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["levy", "--alpha", "1.5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["pairs", "--bits", "32"])
    with pytest.raises(ValueError):
        ExperimentConfig("levy", alphas=[0]).validate()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ratlab", "hurwitz", "--alpha", "0.48", "--n", "5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout) == [1, 2, 3, 4, 5]
