"""Tests for the command-line interface and CSV ingestion."""

import json

import numpy as np
import pytest

from spectest.cli import ingest_csv, main
from spectest.errors import NonNumeric, RaggedRows, TooShort


def write_noise_csv(path, n=120, r=3, seed=5, header=None):
    rng = np.random.default_rng(seed)
    data = rng.standard_normal((n, r))
    names = header or [f"x{i + 1}" for i in range(r)]
    lines = [",".join(names)]
    for row in data:
        lines.append(",".join(f"{v:.10f}" for v in row))
    path.write_text("\n".join(lines) + "\n")
    return data


# ------------------------------------------------------------- ingestion


def test_ingest_roundtrip_and_demeaning(tmp_path):
    csv_path = tmp_path / "a.csv"
    data = write_noise_csv(csv_path)
    demeaned = ingest_csv(str(csv_path))
    assert demeaned.shape == (120, 3)
    assert np.allclose(demeaned.mean(axis=0), 0.0, atol=1e-12)
    raw = ingest_csv(str(csv_path), demean=False)
    assert np.allclose(raw, data, atol=1e-9)


def test_ingest_names_ragged_row(tmp_path):
    csv_path = tmp_path / "ragged.csv"
    lines = ["a,b"] + ["0.1,0.2"] * 60
    lines[39] = "0.1"  # file row 40 loses a cell
    csv_path.write_text("\n".join(lines) + "\n")
    with pytest.raises(RaggedRows, match="row 40"):
        ingest_csv(str(csv_path))


def test_ingest_names_bad_cell(tmp_path):
    csv_path = tmp_path / "bad.csv"
    lines = ["alpha,beta"] + ["0.5,1.5"] * 20
    lines[7] = "0.5,oops"
    csv_path.write_text("\n".join(lines) + "\n")
    with pytest.raises(NonNumeric, match=r"row 8, column 2 \(beta\)"):
        ingest_csv(str(csv_path))


def test_ingest_rejects_short_and_empty_files(tmp_path):
    short = tmp_path / "short.csv"
    short.write_text("a,b\n1,2\n3,4\n")
    with pytest.raises(TooShort):
        ingest_csv(str(short))
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(TooShort):
        ingest_csv(str(empty))


def test_ingest_rejects_non_finite(tmp_path):
    csv_path = tmp_path / "inf.csv"
    lines = ["a,b"] + ["0.5,1.5"] * 20
    lines[3] = "inf,1.0"
    csv_path.write_text("\n".join(lines) + "\n")
    with pytest.raises(NonNumeric):
        ingest_csv(str(csv_path))


# --------------------------------------------------------------- test cmd


def test_cli_test_happy_path(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=200, r=3)
    code = main(["test", "--input", str(csv_path), "--m", "16"])
    out, err = capsys.readouterr()
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "test"
    assert doc["hypothesis"] == "independence"
    assert doc["variant"] == "full"
    assert doc["kind"] == "kl"
    assert doc["m"] == 16
    assert doc["n"] == 200
    assert doc["demean"] is True
    assert 0.0 <= doc["p_value"] <= 1.0
    assert isinstance(doc["reject"], bool)
    assert err.startswith(("REJECT,", "RETAIN,"))
    assert "T-hat" in err and "p =" in err and "m = 16" in err


def test_cli_test_is_byte_deterministic(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=150, r=2, seed=9)
    main(["test", "--input", str(csv_path), "--m", "12"])
    first = capsys.readouterr().out
    main(["test", "--input", str(csv_path), "--m", "12"])
    second = capsys.readouterr().out
    assert first == second


def test_cli_test_output_file(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=128, r=2, seed=11)
    out_path = tmp_path / "report.json"
    code = main(["test", "--input", str(csv_path), "--m", "12", "--output", str(out_path)])
    out, err = capsys.readouterr()
    assert code == 0
    assert out == ""
    doc = json.loads(out_path.read_text())
    assert doc["m"] == 12
    assert err.startswith(("REJECT,", "RETAIN,"))


def test_cli_test_cvll_and_variants(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=128, r=2, seed=13)
    code = main(["test", "--input", str(csv_path), "--cvll", "--stat", "block", "--kind", "j"])
    out, _ = capsys.readouterr()
    assert code == 0
    doc = json.loads(out)
    assert doc["bandwidth"] == "cvll"
    assert doc["variant"] == "block"
    assert doc["kind"] == "j"
    assert doc["m"] >= 2


def test_cli_test_graphical(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=200, r=3, seed=15)
    code = main(
        ["test", "--input", str(csv_path), "--m", "16",
         "--hypothesis", "graphical", "--edges", "1-2,2-3"]
    )
    out, _ = capsys.readouterr()
    assert code == 0
    assert json.loads(out)["hypothesis"] == "graphical"


def test_cli_test_constant_column_forces_rejection(tmp_path, capsys):
    csv_path = tmp_path / "const.csv"
    lines = ["a,b"] + [f"5.0,{v:.6f}" for v in np.random.default_rng(3).standard_normal(64)]
    csv_path.write_text("\n".join(lines) + "\n")
    code = main(["test", "--input", str(csv_path), "--m", "8"])
    out, err = capsys.readouterr()
    doc = json.loads(out)
    assert code == 2
    assert doc["forced_reject"] is True
    assert doc["p_value"] == 0.0
    assert err.startswith("REJECT,")


def test_cli_data_errors_exit_one(tmp_path, capsys):
    ragged = tmp_path / "r.csv"
    lines = ["a,b"] + ["0.1,0.2"] * 60
    lines[39] = "0.1"
    ragged.write_text("\n".join(lines) + "\n")
    assert main(["test", "--input", str(ragged), "--m", "8"]) == 1
    assert "row 40" in capsys.readouterr().err
    assert main(["test", "--input", str(tmp_path / "missing.csv"), "--m", "8"]) == 1
    assert "error" in capsys.readouterr().err


# ------------------------------------------------------------ usage errors


def test_cli_usage_errors_exit_64(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=64, r=2)
    cases = [
        [],
        ["test"],
        ["test", "--input", str(csv_path)],  # neither --m nor --cvll
        ["test", "--input", str(csv_path), "--m", "7"],  # odd span
        ["test", "--input", str(csv_path), "--m", "8", "--cvll"],  # both
        ["test", "--input", str(csv_path), "--m", "8", "--stat", "banana"],
        ["test", "--input", str(csv_path), "--m", "8", "--hypothesis", "graphical"],  # no edges
        ["frobnicate"],
    ]
    for argv in cases:
        assert main(argv) == 64, argv
        capsys.readouterr()


# ---------------------------------------------------------------- others


def test_cli_kernel_constants_line(capsys):
    assert main(["kernel-constants"]) == 0
    out, _ = capsys.readouterr()
    assert out == "Cu=0.5 Du=0.333333 Bu=1.0\n"


def test_cli_cvll_command(tmp_path, capsys):
    csv_path = tmp_path / "w.csv"
    write_noise_csv(csv_path, n=96, r=2, seed=21)
    code = main(["cvll", "--input", str(csv_path)])
    out, err = capsys.readouterr()
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,score"
    assert len(lines) > 2
    assert err.startswith("selected m = ")
    chosen = int(err.split("=")[1])
    assert str(chosen) in {line.split(",")[0] for line in lines[1:]}


def test_cli_simulate_null(tmp_path, capsys):
    out_path = tmp_path / "null.csv"
    code = main(
        ["simulate-null", "--n", "64", "--m", "8", "--reps", "100",
         "--seed", "3", "--output", str(out_path)]
    )
    _, err = capsys.readouterr()
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "variant,n,m,stat,mean,var,skew,kurt,q95,size"
    assert len(lines) == 4  # full, quadratic, block
    manifest = json.loads((tmp_path / "null.csv.manifest.json").read_text())
    assert manifest["seed"] == 3
    assert "content_hash" in manifest


def test_cli_simulate_null_stdout_and_manifest_on_stderr(capsys):
    code = main(["simulate-null", "--n", "64", "--m", "8", "--reps", "100",
                 "--stat", "full", "--seed", "1"])
    out, err = capsys.readouterr()
    assert code == 0
    assert out.splitlines()[0] == "variant,n,m,stat,mean,var,skew,kurt,q95,size"
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["config"]["command"] == "simulate-null"


def test_cli_simulate_power(tmp_path, capsys):
    out_path = tmp_path / "power.csv"
    code = main(
        ["simulate-power", "--phi1", "0.8", "--n", "64", "--m", "8",
         "--reps", "100", "--seed", "7", "--stat", "full", "--output", str(out_path)]
    )
    capsys.readouterr()
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "variant,n,m,stat,mean,var,skew,kurt,q95,power"
    row = lines[1].split(",")
    assert row[0] == "full"
    assert 0.0 <= float(row[-1]) <= 1.0
    manifest = json.loads((tmp_path / "power.csv.manifest.json").read_text())
    assert manifest["null_phi"] == 0.0


def test_cli_threads_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SPECTEST_THREADS", "2")
    code = main(["simulate-null", "--n", "64", "--m", "8", "--reps", "100",
                 "--stat", "full", "--seed", "1"])
    out, _ = capsys.readouterr()
    assert code == 0
    monkeypatch.delenv("SPECTEST_THREADS")
    main(["simulate-null", "--n", "64", "--m", "8", "--reps", "100",
          "--stat", "full", "--seed", "1"])
    out_serial, _ = capsys.readouterr()
    assert out == out_serial
