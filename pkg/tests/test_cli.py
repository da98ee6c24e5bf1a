"""Command-line behavior: output bytes, exit codes, determinism."""

from __future__ import annotations

import json
import os

import pytest

from glance.cli import main

from conftest import WALKTHROUGH_ROWS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_junk(tmp_path, name="junk.pgm"):
    path = tmp_path / name
    path.write_bytes(b"Px not an image\n")
    return path


@pytest.fixture
def series_dir(tmp_path):
    """Phantom slice series on disk: 8 slices, fault at the end."""
    out = tmp_path / "series"
    code = main(
        ["phantom", "--kind", "slice-series", "--length", "8", "--seed", "3",
         "--out-dir", str(out)]
    )
    assert code == 0
    return out


@pytest.fixture
def dataset_dir(tmp_path):
    """Small 3-class phantom dataset on disk."""
    out = tmp_path / "ds"
    code = main(["phantom", "--n", "10", "--seed", "7", "--out-dir", str(out)])
    assert code == 0
    return out


class TestFeaturesCommand:
    def test_walkthrough_csv_golden(self, capsys, walkthrough_csv):
        code, out, err = run(
            capsys, "features", str(walkthrough_csv), "--threshold", "128"
        )
        assert code == 0
        assert err == ""
        assert out == (
            "source_id,rows,cols,threshold,u,z,y,w,n_p,ipf,c,s,p,w_avg\n"
            f"{walkthrough_csv},6,4,128,15,9,4,1,1,"
            "0.625000,0.789474,0.210526,0.062500,1.000000\n"
        )

    def test_json_format(self, capsys, walkthrough_csv):
        code, out, _ = run(
            capsys, "features", str(walkthrough_csv), "--threshold", "128",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload[0]["u"] == 15
        assert payload[0]["w_avg"] == 1.0

    def test_rows_sorted_by_path(self, capsys, tmp_path, walkthrough_csv):
        other = tmp_path / "aaa.csv"
        other.write_text("0,255\n")
        code, out, _ = run(
            capsys, "features", str(walkthrough_csv), str(other), "--threshold", "128"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[1].startswith(str(other))
        assert lines[2].startswith(str(walkthrough_csv))

    def test_missing_input_exits_2_with_no_rows(self, capsys, tmp_path):
        code, out, err = run(capsys, "features", str(tmp_path / "missing.pgm"))
        assert code == 2
        assert out == ""
        assert "missing.pgm" in err

    def test_partial_failure_exits_3_with_good_rows(
        self, capsys, tmp_path, walkthrough_csv
    ):
        junk = write_junk(tmp_path)
        code, out, err = run(
            capsys, "features", str(junk), str(walkthrough_csv), "--threshold", "128"
        )
        assert code == 3
        assert str(junk.name) in err
        lines = out.splitlines()
        assert len(lines) == 2
        assert lines[1].startswith(str(walkthrough_csv))

    def test_out_flag_writes_file(self, capsys, tmp_path, walkthrough_csv):
        target = tmp_path / "report.csv"
        code, out, _ = run(
            capsys, "features", str(walkthrough_csv), "--threshold", "128",
            "--out", str(target),
        )
        assert code == 0
        assert out == ""
        assert target.read_text().splitlines()[1].startswith(str(walkthrough_csv))

    def test_manual_threshold_validation(self, capsys):
        code, _, _ = run(capsys, "features", "x.pgm", "--threshold", "999")
        assert code == 2
        code, _, _ = run(capsys, "features", "x.pgm", "--threshold", "fuzzy")
        assert code == 2

    def test_light_polarity(self, capsys, tmp_path):
        inverted = tmp_path / "inv.csv"
        lines = [
            ",".join("0" if ch == "1" else "255" for ch in row)
            for row in WALKTHROUGH_ROWS
        ]
        inverted.write_text("\n".join(lines) + "\n")
        code, out, _ = run(
            capsys, "features", str(inverted), "--threshold", "128",
            "--polarity", "light",
        )
        assert code == 0
        cells = out.splitlines()[1].split(",")
        assert cells[4:9] == ["15", "9", "4", "1", "1"]

    def test_byte_identical_reruns(self, capsys, walkthrough_csv):
        _, first, _ = run(capsys, "features", str(walkthrough_csv))
        _, second, _ = run(capsys, "features", str(walkthrough_csv))
        assert first == second

    def test_thread_cap_does_not_change_output(
        self, capsys, monkeypatch, tmp_path, walkthrough_csv
    ):
        paths = []
        for i in range(6):
            p = tmp_path / f"copy{i}.csv"
            p.write_text(walkthrough_csv.read_text())
            paths.append(str(p))
        _, baseline, _ = run(capsys, "features", *paths)
        monkeypatch.setenv("GLANCE_THREADS", "3")
        _, capped, _ = run(capsys, "features", *paths)
        monkeypatch.setenv("GLANCE_THREADS", "0")
        _, zero, _ = run(capsys, "features", *paths)
        assert baseline == capped == zero


class TestPoresCommand:
    def test_walkthrough_golden(self, capsys, walkthrough_csv):
        code, out, _ = run(capsys, "pores", str(walkthrough_csv), "--threshold", "128")
        assert code == 0
        assert out == "pore_id,area_pixels,percent_porousness\n1,1,6.250\n"

    def test_bad_input_exits_2(self, capsys, tmp_path):
        code, out, err = run(capsys, "pores", str(tmp_path / "nope.pgm"))
        assert code == 2
        assert out == ""
        assert "nope.pgm" in err


class TestSeriesCommand:
    def test_flags_exactly_the_fault_slice(self, capsys, series_dir):
        code, out, err = run(capsys, "series", str(series_dir))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "slice_id,ipf,c,p,w_avg,flagged"
        assert len(lines) == 9
        flagged = [ln.split(",")[0] for ln in lines[1:] if ln.endswith(",true")]
        assert flagged == ["slice_007.pgm"]

    def test_not_a_directory(self, capsys, tmp_path):
        code, _, err = run(capsys, "series", str(tmp_path / "absent"))
        assert code == 2
        assert "not a directory" in err

    def test_too_few_usable_slices(self, capsys, tmp_path):
        short = tmp_path / "short"
        short.mkdir()
        (short / "a.csv").write_text("0,255\n")
        (short / "b.csv").write_text("0,255\n")
        code, _, err = run(capsys, "series", str(short))
        assert code == 2
        assert "need at least 3" in err

    def test_unreadable_slice_gives_partial_exit(self, capsys, series_dir):
        write_junk(series_dir, "zz_extra.pgm")
        code, out, _ = run(capsys, "series", str(series_dir))
        assert code == 3
        assert len(out.splitlines()) == 9

    def test_plot_dir_renders_figures(self, capsys, series_dir, tmp_path):
        plots = tmp_path / "plots"
        code, _, _ = run(capsys, "series", str(series_dir), "--plot-dir", str(plots))
        assert code == 0
        names = sorted(os.listdir(plots))
        assert names == ["c.png", "ipf.png", "p.png", "w_avg.png"]
        for name in names:
            assert (plots / name).stat().st_size > 0

    def test_byte_identical_reruns(self, capsys, series_dir):
        _, first, _ = run(capsys, "series", str(series_dir))
        _, second, _ = run(capsys, "series", str(series_dir))
        assert first == second

    def test_k_flag_controls_cutoff(self, capsys, series_dir):
        # normal slices tie at the median, so any k > 1 keeps them clean;
        # a huge k silences even the faulty slice
        code, out, _ = run(capsys, "series", str(series_dir), "--k", "1000000")
        assert code == 0
        assert all(ln.endswith(",false") for ln in out.splitlines()[1:])


class TestPhantomCommand:
    def test_dataset_writes_images_and_manifest(self, dataset_dir):
        names = sorted(os.listdir(dataset_dir))
        assert "manifest.csv" in names
        assert sum(name.endswith(".pgm") for name in names) == 30
        manifest = (dataset_dir / "manifest.csv").read_text().splitlines()
        assert manifest[0] == "filename,class_label,u,z,y,w,n_p"
        assert len(manifest) == 31
        labels = {line.split(",")[1] for line in manifest[1:]}
        assert labels == {"eyes", "brain_no_eyes", "no_brain"}

    def test_two_class_labels(self, capsys, tmp_path):
        out = tmp_path / "two"
        code = main(
            ["phantom", "--classes", "2", "--n", "10", "--seed", "7",
             "--out-dir", str(out)]
        )
        assert code == 0
        labels = {
            line.split(",")[1]
            for line in (out / "manifest.csv").read_text().splitlines()[1:]
        }
        assert labels == {"with_eyes", "without_eyes"}

    def test_repeat_runs_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            assert main(["phantom", "--n", "10", "--seed", "9", "--out-dir", str(out)]) == 0
        assert (a / "manifest.csv").read_bytes() == (b / "manifest.csv").read_bytes()
        for name in os.listdir(a):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_single_kind_manifest_matches_closed_form(self, capsys, tmp_path):
        out = tmp_path / "one"
        code = main(["phantom", "--kind", "rect-with-hole", "--out-dir", str(out)])
        assert code == 0
        manifest = (out / "manifest.csv").read_text().splitlines()
        assert manifest[1] == "rect-with-hole.pgm,rect-with-hole,576,3520,24,24,1"

    def test_series_manifest_marks_fault(self, series_dir):
        manifest = (series_dir / "manifest.csv").read_text().splitlines()
        labels = [line.split(",")[1] for line in manifest[1:]]
        assert labels.count("faulty") == 1
        assert labels[-1] == "faulty"

    def test_bad_geometry_exits_2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "phantom", "--kind", "slice-series", "--length", "2",
            "--out-dir", str(tmp_path / "x"),
        )
        assert code == 2
        assert "at least 3" in err


class TestClassifyCommand:
    def test_train_eval_round_trip(self, capsys, tmp_path, dataset_dir):
        model_path = tmp_path / "model.json"
        code, out, err = run(
            capsys, "classify", "train", "--data", str(dataset_dir),
            "--combo", "C1", "--seed", "1", "--out", str(model_path),
        )
        assert code == 0, err
        assert model_path.exists()

        code, out, err = run(
            capsys, "classify", "eval", "--model", str(model_path),
            "--data", str(dataset_dir),
        )
        assert code == 0, err
        lines = out.splitlines()
        assert lines[0] == "true_class,pred_brain_no_eyes,pred_eyes,pred_no_brain"
        accuracy = float(lines[-1].split(",")[1])
        assert accuracy >= 0.9

    def test_eval_combo_mismatch_exits_2(self, capsys, tmp_path, dataset_dir):
        model_path = tmp_path / "model.json"
        run(
            capsys, "classify", "train", "--data", str(dataset_dir),
            "--combo", "C1", "--seed", "1", "--out", str(model_path),
        )
        code, _, err = run(
            capsys, "classify", "eval", "--model", str(model_path),
            "--data", str(dataset_dir), "--combo", "C3",
        )
        assert code == 2
        assert "DimensionMismatch" in err

    def test_trials_table_layout(self, capsys, dataset_dir):
        code, out, err = run(
            capsys, "classify", "trials", "--data", str(dataset_dir),
            "--combo", "C1", "--trials", "3", "--seed", "2",
        )
        assert code == 0, err
        lines = out.splitlines()
        assert lines[0] == "trial,training,test,all"
        assert len(lines) == 6
        assert lines[4].startswith("average,")
        assert lines[5].startswith("std_dev,")

    def test_trials_deterministic(self, capsys, dataset_dir):
        args = (
            "classify", "trials", "--data", str(dataset_dir),
            "--combo", "C2", "--trials", "2", "--seed", "5",
        )
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_missing_manifest_exits_2(self, capsys, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        code, _, err = run(
            capsys, "classify", "train", "--data", str(empty), "--combo", "C1"
        )
        assert code == 2
        assert "manifest.csv" in err


class TestUsage:
    def test_no_subcommand_exits_2(self, capsys):
        assert run(capsys, )[0] == 2

    def test_unknown_subcommand_exits_2(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_help_exits_0(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "features" in out and "phantom" in out
