import json

import pytest

from anosov.cli import (
    EXIT_OK,
    EXIT_REFUTED,
    EXIT_USAGE,
    build_representation,
    main,
)

SCHOTTKY = '{"kind":"schottky","rank":2,"dilation":3.0}'
TAU2 = '{"kind":"tau2-schottky","rank":2,"dilation":3.0,"twists":[0.3,0.7]}'


def run(*argv):
    return main(list(argv))


class TestConfigHandling:
    def test_negative_radius_is_usage_error(self, tmp_path):
        code = run("certify", "--construction", SCHOTTKY, "--radius", "-1",
                   "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_missing_construction(self, tmp_path):
        code = run("certify", "--radius", "4", "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_malformed_config_file_reports_line(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text('{"construction": {"kind": "schottky",}\n')
        code = run("certify", "--config", str(cfg), "--out", str(tmp_path))
        assert code == EXIT_USAGE
        err = capsys.readouterr().err
        assert "line" in err

    def test_unknown_config_field(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"construction": {"kind": "schottky"}, "radiu": 3}))
        code = run("certify", "--config", str(cfg), "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "ok.json"
        cfg.write_text(
            json.dumps(
                {"construction": {"kind": "schottky", "rank": 2, "dilation": 3.0},
                 "radius": 4, "k": [1]}
            )
        )
        out = tmp_path / "run"
        code = run("certify", "--config", str(cfg), "--radius", "5", "--out", str(out))
        assert code == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["config"]["radius"] == 5

    def test_unknown_construction_kind(self):
        with pytest.raises(Exception):
            build_representation({"kind": "moebius"})


class TestCertifyCommand:
    def test_schottky_certified_exit0(self, tmp_path):
        out = tmp_path / "run"
        code = run("certify", "--construction", SCHOTTKY, "--k", "1",
                   "--radius", "5", "--out", str(out))
        assert code == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["estimates"][0]["verdict"] == "Certified"
        assert summary["seed"] == 0
        assert "threads" not in summary["config"]
        csv_text = (out / "gap_profile.csv").read_text().splitlines()
        assert csv_text[0] == "word,length,log_gap_1,log_total_ratio"
        assert len(csv_text) == 1 + 1 + 4 * (1 + 3 + 9 + 27 + 81)

    def test_tau2_refuted_exit1(self, tmp_path):
        out = tmp_path / "run"
        code = run("certify", "--construction", TAU2, "--k", "1",
                   "--radius", "4", "--out", str(out))
        assert code == EXIT_REFUTED
        summary = json.loads((out / "summary.json").read_text())
        est = summary["estimates"][0]
        assert est["verdict"] == "Refuted"
        assert est["witness"] == "a"

    def test_multi_k_columns(self, tmp_path):
        out = tmp_path / "run"
        code = run("certify", "--construction", TAU2, "--k", "1", "2",
                   "--radius", "4", "--out", str(out))
        assert code == EXIT_REFUTED  # k=1 refutes even though k=2 certifies
        header = (out / "gap_profile.csv").read_text().splitlines()[0]
        assert header == "word,length,log_gap_1,log_gap_2,log_total_ratio"

    def test_gap_profile_command(self, tmp_path):
        out = tmp_path / "run"
        code = run("gap-profile", "--construction", SCHOTTKY, "--k", "1",
                   "--radius", "3", "--out", str(out))
        assert code == EXIT_OK
        assert (out / "gap_profile.csv").exists()


class TestOtherCommands:
    def test_construct_and_from_file_round_trip(self, tmp_path):
        emitted = tmp_path / "rep.json"
        out1 = tmp_path / "c1"
        assert run("construct", "--construction", SCHOTTKY, "--emit", str(emitted),
                   "--out", str(out1)) == EXIT_OK
        out2 = tmp_path / "direct"
        out3 = tmp_path / "reloaded"
        run("certify", "--construction", SCHOTTKY, "--k", "1", "--radius", "4",
            "--out", str(out2))
        run("certify", "--construction",
            json.dumps({"kind": "from-file", "path": str(emitted)}),
            "--k", "1", "--radius", "4", "--out", str(out3))
        assert (out2 / "gap_profile.csv").read_bytes() == (out3 / "gap_profile.csv").read_bytes()

    def test_scan_positivity_exit1(self, tmp_path):
        out = tmp_path / "run"
        desc = json.dumps(
            {"kind": "sym-power", "m": 5,
             "base": {"kind": "schottky", "rank": 2, "dilation": 3.0}}
        )
        code = run("scan-positivity", "--construction", desc, "--k", "3",
                   "--radius", "4", "--out", str(out))
        assert code == EXIT_REFUTED
        summary = json.loads((out / "summary.json").read_text())
        report = summary["reports"][0]
        assert report["verdict"] == "NotPositivelyProximal"
        assert report["witness"] == "abAB"
        assert report["witness_recheck"] is True
        assert (out / "positivity_k3.csv").exists()

    def test_limit_set_exit0(self, tmp_path):
        out = tmp_path / "run"
        code = run("limit-set", "--construction", SCHOTTKY, "--k", "1",
                   "--radius", "3", "--out", str(out))
        assert code == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["audit"]["transversality_failures"] == []
        assert summary["audit"]["span_rank"] == 2

    def test_deform_exit0(self, tmp_path):
        out = tmp_path / "run"
        code = run("deform", "--construction", SCHOTTKY, "--k", "1",
                   "--radius", "2", "--magnitude", "0.01", "--steps", "10",
                   "--out", str(out))
        assert code == EXIT_OK
        assert (out / "deform_traces.csv").exists()

    def test_deform_magnitude_guard(self, tmp_path):
        code = run("deform", "--construction", SCHOTTKY, "--magnitude", "0.5",
                   "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_pingpong_rotation_exit0(self, tmp_path):
        out = tmp_path / "run"
        code = run("pingpong", "--construction", SCHOTTKY, "--g", "a",
                   "--t-rotation", "1.5707963267948966", "--out", str(out))
        assert code == EXIT_OK
        summary = json.loads((out / "summary.json").read_text())
        assert summary["n"] == 1

    def test_pingpong_needs_conjugator(self, tmp_path):
        code = run("pingpong", "--construction", SCHOTTKY, "--g", "a",
                   "--out", str(tmp_path))
        assert code == EXIT_USAGE

    def test_fuchsian_positivity_scan(self, tmp_path):
        # this SL(2,R) lift is not positively proximal: some length-2 word
        # has negative trace, and the scan must find and re-verify it
        out = tmp_path / "run"
        code = run("scan-positivity", "--construction",
                   '{"kind":"fuchsian-surface","genus":2}',
                   "--k", "1", "--radius", "2", "--out", str(out))
        assert code == EXIT_REFUTED
        summary = json.loads((out / "summary.json").read_text())
        assert summary["reports"][0]["witness_recheck"] is True


class TestReproducibility:
    def test_thread_count_does_not_change_bytes(self, tmp_path):
        runs = {}
        for threads in ("1", "3"):
            out = tmp_path / f"t{threads}"
            assert run("certify", "--construction", SCHOTTKY, "--k", "1",
                       "--radius", "5", "--seed", "0", "--threads", threads,
                       "--out", str(out)) == EXIT_OK
            runs[threads] = (
                (out / "gap_profile.csv").read_bytes(),
                (out / "summary.json").read_bytes(),
            )
        assert runs["1"] == runs["3"]
