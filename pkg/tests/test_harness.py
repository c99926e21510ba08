import math

import numpy as np
import pytest

from svt.harness import (
    CSV_HEADER,
    BlerRow,
    SchemeConfig,
    export_dataset,
    fdst_defaults,
    noise_variance_for_snr,
    parse_config_file,
    run_bler,
    svc_defaults,
    write_bler_csv,
)
from svt.sparse_codec import support_rank
from svt.svc import load_codebook


class TestConfig:
    def test_defaults_match_reference_setups(self):
        f = fdst_defaults()
        assert (f.n, f.m, f.k, f.bits_per_symbol) == (512, 256, 36, 4)
        s = svc_defaults()
        assert (s.n, s.m, s.k, s.bits_per_symbol) == (96, 42, 2, 0)

    def test_bad_parameters_rejected_before_trials(self):
        with pytest.raises(ValueError):
            svc_defaults(trials_per_point=0)
        with pytest.raises(ValueError):
            svc_defaults(snr_db_list=())
        with pytest.raises(ValueError):
            fdst_defaults(m=1024)
        with pytest.raises(ValueError):
            SchemeConfig(scheme="bogus", n=8, m=4, k=1, bits_per_symbol=0,
                         snr_db_list=(0.0,), trials_per_point=1, master_seed=0)

    def test_noise_variance_reference(self):
        svc = svc_defaults()
        assert noise_variance_for_snr(svc, 0.0) == pytest.approx(2 / 42)
        assert noise_variance_for_snr(svc, 10.0) == pytest.approx(2 / 420)
        assert noise_variance_for_snr(svc, float("inf")) == 0.0
        fdst = fdst_defaults()
        assert noise_variance_for_snr(fdst, 0.0) == pytest.approx(36 / 512)


class TestRunBler:
    def test_noiseless_svc_near_perfect(self):
        cfg = svc_defaults(snr_db_list=(float("inf"),), trials_per_point=100)
        rows = run_bler(cfg)
        assert rows[0].trials == 100
        assert rows[0].bler <= 0.01

    def test_single_trial_is_zero_or_one(self):
        cfg = svc_defaults(snr_db_list=(0.0,), trials_per_point=1)
        rows = run_bler(cfg)
        assert rows[0].bler in (0.0, 1.0)

    def test_deterministic_rows(self):
        cfg = svc_defaults(snr_db_list=(3.0, 9.0), trials_per_point=60, master_seed=5)
        assert run_bler(cfg) == run_bler(cfg)

    def test_appending_snr_points_preserves_existing(self):
        short = svc_defaults(snr_db_list=(2.0,), trials_per_point=50, master_seed=9)
        longer = svc_defaults(snr_db_list=(2.0, 6.0), trials_per_point=50, master_seed=9)
        assert run_bler(longer)[0] == run_bler(short)[0]

    def test_worker_count_does_not_change_results(self, monkeypatch, tmp_path):
        cfg = svc_defaults(snr_db_list=(2.0, 8.0), trials_per_point=40, master_seed=11)
        monkeypatch.delenv("SVT_WORKERS", raising=False)
        serial = run_bler(cfg)
        monkeypatch.setenv("SVT_WORKERS", "3")
        parallel = run_bler(cfg)
        assert serial == parallel
        a, b = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        write_bler_csv(serial, a)
        write_bler_csv(parallel, b)
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_worker_env(self, monkeypatch):
        monkeypatch.setenv("SVT_WORKERS", "zero")
        with pytest.raises(ValueError):
            run_bler(svc_defaults(snr_db_list=(0.0,), trials_per_point=1))

    def test_bler_monotone_in_snr(self):
        cfg = svc_defaults(snr_db_list=(0.0, 4.0, 8.0, 12.0), trials_per_point=500,
                           master_seed=13)
        rows = run_bler(cfg)
        for lo, hi in zip(rows, rows[1:]):
            stderr = math.sqrt(max(lo.bler * (1 - lo.bler), 1e-9) / lo.trials)
            assert hi.bler <= lo.bler + 3 * stderr

    def test_error_accounting(self):
        cfg = svc_defaults(snr_db_list=(0.0,), trials_per_point=200, master_seed=17)
        row = run_bler(cfg)[0]
        assert row.block_errors == row.support_errors + row.symbol_errors
        assert row.bler == row.block_errors / row.trials

    def test_coherence_guard_warns_when_channel_too_fast(self):
        cfg = svc_defaults(snr_db_list=(10.0,), trials_per_point=1, speed_mps=6000.0)
        with pytest.warns(UserWarning, match="coherence"):
            run_bler(cfg)

    def test_fdst_noiseless_full_measurement(self):
        cfg = fdst_defaults(n=64, m=64, k=4, snr_db_list=(float("inf"),),
                            trials_per_point=40, ui_mode="data_positions",
                            bits_per_symbol=2, master_seed=19)
        rows = run_bler(cfg)
        assert rows[0].bler == 0.0


class TestCsv:
    def test_header_and_schema(self, tmp_path):
        rows = [BlerRow(0.0, 10, 3, 0.3, 2, 1)]
        path = tmp_path / "out.csv"
        write_bler_csv(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[0] == "snr_db,trials,block_errors,bler,support_errors,symbol_errors,ci95"
        fields = lines[1].split(",")
        assert fields[0] == "0.0"
        assert fields[1:3] == ["10", "3"]
        assert float(fields[3]) == 0.3
        assert float(fields[6]) == pytest.approx(1.96 * math.sqrt(0.3 * 0.7 / 10))

    def test_ci95_halfwidth(self):
        row = BlerRow(5.0, 400, 100, 0.25, 80, 20)
        assert row.ci95 == pytest.approx(1.96 * math.sqrt(0.25 * 0.75 / 400))

    def test_byte_identical_rerun(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(1.0, 5.0), trials_per_point=30, master_seed=23)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_bler_csv(run_bler(cfg), a)
        write_bler_csv(run_bler(cfg), b)
        assert a.read_bytes() == b.read_bytes()


class TestExportDataset:
    def test_row_count_and_header(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(10.0,), trials_per_point=1, master_seed=29)
        path = tmp_path / "data.txt"
        export_dataset(cfg, 10, path)
        lines = path.read_text().splitlines()
        assert len(lines) == 11
        assert lines[0] == "42 96 2 10 10.0 29"
        first = lines[1].split()
        assert len(first) == 2 * 42 + 2

    def test_labels_reencode_within_word_range(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(float("inf"),), trials_per_point=1, master_seed=31)
        path = tmp_path / "data.txt"
        export_dataset(cfg, 50, path)
        for line in path.read_text().splitlines()[1:]:
            fields = line.split()
            support = tuple(int(v) for v in fields[-2:])
            assert support_rank(support, 96, 2) < (1 << 12)

    def test_byte_identical_rerun(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(6.0,), trials_per_point=1, master_seed=37)
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        export_dataset(cfg, 25, a)
        export_dataset(cfg, 25, b)
        assert a.read_bytes() == b.read_bytes()

    def test_codebook_export_alongside(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(6.0,), trials_per_point=1, master_seed=41)
        export_dataset(cfg, 5, tmp_path / "d.txt", codebook_out=tmp_path / "cb.txt")
        cb = load_codebook(tmp_path / "cb.txt")
        assert (cb.m, cb.n) == (42, 96)

    def test_requires_single_snr_and_svc(self, tmp_path):
        with pytest.raises(ValueError):
            export_dataset(svc_defaults(), 5, tmp_path / "x.txt")
        with pytest.raises(ValueError):
            export_dataset(fdst_defaults(snr_db_list=(0.0,)), 5, tmp_path / "x.txt")

    def test_unwritable_path_fails_before_generation(self, tmp_path):
        cfg = svc_defaults(snr_db_list=(6.0,), trials_per_point=1)
        with pytest.raises(OSError):
            export_dataset(cfg, 5, tmp_path / "missing-dir" / "x.txt")


class TestConfigFile:
    def test_parse_and_apply(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# spread-scheme run\n"
            "n=96\nm=42\nk=2\nbs=0\n"
            "snr=0,4,8\ntrials=25\nseed=7\ncircular=false\n"
        )
        overrides = parse_config_file(path)
        cfg = svc_defaults(**overrides)
        assert cfg.snr_db_list == (0.0, 4.0, 8.0)
        assert cfg.trials_per_point == 25
        assert cfg.master_seed == 7
        assert cfg.circular is False

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("frobnicate=1\n")
        with pytest.raises(ValueError, match="unknown config key"):
            parse_config_file(path)

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("this is not a pair\n")
        with pytest.raises(ValueError, match="key=value"):
            parse_config_file(path)

    def test_inf_snr_parses(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("snr=inf\n")
        assert parse_config_file(path)["snr_db_list"] == (float("inf"),)
