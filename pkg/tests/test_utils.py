import json
from datetime import datetime

import pytest

from src.config import Settings, get_approximation_config, get_search_config, load_yaml_config
from src.monitoring import MetricsCollector
from src.utils import (
    PerformanceMonitor,
    format_float,
    format_timestamp,
    hash_value,
    serialize_record,
    setup_logging,
)


class TestConfig:
    def test_defaults(self):
        s = Settings()
        assert s.app_name == "fibgates"
        assert s.leakage_tolerance == 1e-9
        assert s.word_window == 4096

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("SEARCH_MAX_LENGTH", "5")
        monkeypatch.setenv("APPROX_TOL", "1e-6")
        s = Settings()
        assert s.search_max_length == 5
        assert s.approx_tol == 1e-6

    def test_section_helpers(self):
        assert set(get_search_config()) >= {"max_length", "shards", "policy", "output"}
        assert set(get_approximation_config()) == {"tol", "max_iter", "max_word_letters", "word_window"}

    def test_yaml(self, tmp_path):
        path = tmp_path / "search.yaml"
        path.write_text("max_length: 4\nshards: 2\n")
        assert load_yaml_config(path) == {"max_length": 4, "shards": 2}
        empty = tmp_path / "empty.yaml"
        empty.write_text("")
        assert load_yaml_config(empty) == {}
        bad = tmp_path / "list.yaml"
        bad.write_text("- 1\n- 2\n")
        with pytest.raises(ValueError):
            load_yaml_config(bad)


class TestUtils:
    def test_hash_value(self):
        assert hash_value("abc") == hash_value("abc")
        assert len(hash_value("abc")) == 64
        assert hash_value("abc") != hash_value("abd")

    def test_format_float_round_trips(self):
        for x in (0.1, 1 / 3, 0.7861513777574233, 1e-300):
            assert float(format_float(x)) == x

    def test_records(self):
        record = {"word": "1 2", "len": 2, "entangling": None}
        assert json.loads(serialize_record(record)) == record

    def test_timestamp(self):
        assert format_timestamp(datetime(2024, 1, 2, 3, 4, 5)) == "2024-01-02T03:04:05"

    def test_setup_logging(self):
        setup_logging("debug")
        with pytest.raises(AttributeError):
            setup_logging("verbose")

    def test_performance_monitor(self):
        monitor = PerformanceMonitor()
        monitor.record_time("step", 2.0)
        monitor.record_time("step", 4.0)
        with monitor.timed("block"):
            pass
        assert monitor.get_avg_time("step") == 3.0
        assert monitor.get_total_time("step") == 6.0
        assert monitor.get_avg_time("missing") == 0.0
        assert set(monitor.get_summary()) == {"step", "block"}


class TestMetricsCollector:
    def test_record_shard(self):
        metrics = MetricsCollector()
        metrics.record_shard({1: 10, 2: 90}, survivors=64, leakage_free=64, entangling=0, seconds=0.5)
        metrics.record_shard({2: 9}, survivors=0, leakage_free=0, entangling=1, seconds=1.5)
        summary = metrics.get_metrics()
        assert summary["words_visited"] == 109
        assert summary["words_visited_by_length"] == {1: 10, 2: 99}
        assert summary["entangling"] == 1
        assert summary["average_shard_seconds"] == "1.000"

    def test_record_iteration(self):
        metrics = MetricsCollector()
        metrics.record_iteration(0.5)
        metrics.record_iteration(0.1)
        summary = metrics.get_metrics()
        assert summary["iterations"] == 2
        assert summary["last_off_diagonal"] == 0.1
