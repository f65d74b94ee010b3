"""
Tests for structured logging setup and helpers.
"""

import json
import logging

from treecrit.core.logging import (
    get_logger,
    log_memory_usage,
    log_simulation_activity,
    request_id_var,
    setup_logging,
)


class TestSetupLogging:
    """Logs go to stderr, never stdout."""

    def test_json_records_on_stderr(self, capsys):
        setup_logging("INFO", "json")
        get_logger("test").info("probe_event", answer=42)
        captured = capsys.readouterr()
        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["event"] == "probe_event"
        assert record["answer"] == 42
        assert record["level"] == "info"
        assert record["app_name"] == "treecrit"

    def test_repeated_setup_keeps_one_handler(self):
        setup_logging("INFO", "json")
        setup_logging("INFO", "json")
        tagged = [h for h in logging.getLogger().handlers if getattr(h, "_treecrit_handler", False)]
        assert len(tagged) == 1

    def test_request_id_is_attached(self, capsys):
        setup_logging("INFO", "json")
        token = request_id_var.set("req-123")
        try:
            get_logger("test").info("with_request")
        finally:
            request_id_var.reset(token)
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["request_id"] == "req-123"


class TestHelpers:
    def test_simulation_activity_fields(self, capsys):
        setup_logging("INFO", "json")
        log_simulation_activity("tree_sim", "success", duration_ms=12.34567, trials=10, depth=4)
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["component"] == "tree_sim"
        assert record["trials"] == 10
        assert record["depth"] == 4
        assert record["duration_ms"] == 12.346

    def test_memory_warning_above_threshold(self, capsys):
        setup_logging("INFO", "json")
        log_memory_usage("rde", memory_mb=4096.0, threshold_mb=2048.0)
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["level"] == "warning"
