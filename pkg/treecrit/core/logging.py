"""
Structured logging configuration for treecrit.
Log records go to stderr so that stdout stays reserved for JSON results.
"""

import logging
import sys
from contextvars import ContextVar
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, List, Optional

import structlog
from structlog.dev import ConsoleRenderer
from structlog.processors import JSONRenderer, TimeStamper, add_log_level, format_exc_info

from .config import get_settings

# Set by the HTTP middleware, read by the request-context processor
request_id_var: ContextVar[Optional[str]] = ContextVar("request_id", default=None)

_HANDLER_TAG = "_treecrit_handler"


class _StderrHandler(logging.StreamHandler):
    """Stream handler that resolves sys.stderr at emit time."""

    def __init__(self) -> None:
        super().__init__(sys.stderr)

    def emit(self, record: logging.LogRecord) -> None:
        self.setStream(sys.stderr)
        super().emit(record)


def add_request_context(logger: Any, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Add the HTTP request id to log entries when one is set."""
    request_id = request_id_var.get()
    if request_id:
        event_dict["request_id"] = request_id
    return event_dict


def add_app_context(logger: Any, method_name: str, event_dict: Dict[str, Any]) -> Dict[str, Any]:
    settings = get_settings()
    event_dict["app_name"] = settings.APP_NAME
    event_dict["app_version"] = settings.APP_VERSION
    return event_dict


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None) -> None:
    """Configure structured logging for the CLI and the API."""
    settings = get_settings()
    level_name = (level or settings.LOG_LEVEL).upper()
    fmt = log_format or settings.LOG_FORMAT
    log_level = getattr(logging, level_name)

    renderer: Any = JSONRenderer() if fmt == "json" else ConsoleRenderer(colors=False)

    processors: List[Any] = [
        structlog.stdlib.filter_by_level,
        add_log_level,
        TimeStamper(fmt="iso", utc=True),
        add_app_context,
        add_request_context,
        format_exc_info,
        renderer,
    ]

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Only replace handlers installed by a previous call
    for handler in root_logger.handlers[:]:
        if getattr(handler, _HANDLER_TAG, False):
            root_logger.removeHandler(handler)

    formatter = logging.Formatter("%(message)s")

    console_handler = _StderrHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    setattr(console_handler, _HANDLER_TAG, True)
    root_logger.addHandler(console_handler)

    if settings.LOG_FILE:
        file_handler = RotatingFileHandler(
            filename=settings.LOG_FILE,
            maxBytes=settings.LOG_MAX_SIZE_MB * 1024 * 1024,
            backupCount=settings.LOG_BACKUP_COUNT,
            encoding="utf-8",
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        setattr(file_handler, _HANDLER_TAG, True)
        root_logger.addHandler(file_handler)

    logging.getLogger("uvicorn.access").setLevel(logging.WARNING)

    get_logger(__name__).debug(
        "logging_initialized",
        log_level=level_name,
        log_format=fmt,
        log_file=settings.LOG_FILE,
    )


def get_logger(name: str) -> Any:
    """Get a structured logger instance."""
    return structlog.get_logger(name)


def log_simulation_activity(
    component: str,
    status: str,
    duration_ms: Optional[float] = None,
    trials: Optional[int] = None,
    error: Optional[str] = None,
    **extra: Any,
) -> None:
    """Log simulator runs with timing."""
    logger = get_logger("simulation")

    log_data: Dict[str, Any] = {"component": component, "status": status, **extra}
    if duration_ms is not None:
        log_data["duration_ms"] = round(duration_ms, 3)
    if trials is not None:
        log_data["trials"] = trials
    if error:
        log_data["error"] = error

    if status == "error":
        logger.error("simulation_failed", **log_data)
    elif status == "success":
        logger.info("simulation_completed", **log_data)
    else:
        logger.debug("simulation_activity", **log_data)


def log_memory_usage(component: str, memory_mb: float, threshold_mb: Optional[float] = None) -> None:
    """Log resident memory, warning above the threshold."""
    logger = get_logger("memory")

    if threshold_mb and memory_mb > threshold_mb:
        logger.warning(
            "high_memory_usage",
            component=component,
            memory_mb=round(memory_mb, 1),
            threshold_mb=threshold_mb,
        )
    else:
        logger.debug("memory_usage", component=component, memory_mb=round(memory_mb, 1))
