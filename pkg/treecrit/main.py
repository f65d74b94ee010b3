"""
FastAPI application for treecrit.
Configures middleware, exception handlers, and API routes.
"""

import json
import time
import uuid
from contextlib import asynccontextmanager
from datetime import datetime, timezone
from typing import Any, AsyncIterator, Dict

import psutil
from fastapi import FastAPI, Request, status
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.middleware.base import BaseHTTPMiddleware

from .api.v1 import api_router
from .core.config import settings
from .core.exceptions import TreeCritException
from .core.logging import get_logger, request_id_var, setup_logging
from .schemas.common import ErrorResponse, HealthCheckResponse

logger = get_logger(__name__)


class RequestIDMiddleware(BaseHTTPMiddleware):
    """Middleware to add request ID to all requests for tracing."""

    async def dispatch(self, request: Request, call_next: Any) -> Any:
        request_id = request.headers.get("X-Request-ID", str(uuid.uuid4()))
        token = request_id_var.set(request_id)
        request.state.request_id = request_id

        try:
            start_time = time.time()
            response = await call_next(request)
            process_time = time.time() - start_time

            response.headers["X-Request-ID"] = request_id
            response.headers["X-Process-Time"] = str(process_time)

            logger.info(
                "request_completed",
                method=request.method,
                path=request.url.path,
                status_code=response.status_code,
                process_time=process_time,
            )
            return response

        except Exception as e:
            logger.error(
                "request_failed",
                method=request.method,
                path=request.url.path,
                error=str(e),
            )
            raise
        finally:
            request_id_var.reset(token)


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncIterator[None]:
    setup_logging()
    logger.info("api_starting", version=settings.APP_VERSION)
    yield
    logger.info("api_stopped")


app = FastAPI(
    title=settings.API_TITLE,
    description=settings.API_DESCRIPTION,
    version=settings.APP_VERSION,
    openapi_url=f"{settings.API_V1_PREFIX}/openapi.json",
    docs_url=f"{settings.API_V1_PREFIX}/docs",
    lifespan=lifespan,
)

app.add_middleware(RequestIDMiddleware)


def _error(request: Request, status_code: int, body: ErrorResponse) -> JSONResponse:
    body.request_id = getattr(request.state, "request_id", None)
    # infinite interval ends serialize as null
    return JSONResponse(status_code=status_code, content=json.loads(body.model_dump_json()))


@app.exception_handler(TreeCritException)
async def treecrit_exception_handler(request: Request, exc: TreeCritException) -> JSONResponse:
    """Handle treecrit exceptions."""
    logger.warning("request_rejected", error_code=exc.error_code, path=request.url.path)
    return _error(
        request,
        exc.status_code,
        ErrorResponse(error=exc.error_code, message=exc.message, details=exc.details),
    )


@app.exception_handler(RequestValidationError)
async def request_validation_exception_handler(
    request: Request, exc: RequestValidationError
) -> JSONResponse:
    """Handle FastAPI request validation errors."""
    return _error(
        request,
        status.HTTP_422_UNPROCESSABLE_ENTITY,
        ErrorResponse(
            error="VALIDATION_ERROR",
            message="Invalid request data",
            details={"errors": [{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()]},
        ),
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """Handle all unhandled exceptions."""
    logger.error(
        "unhandled_exception",
        error=str(exc),
        error_type=type(exc).__name__,
        path=request.url.path,
    )
    return _error(
        request,
        status.HTTP_500_INTERNAL_SERVER_ERROR,
        ErrorResponse(error="INTERNAL_SERVER_ERROR", message="An unexpected error occurred"),
    )


@app.get("/health", tags=["Health"], response_model=HealthCheckResponse)
def health_check() -> HealthCheckResponse:
    """Health check with process memory."""
    process = psutil.Process()
    memory_mb = process.memory_info().rss / 1024 / 1024
    components: Dict[str, Dict[str, Any]] = {
        "memory": {
            "status": "healthy" if memory_mb < settings.MEMORY_WARNING_MB else "warning",
            "usage_mb": memory_mb,
            "warning_mb": settings.MEMORY_WARNING_MB,
        }
    }
    overall = "healthy"
    if any(c["status"] == "warning" for c in components.values()):
        overall = "warning"
    return HealthCheckResponse(
        status=overall,
        timestamp=datetime.now(timezone.utc),
        version=settings.APP_VERSION,
        components=components,
    )


app.include_router(api_router, prefix=settings.API_V1_PREFIX)
