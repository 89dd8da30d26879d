"""
Custom middleware
"""
import time
import logging
from fastapi import Request
from starlette.middleware.base import BaseHTTPMiddleware

logger = logging.getLogger(__name__)


class LoggingMiddleware(BaseHTTPMiddleware):
    """Log each request with its query and the time spent computing it"""

    async def dispatch(self, request: Request, call_next):
        started = time.perf_counter()
        query = f"?{request.url.query}" if request.url.query else ""
        logger.info(f"Request: {request.method} {request.url.path}{query}")

        response = await call_next(request)

        elapsed = time.perf_counter() - started
        log = logger.warning if response.status_code >= 400 else logger.info
        log(
            f"Response: {request.method} {request.url.path} - "
            f"Status: {response.status_code} - "
            f"Time: {elapsed:.3f}s"
        )
        response.headers["X-Process-Time"] = f"{elapsed:.6f}"
        return response
