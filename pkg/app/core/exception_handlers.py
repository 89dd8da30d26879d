"""
Exception handlers for FastAPI
"""
import logging
from fastapi import Request, status
from fastapi.responses import JSONResponse
from app.core.exceptions import AppException

logger = logging.getLogger(__name__)


def _error_body(request: Request, message: str, kind: str, **extra) -> dict:
    return {
        "error": True,
        "type": kind,
        "message": message,
        "path": str(request.url.path),
        **extra,
    }


async def app_exception_handler(request: Request, exc: AppException) -> JSONResponse:
    """Domain errors keep their own status code"""
    if exc.status_code >= 500:
        logger.error(f"Application error: {exc.message}", exc_info=True)
    else:
        logger.warning(f"Rejected request: {type(exc).__name__}: {exc.message}")
    return JSONResponse(
        status_code=exc.status_code,
        content=_error_body(request, exc.message, type(exc).__name__),
    )


async def http_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """Anything unexpected becomes a 500"""
    logger.error(f"Unhandled error: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content=_error_body(request, "Internal server error", "InternalError"),
    )


async def validation_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """Malformed request parameters"""
    logger.warning(f"Validation error: {str(exc)}")
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content=_error_body(request, "Validation error", "RequestValidationError", details=str(exc)),
    )
