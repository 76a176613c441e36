"""
graphmetric - FastAPI Application

HTTP surface over the joint-metric, graphon and experiment services.
"""

from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from app import __version__
from app.api.routes import distance, experiment, graphon, health, verify
from app.core.config import settings
from app.core.exceptions import GraphMetricException
from app.core.logging import get_logger, setup_logging

logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan handler for startup/shutdown."""
    setup_logging(settings.log_level)
    yield


app = FastAPI(
    title="graphmetric API",
    description="Graph-parameterized joint metrics, law verification and distance distributions",
    version=__version__,
    lifespan=lifespan,
)


@app.exception_handler(GraphMetricException)
async def graphmetric_exception_handler(request: Request, exc: GraphMetricException):
    logger.warning("request_rejected", path=request.url.path, error_code=exc.error_code, message=exc.message)
    return JSONResponse(status_code=400, content=exc.to_dict())


@app.exception_handler(ValidationError)
async def validation_exception_handler(request: Request, exc: ValidationError):
    return JSONResponse(
        status_code=422,
        content={
            "error_code": "INVALID_PARAMETER",
            "message": f"{exc.error_count()} validation errors",
            "details": {"errors": exc.errors(include_url=False, include_context=False)},
        },
    )


# Include routers
app.include_router(health.router, tags=["Health"])
app.include_router(distance.router, prefix="/api/v1", tags=["Distance"])
app.include_router(verify.router, prefix="/api/v1", tags=["Verify"])
app.include_router(graphon.router, prefix="/api/v1", tags=["Graphon"])
app.include_router(experiment.router, prefix="/api/v1", tags=["Experiment"])


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "name": settings.app_name,
        "version": __version__,
        "docs": "/docs",
    }
