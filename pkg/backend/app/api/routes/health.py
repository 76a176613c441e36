"""
Health Check Route

Simple health check endpoint for service monitoring.
"""

from fastapi import APIRouter

from app import __version__
from app.core.config import settings

router = APIRouter()


@router.get("/health")
async def health_check():
    """Check service health."""
    return {
        "status": "healthy",
        "service": settings.app_name,
        "version": __version__,
    }


@router.get("/health/ready")
async def readiness_check():
    """Report the parallelism and estimator defaults the service runs with."""
    return {
        "ready": True,
        "checks": {
            "threads": settings.resolved_threads,
            "pair_block": settings.pair_block,
            "graphon_floor": settings.graphon_floor,
        },
    }
