"""
Verify Route

Run a law suite on the server.
"""

from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.models.verification import Law, VerificationReport
from app.services.verification import run_law

router = APIRouter()


class VerifyRequest(BaseModel):
    law: Law
    trials: int = Field(default=20, ge=1, le=1000)
    seed: int = Field(default=0, ge=0)


@router.post("/verify", response_model=VerificationReport)
def verify_law(request: VerifyRequest):
    """Seeded property suite; the same seed reproduces the same report."""
    return run_law(request.law, request.trials, request.seed)
