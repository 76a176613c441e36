"""
Verification Report Models

Outcome records for the algebraic law suites.
"""

from enum import Enum
from typing import List

from pydantic import BaseModel, Field


class Law(str, Enum):
    AXIOMS = "axioms"
    MONOTONE_EDGE = "monotone-edge"
    MONOTONE_WEIGHT = "monotone-weight"
    BINARY_ORACLE = "binary-oracle"
    UNION = "union"
    SANDWICH = "sandwich"
    LOG_DIRECT = "log-direct"
    PRODUCT = "product"
    GRAPHON = "graphon"


class VerificationReport(BaseModel):
    """Result of one law suite run."""

    law: Law
    trials: int
    seed: int
    passed: bool = True
    checks: int = 0
    max_violation: float = 0.0
    failures: List[str] = Field(default_factory=list)
