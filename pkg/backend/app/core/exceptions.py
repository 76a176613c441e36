"""
Custom Exception Classes

Define library-specific exceptions for clear error handling.
"""

from typing import Any, Dict, Optional, Tuple


class GraphMetricException(Exception):
    """Base exception for the graphmetric library."""

    def __init__(
        self,
        message: str,
        error_code: str = "UNKNOWN_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI and the HTTP API."""
        return {
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class InvalidParameterError(GraphMetricException, ValueError):
    """Argument outside its documented range or shape."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "INVALID_PARAMETER", details)


class SaturatedDistanceError(GraphMetricException):
    """A distance of exactly 1 reached a log-domain computation."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "SATURATED_DISTANCE", details)


class EditRejectedError(GraphMetricException):
    """Graph edit whose preconditions do not hold."""

    def __init__(
        self,
        message: str,
        edge: Tuple[int, int],
        details: Optional[Dict[str, Any]] = None,
    ):
        details = details or {}
        details["edge"] = list(edge)
        super().__init__(message, "EDIT_REJECTED", details)


class SymmetryError(GraphMetricException):
    """Input required to be symmetric is not."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "SYMMETRY_ERROR", details)


class PreconditionError(GraphMetricException):
    """Operation called outside the setting it is defined for."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "PRECONDITION_FAILED", details)


class GraphFormatError(GraphMetricException):
    """Malformed graph, points or distance-table file."""

    def __init__(self, message: str, path: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        details = details or {}
        if path is not None:
            details["path"] = path
        super().__init__(message, "GRAPH_FORMAT_ERROR", details)


class ExportError(GraphMetricException):
    """Failure writing an export file."""

    def __init__(self, message: str, path: str, details: Optional[Dict[str, Any]] = None):
        details = details or {}
        details["path"] = path
        super().__init__(message, "EXPORT_ERROR", details)
