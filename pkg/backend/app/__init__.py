"""graphmetric: graph-parameterized joint metrics on product spaces."""

__version__ = "0.1.0"
