"""Exact computer algebra for RTT quantum general linear superalgebras
with arbitrary parity sequences."""

__version__ = "0.1.0"
