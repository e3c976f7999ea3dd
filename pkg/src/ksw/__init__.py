"""Exact linear algebra for K3-type Hodge structures, norm functors and the Kuga-Satake construction."""

__version__ = "0.1.0"
