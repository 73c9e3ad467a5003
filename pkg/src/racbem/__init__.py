"""Random-circuit block-encoded matrices and QSVT benchmarking toolkit."""

__version__ = "0.1.0"
