"""Reductions between 3SUM, 3XOR, their convolution variants, 6SUM over
Z3^t, and triangle detection/listing, plus the pseudorandom objects the
reductions need. Everything is verified end-to-end against brute-force
oracles; see the CLI (`triweb --help`) for the user surface.
"""
from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
