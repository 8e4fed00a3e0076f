"""Tight Weil-Petersson volume machinery.

Exact intersection numbers, the tight-volume polynomial recursion,
Bessel-moment numerics, Boltzmann cusp statistics and the tight
length-spectrum limit laws, with a CLI front door (``tightwp``).
"""

from tightwp.kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
