"""Prime-by-prime certificates of point and rank stability in cyclotomic towers."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
