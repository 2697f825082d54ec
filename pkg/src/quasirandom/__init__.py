"""Quasirandom finite groups: representation degrees, product mixing, covering, word maps."""

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, InputError, QuasirandomError, TheoremViolation
from .groups import FiniteGroup, construct_family
from .kernels import BACKEND
from .subsets import SubsetMask, product_set

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Caps",
    "CapExceeded",
    "DEFAULT_CAPS",
    "FiniteGroup",
    "InputError",
    "QuasirandomError",
    "SubsetMask",
    "TheoremViolation",
    "construct_family",
    "product_set",
]
