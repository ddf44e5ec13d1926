"""fgt: a finite group engine with a theorem verification harness.

Groups are dense multiplication tables, subgroups are bit vectors, and the
higher layers provide formation theory (chief series, F-hypercentre,
residuals), subgroup embedding predicates, and corpus-level verification of
the structure results built on them.
"""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
