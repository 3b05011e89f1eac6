"""
walkerverify: numerical verification of 4-dimensional Einstein Walker metrics.

The package checks the Einstein condition, the gauge transformations removing
A, the Petrov type and holonomy dichotomy, and Killing algebras of a catalog
of metrics given in closed form.
"""

__version__ = "1.0.0"

from .catalog import CatalogEntry, get, list_names
from .config import WalkerVerifyConfig, get_config
from .errors import WalkerVerifyError
from .exprcore import DomainBox, Point, parse
from .walker import WalkerMetric, assemble

__all__ = [
    "__version__",
    "CatalogEntry",
    "get",
    "list_names",
    "WalkerVerifyConfig",
    "get_config",
    "WalkerVerifyError",
    "DomainBox",
    "Point",
    "parse",
    "WalkerMetric",
    "assemble",
]
