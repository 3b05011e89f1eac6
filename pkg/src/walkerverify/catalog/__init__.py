"""
Built-in metrics and metric definition files.
"""

from .dsl import (
    ConstraintSpec,
    DomainSpec,
    MetricDocument,
    document_to_entry,
    entry_to_document,
    export_entry,
    load_dsl,
    parse_dsl,
    write_dsl,
)
from .entries import EXAMPLE2_BOX, EXAMPLE4_BOX, UNIT_BOX, CatalogEntry, LocusSpec, builtin_entries
from .registry import SELF_TEST_TOL, CatalogRegistry, SelfTestResult, get, get_catalog, list_names, self_test

__all__ = [
    "CatalogEntry",
    "LocusSpec",
    "UNIT_BOX",
    "EXAMPLE2_BOX",
    "EXAMPLE4_BOX",
    "builtin_entries",
    "CatalogRegistry",
    "SelfTestResult",
    "SELF_TEST_TOL",
    "get_catalog",
    "get",
    "list_names",
    "self_test",
    "ConstraintSpec",
    "DomainSpec",
    "MetricDocument",
    "document_to_entry",
    "entry_to_document",
    "parse_dsl",
    "load_dsl",
    "export_entry",
    "write_dsl",
]
