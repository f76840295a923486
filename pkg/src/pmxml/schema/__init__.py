"""
Schema layer

The built-in RELAX-NG pattern graph for polymake data files and the
derivative-based validator that decides conformance.
"""

from pmxml.schema.grammar import POLYMAKE_NAMESPACE, polymake_schema
from pmxml.schema.validator import nullable, validate
from pmxml.schema.datatypes import match_datatype

__all__ = ["POLYMAKE_NAMESPACE", "polymake_schema", "nullable", "validate", "match_datatype"]
