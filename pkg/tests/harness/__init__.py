"""
Test Harness for pmxml

Provides reusable testing utilities:
- Hypothesis strategies for valid documents and dense/sparse pairs
- Seeded generators of grammar-guided and arbitrary element trees
- A brute-force reference matcher for schema validation
- A catalogue of fixture mutations that must all be rejected
"""

from tests.harness.generators import (
    conformant_tree,
    dense_token_vectors,
    documents,
    random_tree,
    sparse_vectors_with_dim,
)
from tests.harness.mutations import MUTATIONS, Mutation, rejection
from tests.harness.oracle import BruteForceMatcher, oracle_valid

__all__ = [
    # Generators
    "documents",
    "dense_token_vectors",
    "sparse_vectors_with_dim",
    "random_tree",
    "conformant_tree",
    # Oracle
    "BruteForceMatcher",
    "oracle_valid",
    # Mutations
    "MUTATIONS",
    "Mutation",
    "rejection",
]
