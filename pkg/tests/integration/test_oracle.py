"""
Integration tests comparing the derivative validator with brute-force search

Tests cover:
- Agreement on seeded random trees of depth at most four, half of them grammar-guided
- Agreement on the fixtures and their mutations
- Agreement on generated valid documents
"""

import random

import pytest
from hypothesis import HealthCheck, given, settings

from pmxml.core.codec import encode
from pmxml.core.infoset import read_document
from pmxml.schema.grammar import polymake_schema
from pmxml.schema.validator import validate
from tests.harness import MUTATIONS, conformant_tree, documents, oracle_valid, random_tree
from tests.harness.generators import random_element

GRAPH = polymake_schema()


def depth(element) -> int:
    children = element.element_children
    return 1 + max((depth(c) for c in children), default=0)


class TestRandomTrees:
    """Tests over the seeded tree generator"""

    @pytest.mark.slow
    def test_agreement_on_300_trees(self):
        """Both matchers give the same verdict on every tree"""
        disagreements = []
        verdicts = []
        for seed in range(300):
            tree = random_tree(random.Random(seed))
            assert depth(tree.root) <= 4
            derivative = validate(tree, GRAPH).valid
            verdicts.append(derivative)
            if derivative != oracle_valid(tree, GRAPH):
                disagreements.append(seed)
        assert disagreements == []
        assert 60 <= sum(verdicts) < len(verdicts)

    def test_generator_is_deterministic(self):
        assert random_tree(random.Random(7)) == random_tree(random.Random(7))

    def test_depth_bound(self):
        rng = random.Random(1)
        for _ in range(20):
            assert depth(random_element(rng, "object", 1, 3)) <= 3

    def test_conformant_trees_are_valid(self):
        for seed in range(40):
            tree = conformant_tree(random.Random(seed), max_depth=3)
            assert depth(tree.root) <= 3
            assert validate(tree, GRAPH).valid, seed
            assert oracle_valid(tree, GRAPH), seed


class TestKnownDocuments:
    """Tests over fixtures and mutations"""

    def test_fixtures(self, square_tree, polynomial_tree):
        assert oracle_valid(square_tree, GRAPH)
        assert oracle_valid(polynomial_tree, GRAPH)

    @pytest.mark.parametrize("mutation", MUTATIONS, ids=lambda m: m.name)
    def test_mutations(self, mutation, request):
        text = request.getfixturevalue(f"{mutation.fixture.split('.')[0]}_bytes").decode("utf-8")
        tree = read_document(mutation.apply(text).encode("utf-8"))
        assert oracle_valid(tree, GRAPH) == validate(tree, GRAPH).valid

    @settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(doc=documents())
    def test_generated_documents(self, doc):
        assert oracle_valid(encode(doc), GRAPH)
