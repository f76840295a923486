"""
Tests for the grammar, the derivative validator and the compact renderer

Tests cover:
- The built-in grammar's productions and namespace
- Acceptance of the reference files and of small valid documents
- Diagnostics (path, rule, message) for rejected documents
- Lax namespace handling
- Compact syntax rendering
"""

import pytest

from pmxml.core.errors import SchemaInternalError
from pmxml.core.infoset import read_document
from pmxml.schema.compact import render_compact, render_pattern
from pmxml.schema.grammar import POLYMAKE_NAMESPACE, PRODUCTION_NAMES, polymake_schema
from pmxml.schema.patterns import (
    EMPTY,
    TEXT,
    Datatype,
    PatternGraph,
    attribute,
    choice,
    data,
    element,
    group,
    interleave,
    one_or_more,
    optional,
    ref,
    zero_or_more,
)
from pmxml.schema.validator import ValidationReport, Violation, nullable, validate

NS_DECL = f'xmlns="{POLYMAKE_NAMESPACE}"'


def check(text: str, lax: bool = False) -> ValidationReport:
    return validate(read_document(text.encode("utf-8")), polymake_schema(), lax=lax)


def check_graph(text: str, graph: PatternGraph) -> ValidationReport:
    return validate(read_document(text.encode("utf-8")), graph)


class TestGrammar:
    """Tests for the built-in pattern graph"""

    def test_productions(self):
        graph = polymake_schema()
        assert tuple(graph.definitions) == PRODUCTION_NAMES
        assert len(graph.definitions) == 20

    def test_namespace(self):
        assert polymake_schema().namespace == POLYMAKE_NAMESPACE

    def test_graph_is_cached(self):
        assert polymake_schema() is polymake_schema()

    def test_every_reference_defined(self):
        """Resolving every production's references never fails"""
        graph = polymake_schema()
        text = render_compact(graph)
        for name in PRODUCTION_NAMES:
            assert graph.lookup(name) is not None
            assert f"\n{name} = " in text

    def test_definitions_are_read_only(self):
        with pytest.raises(TypeError):
            polymake_schema().definitions["Extra"] = EMPTY


class TestValidateAccepts:
    """Documents the grammar accepts"""

    def test_square(self, square_tree):
        assert validate(square_tree, polymake_schema()).valid

    def test_polynomial(self, polynomial_tree):
        assert validate(polynomial_tree, polymake_schema()).valid

    def test_scalar_loose_data(self):
        assert check(f'<data type="Int" value="5" {NS_DECL}/>').valid

    def test_text_attachment_and_credit(self):
        doc = (
            f'<object type="polytope::Polytope" {NS_DECL}>'
            '<credit product="cdd">by hand</credit>'
            '<property name="N_VERTICES" value="4"/>'
            '<attachment name="NOTE" type="text">hi</attachment>'
            '<property name="N_FACETS" value="4"/>'
            "</object>"
        )
        assert check(doc).valid

    def test_undefined_property(self):
        doc = f'<object type="a::B" {NS_DECL}><property name="X" undef="true"/></object>'
        assert check(doc).valid

    def test_sparse_matrix_rows(self):
        doc = (
            f'<data type="SparseMatrix&lt;Int&gt;" {NS_DECL}>'
            '<m dim="4"><v i="1" dim="3"><e i="2">5</e></v><v i="3">1 2 3</v></m>'
            "</data>"
        )
        assert check(doc).valid

    def test_complex_attachment(self):
        doc = (
            f'<object type="a::B" {NS_DECL}>'
            '<attachment name="LABELS" type="Array&lt;String&gt;" construct="x"><v>a b</v></attachment>'
            "</object>"
        )
        assert check(doc).valid

    def test_array_of_subobjects(self):
        doc = (
            f'<data type="Array&lt;Polytope&gt;" {NS_DECL}>'
            '<m><object type="polytope::Polytope"/><object/></m>'
            "</data>"
        )
        assert check(doc).valid

    def test_version_and_tm(self):
        doc = f'<data type="Int" value="1" version="3.0.1" tm="0a1b" {NS_DECL}/>'
        assert check(doc).valid


class TestValidateRejects:
    """Diagnostics for documents the grammar rejects"""

    def test_missing_root_type(self, square_text):
        text = square_text.replace(' type="polytope::Polytope&lt;Rational&gt;"', "")
        report = check(text)
        assert not report.valid
        assert str(report.violations[0]) == "/object: TopAttribs: missing required attribute 'type'"

    def test_bad_property_name(self, square_text):
        text = square_text.replace('name="VOLUME"', 'name="1VOLUME"')
        violation = check(text).violations[0]
        assert violation.path == "/object/property[7]"
        assert violation.rule == "SimpleName"
        assert violation.message == "invalid value '1VOLUME' for attribute 'name'"

    def test_unexpected_element(self, square_text):
        text = square_text.replace('<property name="VOLUME" value="1/9" />', "<bogus/>")
        violation = check(text).violations[0]
        assert violation.path == "/object"
        assert "unexpected element <bogus>" in violation.message

    def test_sparse_entry_without_index(self, square_text):
        text = square_text.replace("<v>1 0 0</v>", "<v><e>1</e></v>")
        report = check(text)
        assert not report.valid
        assert report.violations[0].path.startswith("/object/property[1]")

    def test_object_type_without_application(self):
        report = check(f'<object type="Polytope" {NS_DECL}/>')
        assert not report.valid
        assert report.violations[0].rule == "TopAttribs"

    def test_single_violation(self, square_text):
        """Only the deepest violation is reported"""
        text = square_text.replace('name="VOLUME"', 'name="1VOLUME"')
        assert len(check(text).violations) == 1

    def test_unknown_root(self):
        report = check(f"<polytope {NS_DECL}/>")
        assert report.violations[0].rule == "start"
        assert "unexpected element <polytope>" in report.violations[0].message


class TestNamespaces:
    """Tests for strict and lax namespace handling"""

    @pytest.fixture
    def bare_square(self, square_text):
        return square_text.replace(f" {NS_DECL}", "")

    def test_strict_rejects_missing_namespace(self, bare_square):
        violation = check(bare_square).violations[0]
        assert violation.path == "/object"
        assert violation.rule == "start"
        assert "no namespace" in violation.message

    def test_lax_accepts_missing_namespace(self, bare_square):
        assert check(bare_square, lax=True).valid

    def test_lax_rejects_foreign_namespace(self, square_text):
        text = square_text.replace(POLYMAKE_NAMESPACE, "urn:other")
        assert not check(text, lax=True).valid


class TestSmallGraphs:
    """Validator behavior on hand-built grammars"""

    def test_interleave_any_order(self):
        graph = PatternGraph(
            definitions={}, start=element("a", interleave(element("b"), element("c")))
        )
        assert check_graph("<a><c/><b/></a>", graph).valid
        assert check_graph("<a><b/><c/></a>", graph).valid
        assert not check_graph("<a><b/></a>", graph).valid

    def test_group_order(self):
        graph = PatternGraph(definitions={}, start=element("a", element("b"), element("c")))
        assert check_graph("<a><b/><c/></a>", graph).valid
        assert not check_graph("<a><c/><b/></a>", graph).valid

    def test_formatting_whitespace_between_elements(self):
        graph = PatternGraph(definitions={}, start=element("a", one_or_more(element("b"))))
        assert check_graph("<a>\n  <b/>\n  <b/>\n</a>", graph).valid

    def test_attribute_diagnostics(self):
        graph = PatternGraph(
            definitions={},
            start=element("a", attribute("x", data(Datatype.NON_NEGATIVE_INTEGER))),
        )
        assert check_graph('<a x="3"/>', graph).valid
        assert check_graph('<a x="-3"/>', graph).violations[0].message == (
            "invalid value '-3' for attribute 'x'"
        )
        assert check_graph("<a/>", graph).violations[0].message == (
            "missing required attribute 'x'"
        )
        assert check_graph('<a x="1" y="2"/>', graph).violations[0].message == (
            "attribute 'y' not allowed"
        )

    def test_text_diagnostics(self):
        graph = PatternGraph(
            definitions={}, start=element("a", data(Datatype.NON_NEGATIVE_INTEGER))
        )
        assert check_graph("<a>12</a>", graph).valid
        assert check_graph("<a>x</a>", graph).violations[0].message == "text 'x' not allowed here"

    def test_recursive_reference(self):
        graph = PatternGraph(
            definitions={"Node": element("n", zero_or_more(ref("Node")))},
            start=ref("Node"),
        )
        assert check_graph("<n><n><n/></n><n/></n>", graph).valid
        assert not check_graph("<n><m/></n>", graph).valid

    def test_dangling_reference(self):
        graph = PatternGraph(definitions={}, start=ref("Missing"))
        with pytest.raises(SchemaInternalError, match="Missing"):
            check_graph("<a/>", graph)

    def test_nullable(self):
        graph = PatternGraph(definitions={"B": element("b")}, start=ref("B"))
        assert nullable(EMPTY, graph)
        assert nullable(zero_or_more(ref("B")), graph)
        assert not nullable(ref("B"), graph)
        assert not nullable(one_or_more(ref("B")), graph)


class TestValidationReport:
    """Tests for the report model"""

    def test_valid_means_no_violations(self):
        violation = Violation(path="/a", rule="start", message="m")
        with pytest.raises(ValueError):
            ValidationReport(valid=True, violations=(violation,))
        with pytest.raises(ValueError):
            ValidationReport(valid=False)

    def test_violation_format(self):
        violation = Violation(path="/object/property[3]", rule="Property", message="bad")
        assert str(violation) == "/object/property[3]: Property: bad"


class TestCompact:
    """Tests for compact syntax rendering"""

    def test_quantifiers(self):
        assert render_pattern(optional(attribute("x"))) == "attribute x { text }?"
        assert render_pattern(zero_or_more(ref("A"))) == "A*"
        assert render_pattern(one_or_more(ref("A"))) == "A+"

    def test_mixed_operators_parenthesized(self):
        assert render_pattern(choice(ref("A"), group(ref("B"), ref("C")))) == "A | ( B, C )"

    def test_chains_flattened(self):
        assert render_pattern(choice(ref("A"), ref("B"), ref("C"))) == "A | B | C"
        assert render_pattern(interleave(ref("A"), ref("B"))) == "A & B"

    def test_element_and_datatypes(self):
        assert render_pattern(element("e", ref("ElementIndex"), TEXT)) == (
            "element e { ElementIndex, text }"
        )
        assert render_pattern(data(Datatype.STRING, "[a-z]+")) == 'xsd:string { pattern = "[a-z]+" }'
        assert render_pattern(data(Datatype.HEX_BINARY)) == "xsd:hexBinary"

    def test_whole_grammar(self):
        text = render_compact(polymake_schema())
        assert f'default namespace = "{POLYMAKE_NAMESPACE}"' in text
        assert "start = TopObject | LooseData" in text
        assert "ElementIndex = attribute i { xsd:nonNegativeInteger }" in text
        assert "IdReference = element r { attribute id { xsd:nonNegativeInteger }?, empty }" in text
        assert "Tuple = element t { TupleContents }" in text

    def test_loose_data_type_is_free_text(self):
        """Only top-level objects carry the application-qualified type pattern"""
        text = render_compact(polymake_schema())
        loose_line = next(line for line in text.splitlines() if line.startswith("LooseData ="))
        assert "attribute type { text }" in loose_line
        assert "pattern" not in loose_line
        assert 'attribute type { xsd:string { pattern = "' in text
        assert check(f'<data type="Array&lt;Int&gt;" value="1 2" {NS_DECL}/>').valid
