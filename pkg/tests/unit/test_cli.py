"""
Unit tests for CLI commands

Tests cover:
- validate and its violation lines
- inspect summaries
- to-json and roundtrip output
- check reports
- schema and version
"""

import json

import pytest
from typer.testing import CliRunner

from pmxml.cli.main import app
from pmxml.schema.grammar import POLYMAKE_NAMESPACE

runner = CliRunner()


@pytest.fixture
def bare_data(write_xml):
    return write_xml('<data type="Int"><v>1 2</v></data>', "bare.xml")


class TestCLIVersion:
    """Test version command"""

    def test_version_command(self):
        result = runner.invoke(app, ["version"])
        assert result.exit_code == 0
        assert result.stdout == "pmxml 0.1.0\n"


class TestCLIValidate:
    """Test validate command"""

    def test_valid(self, square_path):
        result = runner.invoke(app, ["validate", str(square_path)])
        assert result.exit_code == 0
        assert result.stdout == "VALID\n"

    def test_violation_line(self, square_text, write_xml):
        path = write_xml(square_text.replace('name="VOLUME"', 'name="1VOLUME"'))
        result = runner.invoke(app, ["validate", str(path)])
        assert result.exit_code == 1
        assert result.stdout == (
            "/object/property[7]: SimpleName: invalid value '1VOLUME' for attribute 'name'\n"
        )

    def test_lax(self, bare_data):
        assert runner.invoke(app, ["validate", str(bare_data)]).exit_code == 1
        result = runner.invoke(app, ["validate", "--lax", str(bare_data)])
        assert result.exit_code == 0
        assert result.stdout == "VALID\n"

    def test_missing_file(self, tmp_path):
        result = runner.invoke(app, ["validate", str(tmp_path / "absent.xml")])
        assert result.exit_code == 2
        assert "cannot read" in result.output

    def test_not_well_formed(self, write_xml):
        result = runner.invoke(app, ["validate", str(write_xml("<object"))])
        assert result.exit_code == 1
        assert "not well-formed" in result.output


class TestCLIInspect:
    """Test inspect command"""

    def test_square(self, square_path):
        result = runner.invoke(app, ["inspect", str(square_path)])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[:3] == ["object: polytope::Polytope<Rational>", "version: 3.0", "name: square"]
        assert "properties: 8" in lines
        for expected in (
            "  VERTICES: matrix 4×3 dense",
            "  FACETS: matrix 4×3 sparse",
            "  LINEALITY_SPACE: matrix 0×0",
            "  BOUNDED: scalar true",
            "  VOLUME: scalar 1/9",
            "  TRIANGULATION: 1 subobject",
        ):
            assert expected in lines

    def test_polynomial(self, polynomial_path):
        result = runner.invoke(app, ["inspect", str(polynomial_path)])
        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "data: Array<Polynomial<QuadraticExtension>>; vector of 1 tuple",
            "version: 3.0",
        ]

    def test_invalid_document(self, square_text, write_xml):
        path = write_xml(square_text.replace('type="polytope::', 'type="'))
        result = runner.invoke(app, ["inspect", str(path)])
        assert result.exit_code == 1
        assert "schema violation" in result.output

    def test_padded_text_type(self, write_xml):
        path = write_xml(
            f'<object type="polytope::Polytope" xmlns="{POLYMAKE_NAMESPACE}">'
            '<property name="NOTE" type=" text ">hi</property></object>'
        )
        result = runner.invoke(app, ["inspect", str(path)])
        assert result.exit_code == 0
        assert "object: polytope::Polytope" in result.stdout


class TestCLIToJson:
    """Test to-json command"""

    def test_stdout(self, square_path):
        result = runner.invoke(app, ["to-json", str(square_path)])
        assert result.exit_code == 0
        parsed = json.loads(result.stdout)
        assert parsed["kind"] == "object"
        assert parsed["type"] == "polytope::Polytope<Rational>"
        assert result.stdout.endswith("\n")

    def test_out_file(self, polynomial_path, tmp_path):
        target = tmp_path / "poly.json"
        result = runner.invoke(app, ["to-json", str(polynomial_path), "--out", str(target)])
        assert result.exit_code == 0
        assert result.stdout == ""
        assert json.loads(target.read_text(encoding="utf-8"))["kind"] == "data"

    def test_unwritable_out(self, polynomial_path, tmp_path):
        target = tmp_path / "missing" / "poly.json"
        result = runner.invoke(app, ["to-json", str(polynomial_path), "-o", str(target)])
        assert result.exit_code == 2
        assert "cannot write" in result.output

    def test_json_indent_from_env(self, polynomial_path, monkeypatch):
        from pmxml.core.config import set_config

        monkeypatch.setenv("PMXML_JSON_INDENT", "2")
        set_config(None)
        result = runner.invoke(app, ["to-json", str(polynomial_path)])
        assert result.exit_code == 0
        assert result.stdout.startswith('{\n  "kind": "data"')


class TestCLIRoundtrip:
    """Test roundtrip command"""

    def test_check(self, square_path):
        result = runner.invoke(app, ["roundtrip", "--check", str(square_path)])
        assert result.exit_code == 0
        assert result.stdout == "ROUNDTRIP OK\n"

    def test_canonical_output(self, polynomial_path):
        result = runner.invoke(app, ["roundtrip", str(polynomial_path)])
        assert result.exit_code == 0
        assert result.stdout.startswith('<?xml version="1.0" encoding="utf-8"?>\n<data ')
        assert f'xmlns="{POLYMAKE_NAMESPACE}"' in result.stdout

    def test_output_revalidates(self, square_path, tmp_path):
        target = tmp_path / "square.xml"
        assert runner.invoke(app, ["roundtrip", str(square_path), "-o", str(target)]).exit_code == 0
        assert runner.invoke(app, ["validate", str(target)]).stdout == "VALID\n"

    def test_duplicate_ids(self, write_xml):
        path = write_xml(
            f'<data type="Int" xmlns="{POLYMAKE_NAMESPACE}">'
            '<t><t id="3">a</t><t id="3">b</t></t></data>'
        )
        result = runner.invoke(app, ["roundtrip", "--check", str(path)])
        assert result.exit_code == 1
        assert "duplicate id 3" in result.output

    @pytest.mark.parametrize(
        "body",
        [
            '<data type="Vector&lt;Int&gt;" {ns}><v dim="+03"><e i="01">5</e></v></data>',
            '<data type="Int" value="4" {ns}>  </data>',
            '<object type="polytope::Polytope" {ns}>  </object>',
            '<object type="polytope::Polytope" {ns}><property name="U" undef=" true "/></object>',
            (
                '<object type="polytope::Polytope" {ns}>'
                '<property name="NOTE" type=" text ">hi</property></object>'
            ),
        ],
    )
    def test_check_accepts_noncanonical_spelling(self, body, write_xml):
        path = write_xml(body.format(ns=f'xmlns="{POLYMAKE_NAMESPACE}"'))
        result = runner.invoke(app, ["roundtrip", "--check", str(path)])
        assert result.exit_code == 0
        assert result.stdout == "ROUNDTRIP OK\n"


class TestCLICheck:
    """Test check command"""

    def test_square(self, square_path):
        result = runner.invoke(app, ["check", str(square_path)])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[:2] == ["incidence: passed", "  16/16 products >= 0"]
        assert "polynomials: skipped" in lines

    def test_polynomial(self, polynomial_path):
        result = runner.invoke(app, ["check", str(polynomial_path)])
        assert result.exit_code == 0
        assert "  polynomial 0: 1/5√5*x^2 + -1*y^3" in result.stdout.splitlines()

    def test_moved_vertex(self, square_text, write_xml):
        path = write_xml(square_text.replace("<v>1 1/3 1/3</v>", "<v>1 1 1</v>"))
        result = runner.invoke(app, ["check", str(path)])
        assert result.exit_code == 3
        assert "incidence: discrepant" in result.stdout
        assert "  ! vertex 3 violates facet 1: product -2/3" in result.stdout.splitlines()

    def test_failed_check_exits_3(self, square_text, write_xml):
        path = write_xml(square_text.replace('<m cols="3">', '<m cols="4">'))
        result = runner.invoke(app, ["check", str(path)])
        assert result.exit_code == 3
        assert "incidence: failed" in result.stdout

    def test_list(self):
        result = runner.invoke(app, ["check", "--list"])
        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "incidence: VERTICES x FACETS products are nonnegative",
            "counts: N_FACETS and N_VERTICES match the stored matrices",
            "triangulation: TRIANGULATION indices and face counts are consistent",
            "references: every <r/> carries an id",
            "polynomials: polynomial data decodes",
        ]

    def test_file_required_without_list(self):
        result = runner.invoke(app, ["check"])
        assert result.exit_code == 2
        assert "--list" in result.output

    def test_only(self, square_path):
        result = runner.invoke(
            app, ["check", "--only", "counts", "--only", "references", str(square_path)]
        )
        assert result.exit_code == 0
        assert result.stdout.splitlines() == ["counts: passed", "references: passed"]

    def test_only_unknown_check(self, square_path):
        result = runner.invoke(app, ["check", "--only", "volume", str(square_path)])
        assert result.exit_code == 3
        assert result.stdout.splitlines() == ["volume: failed", "  ! Check 'volume' not found"]


class TestCLISchema:
    """Test schema command"""

    def test_prints_grammar(self):
        result = runner.invoke(app, ["schema"])
        assert result.exit_code == 0
        assert result.stdout.startswith("# polymake data file grammar")
        assert "start = TopObject | LooseData" in result.stdout


class TestCLIVerbose:
    def test_verbose_logs_to_stderr(self, square_path):
        result = runner.invoke(app, ["--verbose", "validate", str(square_path)])
        assert result.exit_code == 0
        assert "VALID" in result.stdout
