"""
Pytest configuration and shared fixtures

Provides the two reference data files (a square with its triangulation and
an array holding one polynomial), their trees and decoded documents, and
isolates every test from PMXML_* environment settings.
"""

from pathlib import Path

import pytest

from pmxml.core.codec import decode
from pmxml.core.config import ENV_MAPPINGS, PmxmlConfig, set_config
from pmxml.core.infoset import read_document

FIXTURES = Path(__file__).parent / "fixtures"


# ============================================================================
# Environment isolation
# ============================================================================


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch):
    """Every test starts from default settings"""
    for env_var in list(ENV_MAPPINGS) + ["PMXML_CONFIG"]:
        monkeypatch.delenv(env_var, raising=False)
    set_config(PmxmlConfig())
    yield
    set_config(None)


# ============================================================================
# Fixture files
# ============================================================================


@pytest.fixture
def square_path() -> Path:
    return FIXTURES / "square.xml"


@pytest.fixture
def polynomial_path() -> Path:
    return FIXTURES / "polynomial.xml"


@pytest.fixture
def square_bytes(square_path) -> bytes:
    return square_path.read_bytes()


@pytest.fixture
def polynomial_bytes(polynomial_path) -> bytes:
    return polynomial_path.read_bytes()


@pytest.fixture
def square_text(square_bytes) -> str:
    return square_bytes.decode("utf-8")


@pytest.fixture
def polynomial_text(polynomial_bytes) -> str:
    return polynomial_bytes.decode("utf-8")


@pytest.fixture
def square_tree(square_bytes):
    return read_document(square_bytes)


@pytest.fixture
def polynomial_tree(polynomial_bytes):
    return read_document(polynomial_bytes)


@pytest.fixture
def square_doc(square_tree):
    return decode(square_tree)


@pytest.fixture
def polynomial_doc(polynomial_tree):
    return decode(polynomial_tree)


@pytest.fixture
def write_xml(tmp_path):
    """Write XML text to a temporary file and return its path"""

    def _write(text: str, name: str = "doc.xml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
