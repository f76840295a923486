"""
Document Pipeline - the read, validate, decode chain shared by every command

The pipeline:
1. Reads the file bytes into an XmlTree
2. Validates the tree against the built-in grammar
3. Decodes the tree into a Document

Each stage maps its failure onto an ExitStatus so commands can stop at the
first stage they do not get past.
"""

import logging
import os
import tempfile
from enum import IntEnum
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict

from pmxml.core.codec import DecodeOptions, decode
from pmxml.core.config import PmxmlConfig, get_config
from pmxml.core.errors import (
    CodecError,
    DecodeError,
    ModelError,
    SchemaViolationError,
    WellFormednessError,
)
from pmxml.core.infoset import XmlTree, read_document
from pmxml.core.models import Document
from pmxml.schema.grammar import polymake_schema
from pmxml.schema.validator import ValidationReport, validate

logger = logging.getLogger(__name__)


class ExitStatus(IntEnum):
    """Process exit codes, the machine contract of the CLI"""
    OK = 0
    INVALID = 1
    IO_ERROR = 2
    DISCREPANCY = 3


class LoadResult(BaseModel):
    """How far a file got through the pipeline"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    path: Path
    status: ExitStatus = ExitStatus.OK
    error: Optional[str] = None
    tree: Optional[XmlTree] = None
    report: Optional[ValidationReport] = None
    document: Optional[Document] = None

    @property
    def ok(self) -> bool:
        return self.status is ExitStatus.OK


class DocumentPipeline:
    """
    Runs files through read, validate and decode

    `lax` overrides the configured namespace strictness for this pipeline.
    """

    def __init__(self, config: Optional[PmxmlConfig] = None, lax: Optional[bool] = None):
        self.config = config or get_config()
        self.lax = self.config.lax_namespace if lax is None else lax

    def read(self, path: Union[str, Path]) -> LoadResult:
        """Stage 1: bytes to tree"""
        result = LoadResult(path=Path(path))
        logger.info(f"Stage 1: Reading {result.path}")
        try:
            data = result.path.read_bytes()
        except OSError as e:
            return self._fail(result, ExitStatus.IO_ERROR, f"cannot read {result.path}: {e.strerror or e}")
        try:
            result.tree = read_document(data)
        except WellFormednessError as e:
            return self._fail(result, ExitStatus.INVALID, f"not well-formed: {e}")
        return result

    def validate(self, path: Union[str, Path]) -> LoadResult:
        """Stages 1-2: the result carries the validation report"""
        result = self.read(path)
        if not result.ok:
            return result
        assert result.tree is not None
        logger.info("Stage 2: Validating")
        result.report = validate(result.tree, polymake_schema(), lax=self.lax)
        if not result.report.valid:
            logger.debug(f"{len(result.report.violations)} violation(s)")
            result.status = ExitStatus.INVALID
        return result

    def load(self, path: Union[str, Path]) -> LoadResult:
        """All stages: the result carries the Document"""
        if self.config.validate_first:
            result = self.validate(path)
        else:
            result = self.read(path)
        if not result.ok:
            if result.report is not None and result.error is None:
                first = result.report.violations[0]
                result.error = f"schema violation: {first}"
            return result
        assert result.tree is not None
        logger.info("Stage 3: Decoding")
        # validation, when wanted, already happened in stage 2
        options = DecodeOptions(lax_namespace=self.lax, validate_first=False)
        try:
            result.document = decode(result.tree, options)
        except (SchemaViolationError, DecodeError, ModelError, CodecError) as e:
            return self._fail(result, ExitStatus.INVALID, str(e))
        return result

    def _fail(self, result: LoadResult, status: ExitStatus, message: str) -> LoadResult:
        logger.debug(f"Pipeline stopped: {message}")
        result.status = status
        result.error = message
        return result


def write_output(path: Union[str, Path], content: str) -> None:
    """
    Write text next to its destination, then move it into place

    A failed write leaves any existing file untouched.

    Raises:
        OSError: Directory missing or not writable
    """
    target = Path(path)
    fd, staging = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(staging, target)
    except BaseException:
        Path(staging).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {len(content)} characters to {target}")
