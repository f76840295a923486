"""
Check Runtime System

Provides the base check interface and the runtime that executes semantic
checks against decoded documents, recording one CheckRun per check.
"""

import logging
from abc import ABC, abstractmethod
from datetime import datetime
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from pmxml.core.models import Document

logger = logging.getLogger(__name__)


class CheckStatus(str, Enum):
    """Outcome of one check"""
    PENDING = "pending"
    PASSED = "passed"
    DISCREPANT = "discrepant"
    FAILED = "failed"
    SKIPPED = "skipped"


class CheckContext(BaseModel):
    """Settings a check may need while interpreting tokens"""

    model_config = ConfigDict(frozen=True)

    zero_token: str = "0"
    approx_digits: int = Field(default=12, ge=1)


class CheckOutcome(BaseModel):
    """What a check found: discrepancies fail the run, notes are informational"""

    discrepancies: list[str] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)


class CheckRun(BaseModel):
    """
    Record of a check execution

    Tracks timing, status, findings and the error of a check that raised.
    """
    check_name: str = Field(..., description="Name of the check")
    status: CheckStatus = Field(default=CheckStatus.PENDING)
    discrepancies: list[str] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    started_at: datetime = Field(default_factory=datetime.now)
    completed_at: Optional[datetime] = None
    error: Optional[str] = Field(None, description="Error message if the check raised")
    duration_seconds: Optional[float] = None

    @property
    def clean(self) -> bool:
        """Passed or not applicable"""
        return self.status in (CheckStatus.PASSED, CheckStatus.SKIPPED)

    def _finish(self) -> None:
        self.completed_at = datetime.now()
        self.duration_seconds = (self.completed_at - self.started_at).total_seconds()


class BaseCheck(ABC):
    """
    Abstract base class for semantic checks

    A check inspects a decoded Document and reports discrepancies between
    stored data and what the data implies. It never modifies the document.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Unique identifier for this check (e.g. "incidence")"""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    def applies_to(self, doc: Document) -> bool:
        """Whether the document has anything for this check to look at"""
        return True

    @abstractmethod
    def run(self, doc: Document, context: CheckContext) -> CheckOutcome:
        """
        Examine the document

        Raises:
            PmxmlError: Content the check cannot interpret; the runtime
                records the run as failed
        """
        pass


class CheckRuntime:
    """
    Runtime environment for executing checks

    Handles check registration, execution with error capture, logging and
    the execution history.
    """

    def __init__(self, context: Optional[CheckContext] = None):
        self.context = context or CheckContext()
        self._checks: dict[str, BaseCheck] = {}
        self._execution_history: list[CheckRun] = []

    def register_check(self, check: BaseCheck) -> None:
        """
        Register a check with the runtime

        Raises:
            ValueError: If a check with the same name is already registered
        """
        if check.name in self._checks:
            raise ValueError(f"Check '{check.name}' is already registered")
        self._checks[check.name] = check
        logger.debug(f"Registered check: {check.name}")

    def get_check(self, name: str) -> Optional[BaseCheck]:
        return self._checks.get(name)

    def list_checks(self) -> dict[str, str]:
        """Check names mapped to descriptions, in registration order"""
        return {name: check.description for name, check in self._checks.items()}

    def execute_check(self, check_name: str, doc: Document) -> CheckRun:
        """
        Run one check, capturing any exception in the returned record

        An unknown check name yields a failed run rather than raising.
        """
        run = CheckRun(check_name=check_name)
        check = self.get_check(check_name)
        if check is None:
            run.status = CheckStatus.FAILED
            run.error = f"Check '{check_name}' not found"
            logger.error(run.error)
            run._finish()
            self._execution_history.append(run)
            return run

        try:
            if not check.applies_to(doc):
                run.status = CheckStatus.SKIPPED
                logger.debug(f"Check {check_name} does not apply; skipped")
            else:
                logger.info(f"Executing check: {check_name}")
                outcome = check.run(doc, self.context)
                run.discrepancies = list(outcome.discrepancies)
                run.notes = list(outcome.notes)
                run.status = CheckStatus.DISCREPANT if run.discrepancies else CheckStatus.PASSED
                for message in run.discrepancies:
                    logger.info(f"{check_name}: {message}")
        except Exception as e:
            run.status = CheckStatus.FAILED
            run.error = str(e)
            logger.error(f"Check {check_name} failed: {e}")
            logger.debug("Check traceback", exc_info=True)
        run._finish()
        logger.debug(f"Check {check_name} finished as {run.status.value} in {run.duration_seconds:.3f}s")
        self._execution_history.append(run)
        return run

    def execute_all(self, doc: Document) -> list[CheckRun]:
        """Run every registered check in registration order"""
        return [self.execute_check(name, doc) for name in self._checks]

    def get_execution_history(self) -> list[CheckRun]:
        return self._execution_history.copy()
