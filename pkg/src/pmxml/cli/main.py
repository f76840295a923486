"""
Main CLI entry point for pmxml

Provides commands to validate, inspect, convert, round-trip and check
polymake data files. Reports go to standard output, diagnostics to standard
error; the exit status is the machine contract.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.markup import escape

from pmxml import __version__
from pmxml.cli.summary import render_summary
from pmxml.core.check_runtime import CheckContext, CheckStatus
from pmxml.core.codec import canonical_tree, encode, to_json
from pmxml.core.config import PmxmlConfig, get_config, setup_logging
from pmxml.core.infoset import infoset_equal, write_document
from pmxml.core.pipeline import DocumentPipeline, ExitStatus, LoadResult, write_output
from pmxml.schema.compact import render_compact
from pmxml.schema.grammar import polymake_schema
from pmxml.semantics.checks import default_runtime

app = typer.Typer(
    name="pmxml",
    help="Validate, inspect and convert polymake XML data files",
    add_completion=False,
)
console = Console(highlight=False, emoji=False)

FileArgument = typer.Argument(..., help="polymake XML file", show_default=False)
LaxOption = typer.Option(False, "--lax", help="Accept a root element without namespace")
OutOption = typer.Option(None, "--out", "-o", help="Write to this file instead of standard output")


def _err_console(config: PmxmlConfig) -> Console:
    return Console(stderr=True, no_color=not config.color, highlight=False, emoji=False)


def _report(line: str) -> None:
    console.print(line, markup=False, soft_wrap=True)


def _fail(config: PmxmlConfig, message: str, status: ExitStatus) -> typer.Exit:
    _err_console(config).print(f"[red]error:[/red] {escape(message)}", soft_wrap=True)
    return typer.Exit(code=int(status))


def _load(path: Path, lax: bool) -> tuple[PmxmlConfig, LoadResult]:
    """Run the pipeline; exit with its status when it did not get through"""
    config = get_config()
    result = DocumentPipeline(config, lax=lax or None).load(path)
    if not result.ok:
        raise _fail(config, result.error or "cannot load document", result.status)
    return config, result


def _emit(config: PmxmlConfig, content: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(content, nl=False)
        return
    try:
        write_output(out, content)
    except OSError as e:
        raise _fail(config, f"cannot write {out}: {e.strerror or e}", ExitStatus.IO_ERROR)


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log pipeline detail to standard error"),
):
    """pmxml: tools for polymake XML data files"""
    config = get_config()
    setup_logging("DEBUG" if verbose else config.log_level, config.color)


@app.command()
def validate(path: Path = FileArgument, lax: bool = LaxOption):
    """
    Validate a file against the built-in grammar

    Prints VALID, or one `path: rule: message` line per violation.
    """
    config = get_config()
    result = DocumentPipeline(config, lax=lax or None).validate(path)
    if result.report is None:
        raise _fail(config, result.error or "cannot read document", result.status)
    if result.report.valid:
        _report("VALID")
        return
    for violation in result.report.violations:
        _report(str(violation))
    raise typer.Exit(code=int(ExitStatus.INVALID))


@app.command()
def inspect(path: Path = FileArgument, lax: bool = LaxOption):
    """Summarize type, metadata, properties and attachments"""
    _, result = _load(path, lax)
    assert result.document is not None
    typer.echo(render_summary(result.document), nl=False)


@app.command("to-json")
def to_json_command(
    path: Path = FileArgument,
    out: Optional[Path] = OutOption,
    lax: bool = LaxOption,
):
    """Convert a file to deterministic JSON"""
    config, result = _load(path, lax)
    assert result.document is not None
    _emit(config, to_json(result.document, indent=config.json_indent) + "\n", out)


@app.command()
def roundtrip(
    path: Path = FileArgument,
    check: bool = typer.Option(False, "--check", help="Only verify that re-encoding preserves the infoset"),
    out: Optional[Path] = OutOption,
    lax: bool = LaxOption,
):
    """
    Decode and re-encode a file

    Without --check the canonical form is written out; with --check the
    re-encoded tree is compared against the canonicalized original.
    """
    config, result = _load(path, lax)
    assert result.document is not None and result.tree is not None
    encoded = encode(result.document)
    if check:
        if not infoset_equal(encoded, canonical_tree(result.tree)):
            raise _fail(config, "re-encoded document differs from the original", ExitStatus.INVALID)
        _report("ROUNDTRIP OK")
        return
    _emit(config, write_document(encoded, indent=config.indent).decode("utf-8"), out)


@app.command()
def check(
    path: Optional[Path] = typer.Argument(None, help="polymake XML file", show_default=False),
    only: Optional[list[str]] = typer.Option(
        None, "--only", help="Run just this check; repeat for several"
    ),
    list_checks: bool = typer.Option(False, "--list", help="List the available checks and exit"),
    lax: bool = LaxOption,
):
    """
    Run the semantic checks

    Exits 3 when any check reports a discrepancy or cannot run.
    """
    config = get_config()
    runtime = default_runtime(
        CheckContext(zero_token=config.zero_token, approx_digits=config.approx_digits)
    )
    if list_checks:
        for name, description in runtime.list_checks().items():
            _report(f"{name}: {description}")
        return
    if path is None:
        raise typer.BadParameter("a file is required unless --list is given", param_hint="PATH")
    _, result = _load(path, lax)
    assert result.document is not None
    if only:
        for name in only:
            runtime.execute_check(name, result.document)
    else:
        runtime.execute_all(result.document)
    runs = runtime.get_execution_history()
    for run in runs:
        _report(f"{run.check_name}: {run.status.value}")
        for note in run.notes:
            _report(f"  {note}")
        for discrepancy in run.discrepancies:
            _report(f"  ! {discrepancy}")
        if run.status is CheckStatus.FAILED:
            _report(f"  ! {run.error}")
    if not all(run.clean for run in runs):
        raise typer.Exit(code=int(ExitStatus.DISCREPANCY))


@app.command()
def schema(out: Optional[Path] = OutOption):
    """Print the built-in grammar in RELAX-NG compact syntax"""
    _emit(get_config(), render_compact(polymake_schema()), out)


@app.command()
def version():
    """Show the pmxml version"""
    _report(f"pmxml {__version__}")


if __name__ == "__main__":
    app()
