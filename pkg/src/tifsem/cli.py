"""Command-line pipeline: ingest, map, query, export, validate, fixtures.

Subcommands stage their work through ordinary files (canonical N-Triples for
graphs, TSV for issue reports) so every intermediate is inspectable and
diff-able.  Exit codes: 0 success, 1 domain error, 2 usage or I/O error.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from tifsem import fixtures as fixtures_mod
from tifsem import mapping, query as query_mod, serialize
from tifsem.errors import TifsemError
from tifsem.graph import DEFAULT_BASE_IRI, Graph, IRI, assert_io
from tifsem.ingest import (
    IDENTITY_PROFILE,
    RawDocument,
    ValidationIssue,
    format_issues,
    load_profile,
    parse_tif,
    validate_io,
)

_BASE_OPTION = click.option(
    "--base",
    envvar="TIFSEM_BASE_IRI",
    default=DEFAULT_BASE_IRI,
    show_default=True,
    help="Base IRI under which resource identifiers are minted.",
)

_EXTENSION_FORMATS = {".nt": "nt", ".ttl": "ttl", ".jsonld": "jsonld"}


@dataclass(frozen=True)
class PipelineConfig:
    """Resolved parameters of one pipeline stage.

    The output format may be given explicitly or inferred from the output
    path's extension; when both are present they must agree.
    """

    base_iri: str = DEFAULT_BASE_IRI
    profile_path: Optional[str] = None
    rules_paths: tuple[str, ...] = ()
    inputs: tuple[str, ...] = ()
    output_path: str = ""
    output_format: Optional[str] = None  # nt | ttl | jsonld

    def __post_init__(self) -> None:
        ext = _EXTENSION_FORMATS.get(Path(self.output_path).suffix.lower())
        if self.output_format is not None and ext is not None and self.output_format != ext:
            raise click.UsageError(
                f"--format {self.output_format} conflicts with the "
                f"{Path(self.output_path).suffix!r} output extension"
            )

    def resolved_format(self, default: str = "nt") -> str:
        if self.output_format is not None:
            return self.output_format
        return _EXTENSION_FORMATS.get(Path(self.output_path).suffix.lower(), default)


def _write_graph(g: Graph, config: PipelineConfig) -> None:
    fmt = config.resolved_format()
    try:
        if fmt == "ttl":
            Path(config.output_path).write_text(serialize.to_turtle(g), encoding="utf-8")
        elif fmt == "nt":
            serialize.save_graph(g, config.output_path)
        else:
            raise click.UsageError(f"graph output does not support format {fmt!r}")
    except OSError as exc:
        _fail(str(exc), 2)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        _fail(str(exc), 2)
        raise AssertionError  # unreachable


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), 2)
        raise AssertionError


def _load_graph(path: str) -> Graph:
    text = _read_text(path)
    try:
        return serialize.from_ntriples(text)
    except TifsemError as exc:
        _fail(f"{path}: {exc}", 1)
        raise AssertionError


@click.group()
@click.version_option(package_name="tifsem")
def main() -> None:
    """Turn TourInFrance XML dialects into a Schema.org-aligned graph."""


@main.command()
@click.argument("inputs", nargs=-1, type=click.Path())
@click.option("--profile", "profile_path", type=click.Path(), help="Dialect profile JSON.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output graph file.")
@click.option("--issues", "issues_path", type=click.Path(), help="Issue report path (default: OUT.issues.tsv).")
@click.option("--format", "fmt", type=click.Choice(["nt", "ttl"]), default=None,
              help="Graph format (default: from the output extension, else nt).")
@_BASE_OPTION
def ingest(inputs: tuple[str, ...], profile_path: str | None, out_path: str,
           issues_path: str | None, fmt: str | None, base: str) -> None:
    """Parse XML INPUTS into one canonical graph plus an issue report."""
    if not inputs:
        raise click.UsageError("at least one input file is required")
    config = PipelineConfig(
        base_iri=base, profile_path=profile_path, inputs=inputs,
        output_path=out_path, output_format=fmt,
    )
    profile = IDENTITY_PROFILE
    if profile_path is not None:
        try:
            profile = load_profile(_read_text(profile_path))
        except TifsemError as exc:
            _fail(str(exc), 1)

    documents = [RawDocument(source_uri=path, data=_read_bytes(path)) for path in inputs]
    g = Graph()
    issues: list[ValidationIssue] = []
    try:
        # per-file parsing is pure, so files parse concurrently; merging
        # stays sequential in input order to keep issue reports stable
        with ThreadPoolExecutor(max_workers=min(8, len(documents))) as pool:
            parsed = list(pool.map(lambda d: parse_tif(d, profile), documents))
        for ios, parse_issues in parsed:
            issues.extend(parse_issues)
            for io in ios:
                io_issues = validate_io(io)
                issues.extend(io_issues)
                blocking = any(i.severity == "error" for i in io_issues) or any(
                    i.severity == "error" and i.io_id == io.id for i in parse_issues
                )
                if not blocking:
                    assert_io(g, io, base)
    except TifsemError as exc:
        _fail(str(exc), 1)

    issues_file = Path(issues_path) if issues_path else Path(out_path).with_suffix(".issues.tsv")
    _write_graph(g, config)
    try:
        issues_file.write_text(format_issues(issues), encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), 2)

    errors = sum(1 for i in issues if i.severity == "error")
    click.echo(f"ingested {len(inputs)} file(s): {len(g)} triples, "
               f"{errors} error(s), {len(issues) - errors} warning(s)")
    if errors:
        sys.exit(1)


@main.command(name="map")
@click.option("--graph", "graph_path", required=True, type=click.Path(), help="Input .nt file.")
@click.option("--rules", "rules_paths", multiple=True, type=click.Path(),
              help="Extra rule documents, appended to the builtin rules.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output graph file.")
@click.option("--format", "fmt", type=click.Choice(["nt", "ttl"]), default=None,
              help="Graph format (default: from the output extension, else nt).")
def map_cmd(graph_path: str, rules_paths: tuple[str, ...], out_path: str, fmt: str | None) -> None:
    """Materialize Schema.org alignments into the graph."""
    config = PipelineConfig(rules_paths=rules_paths, output_path=out_path, output_format=fmt)
    g = _load_graph(graph_path)
    rules = mapping.builtin_rules()
    for path in rules_paths:
        try:
            rules.extend(mapping.load_rules(_read_text(path)))
        except TifsemError as exc:
            _fail(f"{path}: {exc}", 1)
    rules = list(dict.fromkeys(rules))

    report = mapping.materialize(g, rules)
    _write_graph(g, config)

    click.echo(f"inferred {report.inferred_triples} triple(s)")
    for line in mapping.check_consistency(rules):
        click.echo(f"note: {line}")


@main.command(name="query")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--query", "query_path", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table", show_default=True)
def query_cmd(graph_path: str, query_path: str, fmt: str) -> None:
    """Evaluate a query file against a graph file."""
    g = _load_graph(graph_path)
    try:
        q = query_mod.parse_query(_read_text(query_path))
        table = query_mod.evaluate(q, g)
    except TifsemError as exc:
        _fail(str(exc), 1)
        raise AssertionError
    rendered = query_mod.to_csv(table) if fmt == "csv" else query_mod.to_text_table(table)
    click.echo(rendered, nl=False)


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--root", "root_iri", required=True, help="Subject IRI to export.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output .jsonld file.")
def export(graph_path: str, root_iri: str, out_path: str) -> None:
    """Export one subject and its blank-node closure as JSON-LD."""
    PipelineConfig(output_path=out_path, output_format="jsonld")
    g = _load_graph(graph_path)
    try:
        document = serialize.to_jsonld(g, IRI(root_iri))
    except (TifsemError, ValueError) as exc:
        _fail(str(exc), 1)
        raise AssertionError
    try:
        Path(out_path).write_text(document.to_text(), encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), 2)
    click.echo(f"wrote {out_path}")


@main.command()
@click.argument("inputs", nargs=-1, type=click.Path())
@click.option("--profile", "profile_path", type=click.Path(), help="Dialect profile JSON.")
def validate(inputs: tuple[str, ...], profile_path: str | None) -> None:
    """Parse and validate XML INPUTS, reporting issues as TSV on stdout."""
    if not inputs:
        raise click.UsageError("at least one input file is required")
    profile = IDENTITY_PROFILE
    if profile_path is not None:
        try:
            profile = load_profile(_read_text(profile_path))
        except TifsemError as exc:
            _fail(str(exc), 1)
    issues: list[ValidationIssue] = []
    try:
        for path in inputs:
            doc = RawDocument(source_uri=path, data=_read_bytes(path))
            ios, parse_issues = parse_tif(doc, profile)
            issues.extend(parse_issues)
            for io in ios:
                issues.extend(validate_io(io))
    except TifsemError as exc:
        _fail(str(exc), 1)
    click.echo(format_issues(issues), nl=False)
    if any(i.severity == "error" for i in issues):
        sys.exit(1)


@main.group()
def fixtures() -> None:
    """Synthetic dataset commands."""


@fixtures.command()
@click.option("--out-dir", required=True, type=click.Path(), help="Directory to populate.")
@click.option("--seed", default=fixtures_mod.DEFAULT_SEED, show_default=True, type=int)
def generate(out_dir: str, seed: int) -> None:
    """Write the deterministic La Rochelle dataset, profiles and queries."""
    try:
        paths = fixtures_mod.generate(out_dir, seed)
    except OSError as exc:
        _fail(str(exc), 2)
        raise AssertionError
    for path in paths:
        click.echo(str(path))


if __name__ == "__main__":
    main()
