"""plugsearch command line interface."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .analysis import AnalyzerConfig, build_analyzer
from .errors import PlugsearchError
from .ingest import SourceSpec, load_source
from .preprocess import shard_dataset
from .registry import RegistryLocation, load_index_from_hub, push_index_to_hub
from .search import result_indices, result_page


@click.group()
@click.version_option(__version__)
def main():
    """Plug-and-play BM25 search toolkit."""


def _source_options(fn):
    fn = click.option("--format", "fmt", default="jsonl",
                      type=click.Choice(["jsonl", "csv", "text-dir"]))(fn)
    fn = click.option("--text-field", default="text")(fn)
    fn = click.option("--id-field", default=None)(fn)
    fn = click.option("--delimiter", default=",")(fn)
    fn = click.option("--recursive", is_flag=True)(fn)
    return fn


@main.command()
@_source_options
@click.argument("location")
def ingest(fmt, text_field, id_field, delimiter, recursive, location):
    """Validate a source: print its record count and the first error."""
    spec = SourceSpec(fmt, location, text_field, id_field, delimiter, recursive)
    count = 0
    try:
        for _ in load_source(spec, streaming=True):
            count += 1
    except PlugsearchError as exc:
        click.echo(f"records ok: {count}")
        click.echo(f"first error: {exc}")
        sys.exit(1)
    click.echo(f"records ok: {count}")


@main.command()
@_source_options
@click.option("--size", default="1GB", help='Shard size limit, e.g. "300B", "1GB".')
@click.option("--field", "column_to_index", default="text")
@click.option("--out", "shards_path", required=True, type=click.Path())
@click.argument("location")
def shard(fmt, text_field, id_field, delimiter, recursive, size,
          column_to_index, shards_path, location):
    """Partition a source into size-bounded shard files."""
    spec = SourceSpec(fmt, location, text_field, id_field, delimiter, recursive)
    manifest = shard_dataset(
        load_source(spec, streaming=True), size, column_to_index, shards_path
    )
    click.echo(
        f"wrote {len(manifest.shard_files)} shard(s), "
        f"{manifest.total_docs} document(s) to {manifest.shards_path}"
    )


def _analyzer_options(fn):
    fn = click.option("--mode", default="unicode-word",
                      type=click.Choice(["unicode-word", "whitespace", "subword"]))(fn)
    fn = click.option("--no-lowercase", is_flag=True)(fn)
    fn = click.option("--keep-punctuation", is_flag=True)(fn)
    fn = click.option("--stopwords", default=None,
                      help="Shipped tag (en, fr, ar, sw, bn) or word-list file.")(fn)
    fn = click.option("--subword-vocab", default=None, type=click.Path(exists=True))(fn)
    fn = click.option("--language", "language_tag", default=None)(fn)
    return fn


@main.command(name="index")
@click.option("--shards", "shards_path", required=True, type=click.Path(exists=True))
@click.option("--out", "index_path", required=True, type=click.Path())
@click.option("--threads", default=1, type=click.IntRange(min=1))
@_analyzer_options
def index_cmd(shards_path, index_path, threads, mode, no_lowercase,
              keep_punctuation, stopwords, subword_vocab, language_tag):
    """Build an inverted index from shard files."""
    from .index import build_index

    config = AnalyzerConfig(
        mode=mode,
        lowercase=not no_lowercase,
        strip_punctuation=not keep_punctuation,
        stopwords=stopwords,
        subword_vocab=subword_vocab,
        language_tag=language_tag,
    )
    stats = build_index(shards_path, index_path, config, threads=threads)
    click.echo(
        f"indexed {stats.num_docs} docs, {stats.num_terms} terms, "
        f"avgdl {stats.avgdl:.2f} in {stats.build_seconds:.2f}s"
    )


@main.command()
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("-q", "--query", required=True)
@click.option("-k", "num_results", default=1000, type=click.IntRange(min=1))
@click.option("--page", default=0, type=int)
@click.option("--per-page", default=20, type=click.IntRange(min=1))
@click.option("--shards", "shards_path", default=None, type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True)
def search(index_path, query, num_results, page, per_page, shards_path, as_json):
    """Run a BM25 query and print one result page."""
    from .docstore import Docstore
    from .index.reader import IndexReader

    reader = IndexReader(index_path)
    ranked = result_indices(query, num_results, reader)
    docstore = Docstore(reader, shards_path)
    page_result = result_page(docstore, ranked, page, per_page)
    if as_json:
        click.echo(json.dumps({
            "query": query,
            "total_results": page_result.total_results,
            "page": page_result.page_number,
            "per_page": page_result.results_per_page,
            "rows": [
                {"id": r.id, "score": r.score, "text": r.text,
                 "metadata": r.metadata, "snippet": r.snippet}
                for r in page_result.rows
            ],
        }, ensure_ascii=False, indent=2))
        return
    click.echo(f"{page_result.total_results} results "
               f"(page {page_result.page_number})")
    for row in page_result.rows:
        click.echo(f"{row.id}\t{row.score:.4f}\t{row.snippet}")


@main.command()
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("--shards", "shards_path", default=None, type=click.Path(exists=True))
@click.option("--bind", default="127.0.0.1:7860")
@click.option("--cors", "cors_origins", multiple=True)
@click.option("--results-cap", default=1000, type=click.IntRange(min=1))
@click.option("--page-size-cap", default=100, type=click.IntRange(min=1))
def serve(index_path, shards_path, bind, cors_origins, results_cap, page_size_cap):
    """Serve the search HTTP API."""
    from .service import ServiceConfig, serve as run_service

    run_service(ServiceConfig(
        index_path=index_path,
        shards_path=shards_path,
        bind=bind,
        results_cap=results_cap,
        page_size_cap=page_size_cap,
        cors_origins=list(cors_origins),
    ))


@main.group()
def app():
    """Scaffold and publish search applications."""


@app.command()
@click.option("--template", default="vanilla")
@click.option("--set", "assignments", multiple=True, metavar="KEY=VALUE")
@click.option("--out", "output_dir", default=".", type=click.Path())
@click.option("--template-dir", "search_paths", multiple=True, type=click.Path())
def create(template, assignments, output_dir, search_paths):
    """Render a template into a runnable app directory."""
    from .scaffold import create_app

    context = {}
    for item in assignments:
        key, _, value = item.partition("=")
        context[key] = value
    path = create_app(template, context, output_dir, tuple(search_paths))
    click.echo(f"created {path}")


@app.command(name="push")
@click.option("--slug", required=True)
@click.option("--org", required=True)
@click.option("--registry", "registry_url", required=True)
@click.option("--sdk", default="static")
@click.option("--delete", "delete_after_push", is_flag=True)
@click.argument("local_dir", type=click.Path(exists=True))
def app_push(slug, org, registry_url, sdk, delete_after_push, local_dir):
    """Publish a rendered app directory as a space."""
    from .scaffold import create_space_from_local

    descriptor = create_space_from_local(
        slug, org, sdk, local_dir, RegistryLocation(registry_url, org),
        delete_after_push=delete_after_push,
    )
    click.echo(f"pushed to {descriptor.url}")


@app.command(name="templates")
@click.option("--template-dir", "search_paths", multiple=True, type=click.Path())
def app_templates(search_paths):
    """List available templates and their required keys."""
    from .scaffold import list_templates

    for desc in list_templates(tuple(search_paths)):
        keys = ", ".join(desc.required_keys)
        click.echo(f"{desc.name}: {desc.description} (requires: {keys})")


@main.group()
def registry():
    """Share indexes through a registry."""


@registry.command(name="serve")
@click.option("--root", required=True, type=click.Path())
@click.option("--bind", default="127.0.0.1:8320")
@click.option("--token", default=None)
def registry_serve(root, bind, token):
    """Run a registry server in the foreground."""
    import signal

    from .registry_server import serve_registry

    server = serve_registry(root, bind, token)
    click.echo(f"registry serving {root} at {server.url}")
    signal.sigwait([signal.SIGINT, signal.SIGTERM])
    server.stop()


@registry.command(name="push")
@click.option("--slug", required=True)
@click.option("--org", required=True)
@click.option("--registry", "registry_url", required=True)
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
def registry_push(slug, org, registry_url, index_path):
    """Pack and upload an index."""
    url = push_index_to_hub(slug, index_path, RegistryLocation(registry_url, org))
    click.echo(f"pushed to {url}")


@registry.command(name="pull")
@click.option("--slug", required=True)
@click.option("--org", required=True)
@click.option("--registry", "registry_url", required=True)
@click.option("--cache-dir", default=".plugsearch-cache", type=click.Path())
@click.option("--pin-version", "version", default=None, type=int)
def registry_pull(slug, org, registry_url, cache_dir, version):
    """Download and verify an index into the local cache."""
    path = load_index_from_hub(
        slug, RegistryLocation(registry_url, org), cache_dir, version
    )
    click.echo(f"index available at {path}")


if __name__ == "__main__":
    main()
