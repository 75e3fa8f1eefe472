"""Command-line entry points: API server, headless pipeline, snapshot export,
and the local mock stack used for demos and tests."""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import Config
from .pipeline import SELECT_MODES, run_pipeline
from .runtime import Runtime


def _load_config(path: str | None) -> Config:
    if path:
        return Config.from_file(Path(path))
    return Config().apply_env()


@click.group()
def main():
    """Persona-guided research ideation service."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(config_path, host, port):
    """Run the HTTP API server."""
    import uvicorn

    from .app import create_app

    runtime = Runtime(_load_config(config_path))
    uvicorn.run(create_app(runtime), host=host, port=port, log_level="info")


@main.group()
def pipeline():
    """Headless ideation pipelines."""


@pipeline.command("run")
@click.option("--rq", required=True, help="Seed research question.")
@click.option("--iterations", default=1, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--select", default="first", show_default=True, type=click.Choice(SELECT_MODES))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def pipeline_run(rq, iterations, out_path, select, config_path):
    """Run the seed-to-revised-RQ loop and write the resulting snapshot."""
    runtime = Runtime(_load_config(config_path))
    flow_id = run_pipeline(runtime, rq, iterations=iterations, select=select)
    Path(out_path).write_text(runtime.store.snapshot(flow_id), encoding="utf-8")
    click.echo(f"flow {flow_id} written to {out_path}")


@main.command()
@click.option("--flow", "flow_id", required=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def export(flow_id, out_path, config_path):
    """Export a stored flow as its canonical snapshot."""
    runtime = Runtime(_load_config(config_path))
    try:
        text = runtime.store.snapshot(flow_id)
    except Exception as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    Path(out_path).write_text(text, encoding="utf-8")
    click.echo(f"flow {flow_id} written to {out_path}")


@main.group()
def mockstack():
    """Local stand-ins for the LLM provider and the scholarly index."""


@mockstack.command("up")
@click.option("--llm-port", default=8801, show_default=True, type=int)
@click.option("--scholar-port", default=8802, show_default=True, type=int)
def mockstack_up(llm_port, scholar_port):
    """Serve the mock LLM and mock scholar APIs until interrupted."""
    from .mockstack import serve_mockstack

    serve_mockstack(llm_port=llm_port, scholar_port=scholar_port)


if __name__ == "__main__":
    main()
