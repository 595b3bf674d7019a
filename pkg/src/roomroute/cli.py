"""Operator command line: ingest cartography, audit it, query routes, serve.

Machine output (JSON) goes to stdout, human messages to stderr; exit codes are
the only other contract: ingest 2 = bad data, audit 3 = disconnected map,
route 4 = no compliant route, 5 = unreachable, 1 = general failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .audit import audit_connectivity
from .geojson import route_plan_document
from .graphio import load_graph, save_graph
from .model import InvalidInputError, StructuralError
from .osm import OsmParseError, build_from_osm, parse_osm
from .routing import CostParams, Profile, plan_routes
from .service import ServiceConfig, serve as run_service

EXIT_DATA_ERROR = 2
EXIT_DISCONNECTED = 3
EXIT_NO_COMPLIANT_ROUTE = 4
EXIT_UNREACHABLE = 5


def _fail(message: str, code: int) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _load_profile(path: str | None) -> Profile:
    if path is None:
        return Profile()
    try:
        names = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        _fail(f"cannot read profile file: {exc}", 1)
    except json.JSONDecodeError as exc:
        _fail(f"profile file is not valid JSON: {exc}", 1)
    if not isinstance(names, dict):
        _fail("profile file must hold a JSON object of characteristic: level pairs", 1)
    try:
        return Profile.from_names(names)
    except InvalidInputError as exc:
        _fail(str(exc), 1)


def _load_graph_or_exit(path: str):
    try:
        return load_graph(path)
    except OSError as exc:
        _fail(f"cannot read graph file: {exc}", 1)
    except (StructuralError, InvalidInputError) as exc:
        _fail(f"invalid graph file: {exc}", EXIT_DATA_ERROR)


@click.group()
@click.version_option(__version__)
def main():
    """Personalized indoor route planning toolkit."""


@main.command()
@click.option("--input", "-i", "input_path", required=True, help="OSM XML file to ingest.")
@click.option("--output", "-o", "output_path", required=True, help="Graph JSON file to write.")
def ingest(input_path: str, output_path: str):
    """Compile an OSM file into a graph file and print the ingest report."""
    try:
        data = Path(input_path).read_bytes()
    except OSError as exc:
        _fail(f"cannot read input file: {exc}", 1)
    try:
        graph, report = build_from_osm(parse_osm(data), source=Path(input_path).name)
    except (OsmParseError, StructuralError, InvalidInputError) as exc:
        _fail(str(exc), EXIT_DATA_ERROR)
    try:
        save_graph(graph, output_path)
    except OSError as exc:
        _fail(f"cannot write graph file: {exc}", 1)
    click.echo(json.dumps(report.to_json_dict(), indent=2))


@main.command()
@click.argument("graph_file")
@click.option("--profile", "profile_path", default=None, help="Profile JSON file to audit under.")
def audit(graph_file: str, profile_path: str | None):
    """Report the unroutable-pair rate; exit 3 when it is not zero."""
    graph = _load_graph_or_exit(graph_file)
    profile = _load_profile(profile_path) if profile_path else None
    report = audit_connectivity(graph, profile)
    click.echo(json.dumps(report.to_json_dict(), indent=2))
    if report.unroutable_rate > 0:
        sys.exit(EXIT_DISCONNECTED)


@main.command()
@click.argument("graph_file")
@click.option("--from", "-f", "from_ref", required=True, help="Origin place id or room name.")
@click.option("--to", "-t", "to_ref", required=True, help="Destination place id or room name.")
@click.option("--profile", "profile_path", default=None, help="Profile JSON file.")
@click.option("--turn-penalty", default=None, type=float, help="Cost surcharge per intermediate node, in meters.")
def route(graph_file: str, from_ref: str, to_ref: str, profile_path: str | None, turn_penalty: float | None):
    """Print the route plan between two places; exit 4/5 when constrained/unreachable."""
    graph = _load_graph_or_exit(graph_file)
    profile = _load_profile(profile_path)
    try:
        params = CostParams() if turn_penalty is None else CostParams(turn_penalty_m=turn_penalty)
        plan = plan_routes(graph, from_ref, to_ref, profile, params)
    except InvalidInputError as exc:
        _fail(str(exc), 1)
    click.echo(json.dumps(route_plan_document(graph, plan), indent=2))
    if plan.status == "no_compliant_route":
        sys.exit(EXIT_NO_COMPLIANT_ROUTE)
    if plan.status == "unreachable":
        sys.exit(EXIT_UNREACHABLE)


@main.command()
@click.option("--graph", "-g", "graph_files", required=True, multiple=True, help="Graph JSON file (repeatable).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--turn-penalty", default=None, type=float, help="Cost surcharge per intermediate node, in meters.")
@click.option("--static-dir", default=None, help="Directory of UI assets to serve under /ui.")
def serve(graph_files: tuple[str, ...], host: str, port: int, turn_penalty: float | None, static_dir: str | None):
    """Run the HTTP service over one or more graph files."""
    try:
        config = ServiceConfig(
            graph_paths=graph_files,
            host=host,
            port=port,
            turn_penalty_m=turn_penalty,
            static_dir=static_dir,
        )
        run_service(config)
    except (RuntimeError, InvalidInputError) as exc:
        _fail(str(exc), 1)


if __name__ == "__main__":
    main()
