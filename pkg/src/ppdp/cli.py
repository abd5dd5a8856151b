"""Command-line interface.

Subcommands mirror the technique engines plus repository service. Exit
codes: 0 ok, 1 usage error, 2 parse error, 3 engine error.
"""

from __future__ import annotations

import json
import random
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import click

from . import report as reporting
from .connector import connectorize, derive_keys
from .dfg import dfg_to_json_dict, discover_dfg, render_node
from .ela import parse_ela, write_ela
from .errors import EngineError, ParseError, PpdpError
from .metadata import derive_output_name
from .model import EventLog, log_statistics
from .repository import DATA_DIR_ENV, Repository
from .roles import ROLE_TECHNIQUES, RoleAnonConfig, anonymize_roles
from .tlkc import BACKGROUND_TYPES, GRANULARITY_MS, TLKCConfig, apply_tlkc, find_minimal_violations, verify_tlkc
from .xes import parse_xes, write_xes


def _load_log(path: str) -> EventLog:
    p = Path(path)
    return parse_xes(p.read_bytes(), name=p.stem.removesuffix(".xes"))


def _tlkc_config(t: str, l: int, k: int, c: float, background: str, sensitive: Optional[str]) -> TLKCConfig:
    return TLKCConfig(T=t, L=l, K=k, C=c, background=background, sensitive_attribute=sensitive)


def _report_dir(path: Optional[str]) -> Optional[Path]:
    if path is None:
        return None
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _echo_written(paths: list[Path]) -> None:
    for p in paths:
        click.echo(f"wrote {p}")


@click.group()
def cli():
    """Privacy-preserving data publishing for process-mining event logs."""


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write CSV and figure files here.")
def inspect(file: str, as_json: bool, report_dir: Optional[str]):
    """Show statistics and the privacy operation chain of an event log."""
    path = Path(file)
    if path.suffix == ".ela":
        doc = parse_ela(path.read_bytes())
        info = {
            "kind": "ela",
            "origin": doc.origin,
            "method": doc.method,
            "desired_analyses": list(doc.desired_analyses),
            "records": len(doc.payload.records),
            "operations": [
                {"seq": op.seq, "technique": op.technique, "parameters": dict(op.parameters)}
                for op in doc.metadata.operations
            ],
        }
        click.echo(json.dumps(info, indent=2) if as_json else _format_ela_info(info))
        return
    log = _load_log(file)
    stats = log_statistics(log)
    chain = [
        {"seq": op.seq, "technique": op.technique, "parameters": dict(op.parameters)}
        for op in log.metadata.operations
    ]
    if as_json:
        click.echo(json.dumps({"kind": "xes", "statistics": stats.to_dict(), "operations": chain}, indent=2))
    else:
        click.echo(f"log: {log.name}")
        for metric, value in stats.to_dict().items():
            click.echo(f"  {metric}: {value}")
        if chain:
            click.echo("applied techniques:")
            for op in chain:
                click.echo(f"  {op['seq']}. {op['technique']} {op['parameters']}")
    directory = _report_dir(report_dir)
    if directory:
        written = [
            reporting.write_statistics_csv(stats, directory / "statistics.csv"),
            reporting.write_activity_csv(log, directory / "activities.csv"),
            reporting.save_activity_figure(log, directory / "activities.png"),
        ]
        _echo_written(written)


def _format_ela_info(info: dict) -> str:
    lines = [f"ela document from: {info['origin']}", f"  method: {info['method']}", f"  records: {info['records']}"]
    for op in info["operations"]:
        lines.append(f"  {op['seq']}. {op['technique']} {op['parameters']}")
    return "\n".join(lines)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit the DFG as JSON instead of CSV.")
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write edge CSV and a rendered figure here.")
def dfg(file: str, as_json: bool, report_dir: Optional[str]):
    """Discover the directly-follows graph of an event log."""
    log = _load_log(file)
    graph = discover_dfg(log)
    if as_json:
        click.echo(json.dumps(dfg_to_json_dict(graph), indent=2))
    else:
        click.echo("from,to,frequency")
        for (source, target), freq in sorted(graph.edges.items()):
            click.echo(f"{render_node(source)},{render_node(target)},{freq}")
    directory = _report_dir(report_dir)
    if directory:
        written = [
            reporting.write_dfg_csv(graph, directory / "dfg_edges.csv"),
            reporting.save_dfg_figure(graph, directory / "dfg.png", title=f"DFG: {log.name or Path(file).name}"),
        ]
        _echo_written(written)


@cli.command("role-anon")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--technique", type=click.Choice(ROLE_TECHNIQUES), default="fixed_value", show_default=True)
@click.option("--theta", type=click.FloatRange(0.0, 1.0), default=0.7, show_default=True,
              help="Cosine similarity threshold for role grouping.")
@click.option("--min-group-size", type=click.IntRange(min=1), default=2, show_default=True,
              help="Groups below this size are collapsed by the selective technique.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Output XES path (default: derived name).")
@click.option("--report-file", type=click.Path(dir_okay=False), help="Write the anonymization report JSON here.")
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write group CSV and figures here.")
def role_anon(file, technique, theta, min_group_size, seed, out, report_file, report_dir):
    """Anonymize resources with the decomposition method."""
    log = _load_log(file)
    config = RoleAnonConfig(
        technique=technique,
        similarity_threshold=theta,
        selective_min_group_size=min_group_size,
        rng_seed=seed,
    )
    created = datetime.now(timezone.utc)
    result, anon_report = anonymize_roles(log, config, created_at=created)
    out_path = Path(out) if out else Path(derive_output_name("role-decomposition", created, Path(file).name))
    out_path.write_bytes(write_xes(result))
    click.echo(f"wrote {out_path}")
    for warning in anon_report.warnings:
        click.echo(f"warning: {warning}", err=True)
    if report_file:
        Path(report_file).write_text(json.dumps(anon_report.to_dict(), indent=2))
        click.echo(f"wrote {report_file}")
    directory = _report_dir(report_dir)
    if directory:
        written = [
            reporting.write_groups_csv(anon_report.to_dict(), directory / "groups.csv"),
            reporting.save_group_sizes_figure(anon_report.to_dict(), directory / "group_sizes.png"),
            reporting.save_comparison_figure(
                reporting.activity_counts(log),
                reporting.activity_counts(result),
                directory / "activities.png",
                title="activity frequencies (unchanged by role anonymization)",
            ),
        ]
        _echo_written(written)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--passphrase", required=True, help="Passphrase the keyset is derived from.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output ELA path (default: derived name).")
def connector(file, passphrase, out):
    """Publish encrypted directly-follows records as an ELA document."""
    log = _load_log(file)
    keys = derive_keys(passphrase)
    created = datetime.now(timezone.utc)
    doc = connectorize(log, keys, rng=random.SystemRandom(), created_at=created)
    out_path = Path(out) if out else Path(derive_output_name("connector", created, Path(file).name))
    out_path.write_bytes(write_ela(doc))
    click.echo(f"wrote {out_path} ({len(doc.payload.records)} records)")


_tlkc_options = [
    click.option("--T", "t", type=click.Choice(tuple(GRANULARITY_MS)), default="hours", show_default=True,
                 help="Timestamp accuracy in the published log."),
    click.option("--L", "l", type=click.IntRange(1, 4), default=2, show_default=True,
                 help="Power of the assumed background knowledge."),
    click.option("--K", "k", type=click.IntRange(min=1), default=2, show_default=True,
                 help="Minimum group size (k-anonymity)."),
    click.option("--C", "c", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True,
                 help="Confidence bound for the sensitive attribute."),
    click.option("--background", type=click.Choice(BACKGROUND_TYPES), default="sequence", show_default=True),
    click.option("--sensitive", default=None, help="Case attribute holding the sensitive value."),
]


def _with_tlkc_options(fn):
    for option in reversed(_tlkc_options):
        fn = option(fn)
    return fn


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_with_tlkc_options
@click.option("--out", type=click.Path(dir_okay=False), help="Output XES path (default: derived name).")
@click.option("--report-file", type=click.Path(dir_okay=False), help="Write the suppression report JSON here.")
@click.option("--report-dir", type=click.Path(file_okay=False), help="Write suppression CSV and figures here.")
def tlkc(file, t, l, k, c, background, sensitive, out, report_file, report_dir):
    """Enforce TLKC privacy by timestamp generalization and suppression."""
    log = _load_log(file)
    config = _tlkc_config(t, l, k, c, background, sensitive)
    created = datetime.now(timezone.utc)
    result, suppression = apply_tlkc(log, config, created_at=created)
    out_path = Path(out) if out else Path(derive_output_name("tlkc", created, Path(file).name))
    out_path.write_bytes(write_xes(result))
    click.echo(f"wrote {out_path}")
    click.echo(
        f"suppressed {len(suppression.suppressed)} activities, removed {suppression.events_removed} events"
    )
    if suppression.all_suppressed:
        click.echo("warning: every event was suppressed", err=True)
    if report_file:
        Path(report_file).write_text(json.dumps(suppression.to_dict(), indent=2))
        click.echo(f"wrote {report_file}")
    directory = _report_dir(report_dir)
    if directory:
        written = [
            reporting.write_suppression_csv(suppression, directory / "suppression.csv"),
            reporting.save_comparison_figure(
                reporting.activity_counts(log),
                reporting.activity_counts(result),
                directory / "activities.png",
                title="activity frequencies before/after TLKC",
            ),
        ]
        _echo_written(written)


@cli.command("verify-tlkc")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_with_tlkc_options
def verify_tlkc_cmd(file, t, l, k, c, background, sensitive):
    """Check a log against the TLKC guarantee; exits 3 when violated."""
    log = _load_log(file)
    config = _tlkc_config(t, l, k, c, background, sensitive)
    satisfied = verify_tlkc(log, config)
    if satisfied:
        click.echo(json.dumps({"satisfied": True}))
        return
    violations = find_minimal_violations(log, config)
    click.echo(json.dumps({"satisfied": False, "minimal_violations": len(violations.minimal_violations)}))
    raise EngineError("log violates the TLKC guarantee")


@cli.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", envvar=DATA_DIR_ENV, default="ppdp-data", show_default=True,
              help=f"Repository directory (env {DATA_DIR_ENV}).")
@click.option("--console-dir", type=click.Path(file_okay=False), default=None,
              help="Directory of built console assets to serve at /.")
def serve(port, host, data_dir, console_dir):
    """Run the HTTP API (and optionally the web console)."""
    import uvicorn

    from .service import create_app

    app = create_app(Repository(Path(data_dir)), static_dir=Path(console_dir) if console_dir else None)
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv: Optional[list[str]] = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        return 2
    except EngineError as exc:
        click.echo(f"engine error: {exc}", err=True)
        return 3
    except PpdpError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
