"""Operator command line: analyze recordings, reveal suggestions, run the
evaluation harness, and serve the HTTP API."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .advisor import WorkflowAssessment
from .errors import InvalidInputError, ScreenAdvisorError
from .ingest import CropRect, SamplingConfig
from .metrics import (
    aggregate_scores,
    fit_duration_runtime,
    gwet_ac1,
    load_annotations,
    load_rater_verdicts,
    load_timings,
    miss_rate_by_action,
    render_report_table,
    report_to_dict,
    score_session,
)
from .providers import HttpProvider, ProviderConfig, load_script
from .store import SessionStore


def _build_provider(provider: str, script: Optional[str], endpoint: Optional[str],
                    model: Optional[str], api_key_env: str):
    if provider == "mock":
        if not script:
            raise click.UsageError("--provider mock requires --script")
        return load_script(script)
    kwargs = {"api_key_env_var_name": api_key_env}
    if endpoint:
        kwargs["endpoint_url"] = endpoint
    if model:
        kwargs["model_name"] = model
    return HttpProvider(ProviderConfig(**kwargs))


def _parse_crop(value: Optional[str]) -> Optional[CropRect]:
    if not value:
        return None
    try:
        x, y, w, h = (int(p) for p in value.split(","))
    except ValueError:
        raise click.UsageError("--crop expects X,Y,W,H integers")
    return CropRect(x, y, w, h)


def _render_suggestion(item: WorkflowAssessment) -> str:
    lines = ["## Observed actions"]
    lines.extend(f"- {a}" for a in item.action_list)
    lines.append("")
    lines.append("## Why this is inefficient")
    lines.append(item.reason)
    lines.append("")
    lines.append("## Suggestion")
    lines.append(item.suggestion)
    return "\n".join(lines)


@click.group()
def main():
    """Turn screen recordings into workflow-improvement suggestions."""


@main.command()
@click.option("--video", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--provider", "provider_kind", type=click.Choice(["mock", "http"]), required=True)
@click.option("--script", type=click.Path(exists=True, dir_okay=False))
@click.option("--interval", type=float, default=5.0, show_default=True)
@click.option("--batch-size", type=int, default=20, show_default=True)
@click.option("--max-segments", type=int, default=3, show_default=True)
@click.option("--crop", type=str, default=None, help="X,Y,W,H in pixels")
@click.option("--endpoint", type=str, default=None)
@click.option("--model", type=str, default=None)
@click.option("--api-key-env", type=str, default="OPENAI_API_KEY", show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--json", "as_json", is_flag=True, help="emit the summary as JSON")
def analyze(video, provider_kind, script, interval, batch_size, max_segments, crop,
            endpoint, model, api_key_env, out, as_json):
    """Run the full pipeline on one recording and persist a session directory."""
    chat = _build_provider(provider_kind, script, endpoint, model, api_key_env)
    try:
        config = SamplingConfig(
            interval_s=interval,
            batch_size=batch_size,
            max_segments=max_segments,
            crop=_parse_crop(crop),
        )
    except InvalidInputError as exc:
        raise click.UsageError(str(exc))
    store = SessionStore(out)
    record = store.create_session(video, config)
    record = store.run_pipeline(record.session_id, chat)
    if record.state == "error":
        click.echo(f"analysis failed: {record.error_detail}", err=True)
        sys.exit(1)
    trace = store.load_trace(record.session_id)
    queue = store.load_queue(record.session_id)
    summary = {
        "session_id": record.session_id,
        "session_dir": str(store.session_dir(record.session_id)),
        "interval_s": config.interval_s,
        "batch_size": config.batch_size,
        "max_segments": config.max_segments,
        "action_count": len(trace.actions),
        "suggestion_count": len(queue.items),
        "timings_ms": {k: round(v, 1) for k, v in record.timings.items()},
    }
    if as_json:
        click.echo(json.dumps(summary, indent=2))
    else:
        click.echo(f"session {record.session_id} ready")
        click.echo(
            f"  sampling: interval={config.interval_s:g}s batch={config.batch_size} "
            f"segments={config.max_segments}"
        )
        click.echo(f"  actions: {len(trace.actions)}  suggestions: {len(queue.items)}")
        for stage, ms in record.timings.items():
            click.echo(f"  {stage}: {ms:.1f} ms")
        click.echo(f"  stored in {summary['session_dir']}")


@main.command()
@click.option("--session", "session_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--next", "reveal", is_flag=True, help="reveal one more suggestion")
@click.option("--json", "as_json", is_flag=True)
def suggest(session_dir, reveal, as_json):
    """Print revealed suggestions, or reveal the next one with --next."""
    session_path = Path(session_dir)
    store = SessionStore(session_path.parent)
    session_id = session_path.name
    try:
        record = store.load_record(session_id)
        if record.state != "ready":
            click.echo(f"session is not ready (state: {record.state})", err=True)
            sys.exit(1)
        if reveal:
            item = store.reveal_next(session_id)
            if item is None:
                click.echo(json.dumps({"exhausted": True}) if as_json else "all suggestions revealed")
                return
            click.echo(json.dumps(item.to_dict(), indent=2) if as_json else _render_suggestion(item))
        else:
            items = store.revealed_items(session_id)
            if as_json:
                click.echo(json.dumps({"items": [i.to_dict() for i in items]}, indent=2))
            else:
                if not items:
                    click.echo("no suggestions revealed yet (use --next)")
                for i, item in enumerate(items, start=1):
                    click.echo(f"# Suggestion {i}\n{_render_suggestion(item)}\n")
    except ScreenAdvisorError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)


@main.command("eval")
@click.option("--annotations", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--agreement", "agreement_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--timings", "timings_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
def eval_cmd(annotations, agreement_path, timings_path, as_json):
    """Score annotated sessions; optional agreement and runtime-fit reports."""
    try:
        anns = load_annotations(annotations)
        reports = [score_session(a) for a in anns]
        aggregate = aggregate_scores(reports)
        miss_rates = miss_rate_by_action(anns)
        agreement = None
        if agreement_path:
            a, b = load_rater_verdicts(agreement_path)
            agreement = gwet_ac1(a, b)
        fit = None
        if timings_path:
            fit = fit_duration_runtime(load_timings(timings_path))
    except ScreenAdvisorError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    report = report_to_dict(aggregate, agreement, fit, miss_rates)
    out_path = Path(annotations).with_suffix(".report.json")
    out_path.write_text(json.dumps(report, indent=2), encoding="utf-8")
    if as_json:
        click.echo(json.dumps(report, indent=2))
    else:
        click.echo(render_report_table(report))
        click.echo(f"\nreport written to {out_path}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--data-dir", required=True, type=click.Path(file_okay=False))
@click.option("--provider", "provider_kind", type=click.Choice(["mock", "http"]), required=True)
@click.option("--script", type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", type=str, default=None)
@click.option("--model", type=str, default=None)
@click.option("--api-key-env", type=str, default="OPENAI_API_KEY", show_default=True)
def serve(port, host, data_dir, provider_kind, script, endpoint, model, api_key_env):
    """Run the session HTTP service until interrupted."""
    import uvicorn

    from .service import create_app

    if not 0 < port < 65536:
        raise click.UsageError(f"invalid port: {port}")
    chat = _build_provider(provider_kind, script, endpoint, model, api_key_env)
    app = create_app(SessionStore(data_dir), chat)
    click.echo(f"listening on http://{host}:{port} (data dir: {data_dir})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
