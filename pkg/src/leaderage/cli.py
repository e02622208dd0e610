"""Command-line front end.

Every command is a thin client of the HTTP API (in-process by default,
remote with --server) and formats the JSON responses as key=value records or
as CSV/JSON-lines files.

Exit codes: 0 success, 2 invalid flags or model parameters, 3 degenerate
model (followers can never catch up within a commit window).
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .client import ServiceClient
from .csvio import CSV_COLUMNS, format_number, render_csv, render_jsonl, write_meta, write_text, append_csv_row

_ANALYTIC_ORDER = (
    "n", "l", "r", "c", "k", "lambda", "dist",
    "prob_b1", "mean_age_b1", "mean_age_b2", "mean_age", "closed_form_age",
    "threshold_k", "optimal_l", "optimal_age",
)
_SIM_PARAM_ORDER = ("n", "l", "r", "c", "k", "lambda", "dist", "slots", "seed", "warmup")
_SIM_SUMMARY_ORDER = (
    "mean_age", "stderr_age", "mean_age_b1", "mean_age_b2",
    "stderr_age_b1", "stderr_age_b2", "count_b1", "count_b2", "empirical_pc",
)


@click.group()
@click.version_option(__version__)
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service; in-process when omitted.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Freshness analysis for leader-based replicated storage."""
    ctx.obj = ServiceClient(server)


def _call(client: ServiceClient, method: str, path: str, *, json=None, params=None):
    status, body = client.request(method, path, json=json, params=params)
    if status == 409:
        click.echo(f"error: {body.get('message', body)}", err=True)
        sys.exit(3)
    if status == 400:
        click.echo(f"error: {body.get('message', body)}", err=True)
        sys.exit(2)
    if status == 422:
        detail = body.get("detail", body)
        if isinstance(detail, list) and detail:
            first = detail[0]
            loc = ".".join(str(part) for part in first.get("loc", []) if part != "body")
            click.echo(f"error: invalid {loc}: {first.get('msg')}", err=True)
        else:
            click.echo(f"error: {detail}", err=True)
        sys.exit(2)
    if status >= 300:
        click.echo(f"error: HTTP {status}: {body}", err=True)
        sys.exit(1)
    return body


def _print_record(body: dict, order) -> None:
    for key in order:
        if key in body and body[key] is not None:
            click.echo(f"{key} = {format_number(body[key])}")


def _resolve_dist(dist: str | None, lam: float | None) -> str | None:
    if dist == "exp":  # bare form inherits the single lambda flag
        return f"exp:{lam if lam is not None else 1}"
    return dist


def _parse_coupling(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        a, b = text.split(":")
        return [int(a), int(b)]
    except ValueError:
        raise click.UsageError(f"--couple-r expects A:B with integers, got {text!r}") from None


def _timing_payload(c: float | None, k: float | None) -> dict:
    if c is not None and k is not None:
        raise click.UsageError("give either --c or --k, not both")
    out = {}
    if c is not None:
        out["c"] = c
    if k is not None:
        out["k"] = k
    return out


@main.command()
@click.option("--n", type=int, required=True, help="Total node count.")
@click.option("--r", type=int, required=True, help="Read query size.")
@click.option("--l", type=int, default=None, help="Leader count.")
@click.option("--c", type=float, default=None, help="Explicit commit time.")
@click.option("--k", type=float, default=None, help="Relative leader write speed (c = l/(k*lambda)).")
@click.option("--lambda", "lam", type=float, default=None, help="Follower write rate.")
@click.option("--dist", default=None, metavar="SPEC", help="exp:RATE | uniform:B | det:D.")
@click.option("--threshold", is_flag=True, help="Also report the k above which age initially decreases.")
@click.option("--optimal", is_flag=True, help="Also report the age-minimizing leader count (needs --k).")
@click.pass_obj
def analytic(client, n, r, l, c, k, lam, dist, threshold, optimal):
    """Closed-form average age for one configuration."""
    payload = {
        "n": n, "r": r, "l": l, "lambda": lam,
        "dist": _resolve_dist(dist, lam),
        "include_threshold": threshold, "include_optimal": optimal,
        **_timing_payload(c, k),
    }
    body = _call(client, "POST", "/api/analytic", json=payload)
    _print_record(body, _ANALYTIC_ORDER)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--l", type=int, required=True)
@click.option("--r", type=int, required=True)
@click.option("--c", type=float, default=None)
@click.option("--k", type=float, default=None)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--dist", required=True, metavar="SPEC")
@click.option("--slots", type=int, default=100_000, show_default=True, help="Measured query slots.")
@click.option("--seed", type=int, default=None, help="Random seed; drawn and echoed when omitted.")
@click.option("--warmup", type=int, default=None, help="Warmup rounds; auto-sized when omitted.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Append the result as one CSV row.")
@click.pass_obj
def simulate(client, n, l, r, c, k, lam, dist, slots, seed, warmup, out):
    """Monte Carlo run, reported next to the analytic value."""
    payload = {
        "n": n, "l": l, "r": r, "lambda": lam,
        "dist": _resolve_dist(dist, lam),
        "slots": slots, "seed": seed, "warmup": warmup,
        **_timing_payload(c, k),
    }
    body = _call(client, "POST", "/api/simulate", json=payload)
    _print_record(body, _SIM_PARAM_ORDER)
    summary = body["summary"]
    for key in _SIM_SUMMARY_ORDER:
        if key in summary and summary[key] is not None:
            click.echo(f"sim_{key} = {format_number(summary[key])}")
    _print_record(body, ("analytic_age", "abs_diff"))
    if out:
        append_csv_row(out, {
            "curve": "simulate", "vary": "", "n": body["n"], "l": body["l"], "r": body["r"],
            "k": body.get("k"), "lambda": body.get("lambda"), "c": body["c"],
            "mode": "simulate", "analytic_age": body["analytic_age"],
            "sim_age": summary["mean_age"], "sim_stderr": summary["stderr_age"],
        })


@main.command()
@click.option("--vary", type=click.Choice(["l", "n", "k", "r"]), required=True)
@click.option("--from", "start", type=int, required=True)
@click.option("--to", "stop", type=int, required=True)
@click.option("--step", type=int, default=1, show_default=True)
@click.option("--n", type=int, default=None)
@click.option("--l", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--c", type=float, default=None)
@click.option("--k", type=float, default=None)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--dist", default=None, metavar="SPEC")
@click.option("--couple-r", default=None, metavar="A:B", help="Derive r = A + n//B at every point.")
@click.option("--mode", type=click.Choice(["analytic", "simulate", "both"]), default="analytic",
              show_default=True)
@click.option("--slots", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--curve", default="sweep", show_default=True, help="Curve label for the output rows.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output file; stdout when omitted.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.pass_obj
def sweep(client, vary, start, stop, step, n, l, r, c, k, lam, dist, couple_r,
          mode, slots, seed, curve, out, fmt):
    """Sweep one parameter and report analytic and/or simulated ages."""
    payload = {
        "vary": vary, "start": start, "stop": stop, "step": step,
        "n": n, "l": l, "r": r, "lambda": lam,
        "dist": _resolve_dist(dist, lam),
        "coupling": _parse_coupling(couple_r),
        "mode": mode, "slots": slots, "seed": seed, "curve": curve,
        **_timing_payload(c, k),
    }
    if lam is None:
        del payload["lambda"]  # let the service apply the single-lambda rule
    body = _call(client, "POST", "/api/sweep", json=payload)
    rows = body["rows"]
    content = render_csv(rows) if fmt == "csv" else render_jsonl(rows)
    if out is None:
        click.echo(content, nl=False)
        return
    try:
        write_text(out, content)
        write_meta(Path(out).with_suffix(".meta.json"), {
            "request": payload,
            "seed": body.get("seed"),
            "monotonicity": body.get("monotonicity"),
            "columns": list(CSV_COLUMNS),
            "rows": len(rows),
            "format": fmt,
        })
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(1)
    click.echo(f"wrote {len(rows)} rows to {out}")


@main.command()
@click.argument("figure_id", type=click.Choice(["fig2", "fig3", "fig4", "fig5", "all"]))
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--mode", type=click.Choice(["analytic", "simulate", "both"]), default="analytic",
              show_default=True)
@click.option("--slots", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.pass_obj
def figure(client, figure_id, out_dir, mode, slots, seed):
    """Write the canned figure sweeps as CSV plus a metadata sidecar."""
    ids = ["fig2", "fig3", "fig4", "fig5"] if figure_id == "all" else [figure_id]
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    for fid in ids:
        params = {"mode": mode, "slots": slots}
        if seed is not None:
            params["seed"] = seed
        body = _call(client, "GET", f"/api/figures/{fid}", params=params)
        rows = [row for curve in body["curves"] for row in curve["rows"]]
        csv_path = out_path / f"{fid}.csv"
        try:
            write_text(csv_path, render_csv(rows))
            write_meta(out_path / f"{fid}.meta.json", {
                "figure": fid,
                "mode": body["mode"],
                "seed": body.get("seed"),
                "notes": body["notes"],
                "columns": list(CSV_COLUMNS),
                "csv": csv_path.name,
                "curves": [curve["request"] for curve in body["curves"]],
                "point_seed_rule": "per-point seed = first uint64 of "
                                   "SeedSequence(entropy=(curve_seed, point_index))",
            })
        except OSError as exc:
            click.echo(f"error: cannot write {csv_path}: {exc}", err=True)
            sys.exit(1)
        click.echo(f"wrote {csv_path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
