"""Command-line front end.

Subcommands ``fairness``, ``bound``, ``window`` and ``cof``. Global options
``--format`` and ``--output`` go before the subcommand::

    fairindex --format json fairness allocations.csv
    fairindex bound --K 3 --steps 101 > curve.csv

Exit statuses: 0 success, 2 usage error, 3 unparsable input, 4 domain
constraint violated, 5 invalid demand vector, 6 I/O failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import click

from . import core, distributions, theorems, window
from .errors import FairnessError, InvalidDemand

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_DOMAIN = 4
EXIT_DEMAND = 5
EXIT_IO = 6


class ParseError(Exception):
    pass


def fmt(v: float | None) -> str:
    """Render a number with 12 significant digits."""
    if v is None:
        return "n/a"
    return f"{v:.12g}"


# ---------------------------------------------------------------- input files


def _parse_number(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{where}: not a number: {text!r}") from None


def _read_json(text: str, field_name: str, source: str) -> tuple[list[str], list[float], str | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or field_name not in doc:
        raise ParseError(f"{source}: expected an object with an {field_name!r} array")
    raw = doc[field_name]
    if not isinstance(raw, list):
        raise ParseError(f"{source}: {field_name!r} must be an array")
    values = []
    for i, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"{source}: {field_name}[{i}] is not a number: {v!r}")
        values.append(float(v))
    metric = doc.get("metric")
    if metric is not None and not isinstance(metric, str):
        raise ParseError(f"{source}: 'metric' must be text")
    ids = [str(i + 1) for i in range(len(values))]
    return ids, values, metric


def _read_csv(text: str, column: str, source: str) -> tuple[list[str], list[float]]:
    rows = [
        (lineno, [c.strip() for c in row])
        for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1)
        if row and any(c.strip() for c in row) and not row[0].lstrip().startswith("#")
    ]
    if not rows:
        raise ParseError(f"{source}: no data rows")
    width = len(rows[0][1])
    first = rows[0][1]
    try:
        float(first[-1])
        has_header = False
    except ValueError:
        has_header = True
    if has_header:
        accepted = ([column], ["user", column])
        header = [c.lower() for c in first]
        if header not in accepted:
            raise ParseError(
                f"{source}: header must be '{column}' or 'user,{column}', got {','.join(first)!r}"
            )
        rows = rows[1:]
    if width not in (1, 2):
        raise ParseError(f"{source}: expected 1 or 2 columns, got {width}")
    ids, values = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise ParseError(f"{source}:{lineno}: expected {width} columns, got {len(row)}")
        values.append(_parse_number(row[-1], f"{source}:{lineno}"))
        ids.append(row[0] if width == 2 else str(len(ids) + 1))
    if not values:
        raise ParseError(f"{source}: no data rows")
    return ids, values


def read_vector(path: Path, kind: str) -> tuple[list[str], list[float], str | None]:
    """Read an allocation or demand file.

    ``kind`` is ``"allocation"`` or ``"demand"``. CSV files carry an optional
    header naming one column (``allocation``) or two (``user,allocation``);
    JSON files hold ``{"metric": ..., "allocations": [...]}`` or
    ``{"demands": [...]}``. Returns ``(user_ids, values, metric_label)``.
    """
    text = path.read_text(encoding="utf-8")
    source = str(path)
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return _read_json(text, kind + "s", source)
    ids, values = _read_csv(text, kind, source)
    return ids, values, None


# ---------------------------------------------------------------- reports


@dataclass
class ReportDocument:
    input_digest: dict[str, Any]
    indices: dict[str, Any]
    legacy: dict[str, Any]
    per_user: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "input_digest": self.input_digest,
            "indices": self.indices,
            "legacy": self.legacy,
            "per_user": self.per_user,
        }

    def render_table(self) -> str:
        d, ix, lg = self.input_digest, self.indices, self.legacy
        lines = [
            f"metric          {d['metric']}",
            f"users           {d['n']}",
            f"mean            {fmt(d['mean'])}",
            f"min             {fmt(d['min'])}",
            f"max             {fmt(d['max'])}",
            "",
            f"fairness        {fmt(ix['fairness'])}",
            f"discrimination  {fmt(ix['discrimination'])}",
            f"fair_mark       {fmt(ix['fair_mark'])}",
        ]
        if "generalized_index" in ix:
            lines.append(f"generalized     {fmt(ix['generalized_index'])} (r={fmt(ix['r'])})")
        lines += [
            "",
            f"variance        {fmt(lg['variance'])}",
            f"cov             {fmt(lg['cov'])}",
            f"min_max_ratio   {fmt(lg['min_max_ratio'])}",
            "",
            _table(
                ["user", "value", "perceived_fairness", "class"],
                [
                    [u["id"], fmt(u["value"]), fmt(u["perceived_fairness"]), u["class"]]
                    for u in self.per_user
                ],
            ),
        ]
        return "\n".join(lines)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for r in rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out)


def build_report(
    alloc: core.Allocation, ids: list[str] | None = None, r: float | None = None
) -> ReportDocument:
    """Assemble the fairness report for ``alloc`` from the core functions."""
    ids = ids or [str(i + 1) for i in range(alloc.n)]
    rep = core.fairness_report(alloc)
    legacy = core.legacy_indices(alloc)
    indices: dict[str, Any] = {
        "fairness": rep.fairness,
        "discrimination": rep.discrimination,
        "fair_mark": rep.fair_mark,
    }
    if r is not None:
        indices["r"] = r
        indices["generalized_index"] = core.generalized_index(alloc, r)
    return ReportDocument(
        input_digest={
            "metric": alloc.metric_label,
            "n": alloc.n,
            "mean": rep.mean,
            "min": min(alloc.values),
            "max": max(alloc.values),
        },
        indices=indices,
        legacy={
            "variance": legacy.variance_sample,
            "cov": legacy.cov_pop,
            "min_max_ratio": legacy.min_max_ratio,
        },
        per_user=[
            {
                "id": uid,
                "value": u.value,
                "perceived_fairness": u.perceived_fairness,
                "class": u.user_class.value,
            }
            for uid, u in zip(ids, rep.per_user)
        ],
    )


def _dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


# ---------------------------------------------------------------- plumbing


@dataclass
class Settings:
    fmt: str = "table"
    output: Path | None = None


def _emit(settings: Settings, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if settings.output is None:
        click.echo(text, nl=False)
    else:
        settings.output.write_text(text, encoding="utf-8")


def _fail(ctx: click.Context, code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    ctx.exit(code)


def _run(ctx: click.Context, fn) -> None:
    try:
        fn()
    except ParseError as exc:
        _fail(ctx, EXIT_PARSE, str(exc))
    except InvalidDemand as exc:
        _fail(ctx, EXIT_DEMAND, str(exc))
    except FairnessError as exc:
        _fail(ctx, EXIT_DOMAIN, str(exc))
    except OSError as exc:
        _fail(ctx, EXIT_IO, str(exc))


@click.group()
@click.option(
    "--format",
    "fmt_",
    type=click.Choice(["table", "json"]),
    default="table",
    show_default=True,
    help="Human-readable table or a JSON document.",
)
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the result here instead of stdout.",
)
@click.pass_context
def cli(ctx: click.Context, fmt_: str, output: Path | None):
    """Fairness and discrimination indices for resource allocations."""
    ctx.obj = Settings(fmt=fmt_, output=output)


@cli.command("fairness")
@click.argument("input_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--r", "r", type=float, default=None, help="Also report the r-th moment index (r > 1).")
@click.option(
    "--demands",
    "demand_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Demand file; allocations are divided by demands before indexing.",
)
@click.option(
    "--cap/--no-cap",
    default=True,
    show_default=True,
    help="With --demands, count allocations above demand as fully satisfied.",
)
@click.pass_context
def fairness_cmd(ctx, input_path: Path, r, demand_path, cap):
    """Fairness report for the allocation in INPUT_PATH."""
    settings: Settings = ctx.obj

    def body():
        ids, values, metric = read_vector(input_path, "allocation")
        if demand_path is not None:
            _, demands, _ = read_vector(demand_path, "demand")
            alloc = core.demand_normalize(values, demands, cap=cap)
        else:
            alloc = core.Allocation(tuple(values), metric_label=metric or "allocation")
        doc = build_report(alloc, ids, r)
        if settings.fmt == "json":
            _emit(settings, _dumps(doc.to_dict()))
        else:
            _emit(settings, doc.render_table())

    _run(ctx, body)


@cli.command("bound")
@click.option("--K", "K", type=float, required=True, help="Ratio of maximum to minimum allocation.")
@click.option("--steps", type=int, default=101, show_default=True, help="Grid points over gamma in [0, 1].")
@click.pass_context
def bound_cmd(ctx, K, steps):
    """Fairness versus the fraction of users held at the minimum."""
    settings: Settings = ctx.obj

    def body():
        curve = theorems.sweep_gamma(K, steps)
        gamma_star, f_min = theorems.min_fairness_bound(K)
        if settings.fmt == "json":
            doc = {
                "K": K,
                "steps": steps,
                "curve": [{"gamma": g, "fairness": f} for g, f in curve],
                "gamma_star": gamma_star,
                "f_min": f_min,
            }
            _emit(settings, _dumps(doc))
            return
        lines = ["gamma,fairness"]
        lines += [f"{fmt(g)},{fmt(f)}" for g, f in curve]
        lines.append(f"# min gamma_star={fmt(gamma_star)} f_min={fmt(f_min)}")
        _emit(settings, "\n".join(lines))

    _run(ctx, body)


def _parse_windows(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            out.append(int(part))
        except ValueError:
            raise ParseError(f"--windows: not an integer: {part!r}") from None
    return tuple(out)


@cli.command("window")
@click.option("--hops", type=int, required=True, help="Number of hops on the shared path.")
@click.option("--windows", "windows_text", default=None, help="Comma-separated window sizes, e.g. 2,2,6.")
@click.option("--at-min", type=int, default=None, help="Circuits at the minimum window h.")
@click.option("--at-max", type=int, default=None, help="Circuits at the maximum window K*h.")
@click.option("--ratio", type=int, default=3, show_default=True, help="Window range ratio K for --at-min/--at-max.")
@click.option(
    "--metric",
    type=click.Choice(list(window.METRICS)),
    default="throughput",
    show_default=True,
)
@click.pass_context
def window_cmd(ctx, hops, windows_text, at_min, at_max, ratio, metric):
    """Per-circuit performance and fairness under window flow control."""
    settings: Settings = ctx.obj
    sna = at_min is not None or at_max is not None
    if sna == (windows_text is not None):
        raise click.UsageError("give either --windows or --at-min/--at-max")

    def body():
        if sna:
            scen = window.sna_scenario(hops, at_min or 0, at_max or 0, ratio)
        else:
            scen = window.WindowScenario(hops, _parse_windows(windows_text))
        users = window.user_metrics(scen)
        fairness = window.metric_fairness(scen, metric)
        response_fairness = window.metric_fairness(scen, "response")
        per_metric = {
            "throughput": [u.throughput for u in users],
            "response": [u.response for u in users],
            "power": [u.power for u in users],
            "window": [float(c) for c in scen.windows],
        }[metric]
        doc = build_report(core.Allocation(tuple(per_metric), metric_label=metric))
        rows = [
            {"id": str(i + 1), "window": c, "throughput": u.throughput, "response": u.response, "power": u.power}
            for i, (c, u) in enumerate(zip(scen.windows, users))
        ]
        if settings.fmt == "json":
            _emit(
                settings,
                _dumps(
                    {
                        "hops": scen.hops,
                        "windows": list(scen.windows),
                        "total_window": scen.total_window,
                        "metric": metric,
                        "fairness": fairness,
                        "response_fairness": response_fairness,
                        "users": rows,
                        "report": doc.to_dict(),
                    }
                ),
            )
            return
        lines = [
            f"hops               {scen.hops}",
            f"total_window       {scen.total_window}",
            f"metric             {metric}",
            f"fairness           {fmt(fairness)}",
            f"response_fairness  {fmt(response_fairness)}",
            "",
            _table(
                ["user", "window", "throughput", "response", "power"],
                [
                    [r["id"], str(r["window"]), fmt(r["throughput"]), fmt(r["response"]), fmt(r["power"])]
                    for r in rows
                ],
            ),
            "",
            doc.render_table(),
        ]
        _emit(settings, "\n".join(lines))

    _run(ctx, body)


@cli.command("cof")
@click.option("--family", type=click.Choice(list(distributions.FAMILIES)), required=True)
@click.option("--a", "a", type=float, default=None, help="constant value, or uniform lower bound")
@click.option("--b", "b", type=float, default=None, help="uniform upper bound")
@click.option("--lambda", "rate", type=float, default=None, help="exponential/erlang rate")
@click.option("--c", "c", type=int, default=None, help="erlang stage count")
@click.option("--m", "m", type=float, default=None, help="lognormal scale (median)")
@click.option("--sigma", type=float, default=None, help="lognormal shape")
@click.option("--mc-samples", type=int, default=None, help="Also estimate by Monte Carlo with this many draws.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def cof_cmd(ctx, family, a, b, rate, c, m, sigma, mc_samples, seed):
    """Coefficient of fairness of a distribution."""
    settings: Settings = ctx.obj
    given = {"a": a, "b": b, "lambda": rate, "c": c, "m": m, "sigma": sigma}
    params = {k: v for k, v in given.items() if v is not None}

    def body():
        dist = distributions.DistributionSpec(family, params)
        m1, m2 = distributions.analytic_moments(dist)
        cof = distributions.coefficient_of_fairness(dist)
        doc: dict[str, Any] = {
            "family": family,
            "params": dict(dist.params),
            "first_moment": m1,
            "second_moment": m2,
            "coefficient_of_fairness": cof,
        }
        if mc_samples is not None:
            est, se = distributions.monte_carlo_cof(dist, mc_samples, seed)
            doc["monte_carlo"] = {"samples": mc_samples, "seed": seed, "estimate": est, "std_error": se}
        if settings.fmt == "json":
            _emit(settings, _dumps(doc))
            return
        plist = " ".join(f"{k}={fmt(v)}" for k, v in dist.params.items())
        lines = [
            f"family                   {family}",
            f"params                   {plist}",
            f"first_moment             {fmt(m1)}",
            f"second_moment            {fmt(m2)}",
            f"coefficient_of_fairness  {fmt(cof)}",
        ]
        if mc_samples is not None:
            mc = doc["monte_carlo"]
            lines += [
                f"mc_samples               {mc_samples}",
                f"mc_seed                  {seed}",
                f"mc_estimate              {fmt(mc['estimate'])}",
                f"mc_std_error             {fmt(mc['std_error'])}",
            ]
        _emit(settings, "\n".join(lines))

    _run(ctx, body)


def main(argv: list[str] | None = None) -> None:
    cli.main(args=argv, prog_name="fairindex")


if __name__ == "__main__":  # pragma: no cover
    main(sys.argv[1:])
