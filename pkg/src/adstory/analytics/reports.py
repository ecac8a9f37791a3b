"""Render analysis results as CSV or aligned text tables.

Floats are fixed to six decimals so reports are byte-stable across platforms;
every analysis parameter is echoed into the header for provenance.
"""

from __future__ import annotations

import io

from adstory.analytics.dwell import RegressionResult
from adstory.analytics.uplift import UpliftReport

FLOAT_FORMAT = "{:.6f}"


def _params_header(params: dict) -> list[str]:
    return [f"# {key}={params[key]}" for key in sorted(params)]


def _fmt(value: float) -> str:
    return FLOAT_FORMAT.format(value)


def render_dwell_report(result: RegressionResult, params: dict, format: str) -> str:
    if format == "csv":
        out = io.StringIO()
        for line in _params_header(params):
            out.write(line + "\n")
        out.write("# controls=" + "|".join(result.controls) + "\n")
        out.write(
            "second,coef_pp,std_err_pp,n,baseline_nonstory_dwell,relative_change\n"
        )
        for effect in result.effects:
            out.write(
                f"{effect.second},{_fmt(effect.coef_pp)},{_fmt(effect.std_err)},"
                f"{effect.n},{_fmt(effect.baseline_nonstory_dwell)},"
                f"{_fmt(effect.relative_change)}\n"
            )
        return out.getvalue()
    if format == "table":
        lines = _params_header(params)
        lines.append("# controls=" + "|".join(result.controls))
        lines.append(
            f"{'s':>3} {'coef_pp':>10} {'std_err_pp':>11} {'baseline':>10} "
            f"{'relative':>10} {'n':>6}"
        )
        for effect in result.effects:
            lines.append(
                f"{effect.second:>3} {_fmt(effect.coef_pp):>10} "
                f"{_fmt(effect.std_err):>11} "
                f"{_fmt(effect.baseline_nonstory_dwell):>10} "
                f"{_fmt(effect.relative_change):>10} {effect.n:>6}"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def render_uplift_report(
    report: UpliftReport, format: str, top_only: bool = False
) -> str:
    rows = report.top_rows() if top_only else report.rows
    if format == "csv":
        out = io.StringIO()
        for line in _params_header(report.params):
            out.write(line + "\n")
        out.write("metric,subvertical,arc_abbrev,uplift_pct,support,rank\n")
        for row in rows:
            out.write(
                f"{row.metric},{row.subvertical},{row.arc_abbrev},"
                f"{_fmt(row.uplift_pct)},{row.support},{row.rank}\n"
            )
        for skip in report.skipped:
            out.write(
                f"# skipped metric={skip['metric']} subvertical={skip['subvertical']}"
                f" reason={skip['reason']}\n"
            )
        return out.getvalue()
    if format == "table":
        lines = _params_header(report.params)
        for metric in dict.fromkeys(row.metric for row in rows):
            lines.append("")
            lines.append(f"== {metric} ==")
            lines.append(
                f"{'subvertical':<20} {'arc':<8} {'uplift':>10} {'support':>8} {'rank':>5}"
            )
            for row in rows:
                if row.metric != metric:
                    continue
                lines.append(
                    f"{row.subvertical:<20} {row.arc_abbrev:<8} "
                    f"{_fmt(row.uplift_pct):>9}% {row.support:>8} {row.rank:>5}"
                )
        for skip in report.skipped:
            lines.append(
                f"(skipped {skip['metric']}/{skip['subvertical']}: {skip['reason']})"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
