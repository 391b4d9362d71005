"""Run reports: per-case metrics, arm means, gains and their renderings.

Reports keep the raw per-case values; means and gains are derived from
them and every rendering can be recomputed from ``metrics.csv``.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from sdflab.core.exceptions import GainUndefinedError, VolumeIOError
from sdflab.core.metrics import METRIC_DIRECTIONS, ArmSummary, MetricSet, gain, pwr_wins, summarize
from sdflab.core.net import Head

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["id", "arm", "dice", "contour_dice", "asd", "rmsd"]

_ROW_LABELS = {
    "dice": "Dice(×100)",
    "contour_dice": "contourDice(×100)",
    "asd": "ASD",
    "rmsd": "RMSD",
}
_PERCENT_METRICS = {"dice", "contour_dice"}
_GAIN_TOLERANCE = 0.01


class CaseResult(BaseModel, frozen=True):
    id: str
    arm: Head
    metrics: MetricSet


class RunReport(BaseModel, frozen=True):
    """Evaluation of both arms for one seed.

    Attributes:
        seed: Seed of the dataset and both trainings
        config: Echo of the experiment configuration
        cases: Per-case metrics of every arm, pwc first, in manifest order
        means: Arm summaries keyed by arm name
        gains: Percent gain of pwr over pwc per metric; None when undefined
        timings: Wall-clock seconds per pipeline stage
    """

    seed: int
    config: dict[str, Any]
    cases: list[CaseResult]
    means: dict[str, ArmSummary]
    gains: dict[str, float | None]
    timings: dict[str, float] = {}

    def arm_metrics(self, arm: Head) -> list[MetricSet]:
        return [c.metrics for c in self.cases if c.arm is arm]


def compute_gains(pwc: ArmSummary, pwr: ArmSummary) -> dict[str, float | None]:
    """Gain per metric from two arm summaries.

    Examples:
        >>> pwc = ArmSummary(cases=1, dice=0.9238, contour_dice=0.6849, asd=1.573, rmsd=1.947, distance_cases=1)
        >>> pwr = ArmSummary(cases=1, dice=0.9708, contour_dice=0.8769, asd=0.714, rmsd=1.018, distance_cases=1)
        >>> {k: round(v, 2) for k, v in compute_gains(pwc, pwr).items()}
        {'dice': 5.09, 'contour_dice': 28.03, 'asd': 54.61, 'rmsd': 47.71}
    """
    gains: dict[str, float | None] = {}
    for metric, direction in METRIC_DIRECTIONS.items():
        a, b = pwc.value(metric), pwr.value(metric)
        if a is None or b is None:
            gains[metric] = None
            continue
        try:
            gains[metric] = gain(a, b, direction)
        except GainUndefinedError:
            logger.warning("Gain for %s undefined: pwc mean is zero", metric)
            gains[metric] = None
    return gains


def build_run_report(
    seed: int,
    config: dict[str, Any],
    pwc: list[tuple[str, MetricSet]],
    pwr: list[tuple[str, MetricSet]],
    timings: dict[str, float] | None = None,
) -> RunReport:
    cases = [CaseResult(id=i, arm=Head.PWC, metrics=m) for i, m in pwc]
    cases += [CaseResult(id=i, arm=Head.PWR, metrics=m) for i, m in pwr]
    means = {
        Head.PWC.value: summarize([m for _, m in pwc]),
        Head.PWR.value: summarize([m for _, m in pwr]),
    }
    return RunReport(
        seed=seed,
        config=config,
        cases=cases,
        means=means,
        gains=compute_gains(means["pwc"], means["pwr"]),
        timings=timings or {},
    )


def check_gains(report: RunReport) -> None:
    """Raise ValueError unless the stored gains follow from the stored means."""
    recomputed = compute_gains(report.means["pwc"], report.means["pwr"])
    for metric, stored in report.gains.items():
        fresh = recomputed.get(metric)
        if (stored is None) != (fresh is None):
            raise ValueError(f"Gain for {metric} is {stored}, means give {fresh}")
        if stored is not None and fresh is not None and abs(stored - fresh) > _GAIN_TOLERANCE:
            raise ValueError(f"Gain for {metric} is {stored}, means give {fresh}")


def _cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def metrics_csv(report: RunReport) -> str:
    """One row per case per arm: id, arm, dice, contour_dice, asd, rmsd."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for case in report.cases:
        m = case.metrics
        writer.writerow(
            [case.id, case.arm.value, _cell(m.dice), _cell(m.contour_dice), _cell(m.asd), _cell(m.rmsd)]
        )
    return buffer.getvalue()


def parse_metrics_csv(text: str) -> list[tuple[str, Head, MetricSet]]:
    """Read back the rows written by ``metrics_csv``."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        rows.append(
            (
                row["id"],
                Head(row["arm"]),
                MetricSet(
                    dice=float(row["dice"]),
                    contour_dice=float(row["contour_dice"]),
                    asd=float(row["asd"]) if row["asd"] else None,
                    rmsd=float(row["rmsd"]) if row["rmsd"] else None,
                ),
            )
        )
    return rows


def _format_metric(metric: str, value: float | None) -> str:
    if value is None:
        return "n/a"
    if metric in _PERCENT_METRICS:
        return f"{100.0 * value:.2f}"
    return f"{value:.3f}"


def _format_gain(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}%"


def generate_metrics_table(report: RunReport) -> str:
    """Markdown table with metrics as rows and PWC, PWR and Gain as columns."""
    pwc, pwr = report.means["pwc"], report.means["pwr"]
    lines = ["| Metric | PWC | PWR | Gain |", "|---|---|---|---|"]
    for metric, label in _ROW_LABELS.items():
        lines.append(
            f"| {label} | {_format_metric(metric, pwc.value(metric))} | "
            f"{_format_metric(metric, pwr.value(metric))} | {_format_gain(report.gains.get(metric))} |"
        )
    return "\n".join(lines)


def _generate_overview_section(report: RunReport) -> str:
    pwc, pwr = report.means["pwc"], report.means["pwr"]
    lines = [
        f"# Evaluation Report (seed {report.seed})",
        "",
        "## Overview",
        "",
        f"- **Test cases**: {pwc.cases}",
        f"- **Cases with surface distances**: PWC {pwc.distance_cases}, PWR {pwr.distance_cases}",
        "",
    ]
    return "\n".join(lines)


def _generate_table_section(report: RunReport) -> str:
    return "\n".join(["## Average evaluation metrics on test cases", "", generate_metrics_table(report), ""])


def _generate_cases_section(report: RunReport) -> str:
    lines = [
        "## Per-case metrics",
        "",
        "| Case | Arm | Dice | contourDice | ASD | RMSD |",
        "|---|---|---|---|---|---|",
    ]
    for case in report.cases:
        m = case.metrics
        lines.append(
            f"| {case.id} | {case.arm.value} | {_format_metric('dice', m.dice)} | "
            f"{_format_metric('contour_dice', m.contour_dice)} | "
            f"{_format_metric('asd', m.asd)} | {_format_metric('rmsd', m.rmsd)} |"
        )
    lines.append("")
    return "\n".join(lines)


def _generate_timings_section(report: RunReport) -> str:
    if not report.timings:
        return ""
    lines = ["## Timings", "", "| Stage | Seconds |", "|---|---|"]
    lines += [f"| {stage} | {seconds:.1f} |" for stage, seconds in report.timings.items()]
    lines.append("")
    return "\n".join(lines)


def generate_markdown_report(report: RunReport, include_cases: bool = True) -> str:
    """Complete Markdown report for one seed.

    Examples:
        >>> m = MetricSet(dice=1.0, contour_dice=1.0, asd=0.0, rmsd=0.0)
        >>> report = build_run_report(0, {}, [("a", m)], [("a", m)])
        >>> text = generate_markdown_report(report)
        >>> "| Dice(×100) | 100.00 | 100.00 | 0.00% |" in text
        True
        >>> "| ASD | 0.000 | 0.000 | n/a |" in text
        True
    """
    sections = [_generate_overview_section(report), _generate_table_section(report)]
    if include_cases:
        sections.append(_generate_cases_section(report))
    sections.append(_generate_timings_section(report))
    sections.append("---\n*Report generated by sdflab*\n")
    return "\n".join(s for s in sections if s)


def write_report(out_dir: str | Path, report: RunReport) -> dict[str, Path]:
    """Write ``report.json``, ``metrics.csv`` and ``table.md`` into ``out_dir``."""
    check_gains(report)
    out_dir = Path(out_dir)
    outputs = {
        "json": out_dir / "report.json",
        "csv": out_dir / "metrics.csv",
        "markdown": out_dir / "table.md",
    }
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs["json"].write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        outputs["csv"].write_text(metrics_csv(report), encoding="utf-8")
        outputs["markdown"].write_text(generate_markdown_report(report), encoding="utf-8")
    except OSError as e:
        raise VolumeIOError(out_dir, e) from e
    logger.info("Report for seed %d written to %s", report.seed, out_dir)
    return outputs


def read_report(path: str | Path) -> RunReport:
    path = Path(path)
    try:
        return RunReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise VolumeIOError(path, e) from e


def generate_summary(reports: list[RunReport]) -> str:
    """Cross-seed summary with the per-seed direction check.

    A seed counts towards the check when pwr has higher contour Dice and
    lower ASD and RMSD than pwc.
    """
    lines = [
        "# Experiment Summary",
        "",
        "| Seed | Arm | Dice(×100) | contourDice(×100) | ASD | RMSD |",
        "|---|---|---|---|---|---|",
    ]
    for report in reports:
        for arm in ("pwc", "pwr"):
            s = report.means[arm]
            lines.append(
                f"| {report.seed} | {arm} | {_format_metric('dice', s.dice)} | "
                f"{_format_metric('contour_dice', s.contour_dice)} | "
                f"{_format_metric('asd', s.asd)} | {_format_metric('rmsd', s.rmsd)} |"
            )

    lines += ["", "## Direction check", "", "| Seed | contourDice | ASD | RMSD | All |", "|---|---|---|---|---|"]
    passing = 0
    for report in reports:
        wins = [pwr_wins(report.means["pwc"], report.means["pwr"], m) for m in ("contour_dice", "asd", "rmsd")]
        all_win = all(w is True for w in wins)
        passing += all_win
        marks = ["✓" if w else ("n/a" if w is None else "✗") for w in wins]
        lines.append(f"| {report.seed} | {' | '.join(marks)} | {'✓' if all_win else '✗'} |")
    lines += [
        "",
        f"PWR beats PWC on contourDice, ASD and RMSD in {passing} of {len(reports)} seeds.",
        "",
    ]
    return "\n".join(lines)
