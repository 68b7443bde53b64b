"""
对比表渲染：csv / json / text

数值一律保留 12 位有效数字；CSV 使用 "," 分隔、"." 作小数点、LF 换行。
"""
import csv
import io
import json
import math
from typing import Any, Literal, Sequence

from source.chernoff.schema.selector import AccuracyReport, StabilityReport
from source.chernoff.schema.simulation import ScorecardRow
from source.chernoff.schema.suite import SuiteReport
from source.chernoff.utils.errors import DomainError

TableFormat = Literal["csv", "json", "text"]

SCORECARD_HEADER = ["t", "k", "exact", "empirical", "kl", "multiplicative", "simplified", "steinke_ullman"]


def format_number(value: float) -> str:
    """12 位有效数字；inf 写作 inf，-0 写作 0"""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if value == 0.0:
        value = 0.0
    return format(value, ".12g")


def round_number(value: Any) -> Any:
    """把浮点数截到 12 位有效数字，递归处理列表与字典

    JSON 没有 inf / nan，非有限值写成字符串 "inf"、"-inf"、"nan"。
    """
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_number(value)
        return float(format_number(value))
    if isinstance(value, dict):
        return {key: round_number(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_number(item) for item in value]
    return value


def dump_json(document: Any) -> str:
    """稳定且合法的 JSON 文本：键按插入顺序"""
    return json.dumps(round_number(document), ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def _row_values(row: ScorecardRow) -> list:
    return [getattr(row, column) for column in SCORECARD_HEADER]


def render_table(rows: Sequence[ScorecardRow], fmt: TableFormat = "csv") -> str:
    if not rows:
        raise DomainError("对比表至少需要一行")
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SCORECARD_HEADER)
        for row in rows:
            writer.writerow([format_number(v) for v in _row_values(row)])
        return buffer.getvalue()
    if fmt == "json":
        return dump_json([dict(zip(SCORECARD_HEADER, _row_values(row))) for row in rows])
    if fmt == "text":
        widths = [max(len(h), 14) for h in SCORECARD_HEADER]
        lines = ["  ".join(h.rjust(w) for h, w in zip(SCORECARD_HEADER, widths)) + "  tightest"]
        for row in rows:
            cells = [format_number(v) if not isinstance(v, float) else format(v, ".6g") for v in _row_values(row)]
            ratios = row.tightness()
            tightest = min(ratios, key=ratios.get)
            lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)) + f"  {tightest}")
        return "\n".join(lines) + "\n"
    raise DomainError(f"未知输出格式 {fmt!r}")


def render_frequency_table(counts: Sequence[int], trials: int, fmt: TableFormat = "csv") -> str:
    """模拟得到的和 X 的频数表，列为 sum,count,frequency"""
    records = [(value, int(count), int(count) / trials) for value, count in enumerate(counts)]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["sum", "count", "frequency"])
        for value, count, freq in records:
            writer.writerow([value, count, format_number(freq)])
        return buffer.getvalue()
    if fmt == "json":
        return dump_json([{"sum": v, "count": c, "frequency": f} for v, c, f in records])
    if fmt == "text":
        lines = [f"{'sum':>6}  {'count':>10}  {'frequency':>14}"]
        lines += [f"{v:>6}  {c:>10}  {format_number(f):>14}" for v, c, f in records]
        return "\n".join(lines) + "\n"
    raise DomainError(f"未知输出格式 {fmt!r}")


def _text_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, int, float)):
        return format_number(value)
    if isinstance(value, (dict, list)):
        return json.dumps(round_number(value), ensure_ascii=False, allow_nan=False)
    return str(value)


def render_record(record: dict, fmt: TableFormat = "json") -> str:
    """单条结果 (bound / select / verify) 的渲染"""
    if fmt == "json":
        return dump_json(record)
    flat = {key: value for key, value in record.items() if not isinstance(value, (dict, list))}
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(flat))
        writer.writerow([_text_value(v) for v in flat.values()])
        return buffer.getvalue()
    if fmt == "text":
        lines = []
        for key, value in record.items():
            lines.append(f"{key}: {_text_value(value)}")
        return "\n".join(lines) + "\n"
    raise DomainError(f"未知输出格式 {fmt!r}")


def render_suite_reports(reports: Sequence[SuiteReport], fmt: TableFormat = "text") -> str:
    """verify 的汇总；最后一行为 "checks: all pass" 或失败个数"""
    total_checks = sum(r.checks for r in reports)
    total_failures = sum(r.failures for r in reports)
    verdict = "all pass" if total_failures == 0 else f"{total_failures} failed"
    if fmt == "json":
        return dump_json({
            "suites": [{**r.model_dump(), "passed": r.passed} for r in reports],
            "total_checks": total_checks,
            "total_failures": total_failures,
            "checks": verdict,
        })
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["suite", "checks", "failures", "worst_slack"])
        for r in reports:
            writer.writerow([r.name, r.checks, r.failures, "" if r.worst_slack is None else format_number(r.worst_slack)])
        return buffer.getvalue()
    if fmt == "text":
        lines = [f"{'suite':<22}{'checks':>10}{'failures':>10}  worst_slack"]
        for r in reports:
            slack = "-" if r.worst_slack is None else format(r.worst_slack, ".3e")
            lines.append(f"{r.name:<22}{r.checks:>10}{r.failures:>10}  {slack}")
            lines += [f"    ! {example}" for example in r.failure_examples]
        lines.append(f"checks: {verdict}")
        return "\n".join(lines) + "\n"
    raise DomainError(f"未知输出格式 {fmt!r}")


def render_selector_rows(row_sums: Sequence[float], probabilities: Sequence[float], accuracy: AccuracyReport,
                         sample_counts: Sequence[int] | None = None,
                         audit: StabilityReport | None = None) -> str:
    """select 的 CSV：先是每个矩阵行一行的表，空一行后是一行汇总

    给出抽样时加 sample_count 列，给出稳定性审计时加 stability_ratio 列。
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = ["row", "row_sum", "probability"]
    if sample_counts is not None:
        header.append("sample_count")
    if audit is not None:
        header.append("stability_ratio")
    writer.writerow(header)
    for i, (b, q) in enumerate(zip(row_sums, probabilities)):
        cells = [i, format_number(b), format_number(q)]
        if sample_counts is not None:
            cells.append(int(sample_counts[i]))
        if audit is not None:
            cells.append(format_number(audit.ratios[i]))
        writer.writerow(cells)

    writer.writerow([])
    summary = {
        "expected_score": accuracy.expected_score,
        "max_score": accuracy.max_score,
        "gap": accuracy.gap,
        "limit": accuracy.limit,
        "accuracy_holds": accuracy.holds,
    }
    if audit is not None:
        summary.update(audit_column=audit.column_index, stability_holds=audit.holds)
    writer.writerow(list(summary))
    writer.writerow([_text_value(v) for v in summary.values()])
    return buffer.getvalue()
