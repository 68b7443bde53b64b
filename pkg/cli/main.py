"""
命令行入口：bound / compare / verify / simulate / select

文档写到 stdout (或 --output 指定的文件)，诊断信息只写 stderr。
退出码：0 成功，1 用法或定义域错误，2 验证失败，3 读写错误。
"""
import argparse
import math
import sys
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from cli.schema import CommandRequest
from source.chernoff.bounds import (
    absolute_threshold_bound,
    chvatal_bound,
    hoeffding_bound,
    hypergeometric_bound,
    kl_tail_bound,
    multiplicative_bound,
    optimal_lambda,
    parametric_bound,
    simplified_bound,
    steinke_ullman_bound,
)
from source.chernoff.mechanisms import accuracy_gap, sample_selector, selector_distribution, stability_audit
from source.chernoff.montecarlo import bound_scorecard, empirical_tail, exact_model_tail, simulate_sum
from source.chernoff.schema.query import BoundResult, MultiplicativeQuery, TailQuery
from source.chernoff.schema.simulation import HeterogeneousModel, IidModel, SimulationSpec, UrnModel
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites import ALL, run_suites, suite_names
from source.chernoff.tools.tool_excel_generator import export_scorecard
from source.chernoff.tools.tool_matrix_loader import load_score_matrix
from source.chernoff.tools.tool_table_render import (
    render_frequency_table,
    render_record,
    render_selector_rows,
    render_suite_reports,
    render_table,
)
from source.chernoff.utils.errors import ChernoffError, DomainError, UsageError
from source.chernoff.utils.log_utils import log

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_IO = 3

BOUND_KINDS = (
    "kl-upper", "kl-lower", "mult-upper", "mult-lower", "simple-lower", "simple-upper", "two-sided",
    "threshold", "su-weak", "hypergeometric", "moment", "ik", "chvatal", "hoeffding",
)
MODEL_KINDS = ("iid", "heterogeneous", "urn")
DEFAULT_TRIALS = 100_000
DEFAULT_T_STEPS = 11


class CliParser(argparse.ArgumentParser):
    """argparse 的错误改为抛出 UsageError，由 main 统一转成退出码 1"""

    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated decimals, got {text!r}")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=MODEL_KINDS, default="iid", help="generator model")
    parser.add_argument("--n", type=int, help="number of variables (iid, urn draws)")
    parser.add_argument("--p", type=float, help="success probability (iid)")
    parser.add_argument("--p-list", type=_float_list, help="comma-separated probabilities (heterogeneous)")
    parser.add_argument("--N", type=int, help="balls in the urn")
    parser.add_argument("--P", type=int, help="red balls in the urn")
    parser.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    parser.add_argument("--seed", type=int, help="64-bit seed, required")


def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"))
    common.add_argument("--output", help="write the document to this file")

    parser = CliParser(prog="chernoff", description="Concentration bounds, exact oracles and verification suites.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=CliParser)

    bound = sub.add_parser("bound", parents=[common], help="evaluate one named bound")
    bound.add_argument("--kind", required=True, choices=BOUND_KINDS)
    bound.add_argument("--n", type=int)
    bound.add_argument("--p", type=float)
    bound.add_argument("--t", type=float)
    bound.add_argument("--mu", type=float)
    bound.add_argument("--delta", type=float)
    bound.add_argument("--t-abs", type=float, help="absolute threshold for --kind threshold")
    bound.add_argument("--lambda", type=float, help="parameter for moment / ik, defaults to the optimum")
    bound.add_argument("--tau", type=float, help="parameter for chvatal, defaults to the optimum")
    bound.add_argument("--p-list", type=_float_list)
    bound.add_argument("--N", type=int)
    bound.add_argument("--P", type=int)

    compare = sub.add_parser("compare", parents=[common], help="scorecard of bounds over a t grid")
    _add_model_flags(compare)
    compare.add_argument("--t-grid", type=_float_list, help="comma-separated deviations")
    compare.add_argument("--xlsx", help="also write the scorecard as an Excel workbook")

    verify = sub.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", action="append", choices=[*suite_names(), ALL])
    verify.add_argument("--max-n", type=int)
    verify.add_argument("--seed", type=int, help="required by randomized suites")

    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo simulation")
    _add_model_flags(simulate)
    simulate.add_argument("--k", type=int, help="threshold; without it the frequency table is emitted")

    select = sub.add_parser("select", parents=[common], help="stable selector over a score matrix")
    select.add_argument("--matrix", required=True, help="comma-separated score matrix file")
    select.add_argument("--gamma", type=float, required=True)
    select.add_argument("--samples", type=int, default=0)
    select.add_argument("--seed", type=int)
    select.add_argument("--audit-column", type=int, help="0-based column to replace")
    select.add_argument("--replacement", type=_float_list, help="replacement column values")
    return parser


def parse_request(argv: Sequence[str] | None = None) -> CommandRequest:
    namespace = vars(build_parser().parse_args(argv))
    subcommand = namespace.pop("subcommand")
    output_format = namespace.pop("output_format", None)
    output = namespace.pop("output", None)
    return CommandRequest(subcommand=subcommand, parameters=namespace,
                          output_format=output_format, output=output)


def _need(request: CommandRequest, key: str):
    value = request.get(key)
    if value is None:
        flag = "--" + key.replace("_", "-")
        command = " ".join(filter(None, [request.subcommand, request.get("kind")]))
        raise UsageError(f"{command} requires {flag}")
    return value


def _multiplicative_query(request: CommandRequest, direction: str) -> MultiplicativeQuery:
    n = request.get("n")
    if request.get("mu") is not None:
        return MultiplicativeQuery(mu=request.get("mu"), delta=_need(request, "delta"), direction=direction, n=n)
    p, t = _need(request, "p"), _need(request, "t")
    n = _need(request, "n")
    if p <= 0.0:
        raise DomainError("δ = t/p needs p > 0; pass --mu and --delta instead")
    return MultiplicativeQuery(mu=p * n, delta=t / p, direction=direction, n=n)


def evaluate_bound(request: CommandRequest) -> BoundResult:
    kind = request.get("kind")
    if kind in ("kl-upper", "kl-lower"):
        q = TailQuery(n=_need(request, "n"), p=_need(request, "p"), t=_need(request, "t"),
                      direction="upper" if kind == "kl-upper" else "lower")
        return kl_tail_bound(q)
    if kind in ("moment", "ik"):
        q = TailQuery(n=_need(request, "n"), p=_need(request, "p"), t=_need(request, "t"))
        lam = request.get("lambda")
        if lam is None:
            lam = optimal_lambda(q.p, q.t, kind)
        return parametric_bound(q, lam, kind)
    if kind == "chvatal":
        q = TailQuery(n=_need(request, "n"), p=_need(request, "p"), t=_need(request, "t"))
        tau = request.get("tau")
        if tau is None:
            tau = math.exp(optimal_lambda(q.p, q.t, "moment"))
        return chvatal_bound(q, tau)
    if kind == "mult-upper":
        return multiplicative_bound(_multiplicative_query(request, "upper"))
    if kind == "mult-lower":
        return multiplicative_bound(_multiplicative_query(request, "lower"))
    if kind == "simple-upper":
        return simplified_bound(_multiplicative_query(request, "upper"))
    if kind == "simple-lower":
        return simplified_bound(_multiplicative_query(request, "lower"))
    if kind == "two-sided":
        return simplified_bound(_multiplicative_query(request, "two_sided"))
    if kind == "threshold":
        return absolute_threshold_bound(_need(request, "mu"), _need(request, "t_abs"))
    if kind == "su-weak":
        return steinke_ullman_bound(_need(request, "n"), _need(request, "t"))
    if kind == "hypergeometric":
        return hypergeometric_bound(_need(request, "N"), _need(request, "P"), _need(request, "n"), _need(request, "t"))
    if kind == "hoeffding":
        return hoeffding_bound(_need(request, "p_list"), _need(request, "t"))
    raise UsageError(f"unknown bound kind {kind!r}")


def _generator(request: CommandRequest):
    model = request.get("model", "iid")
    if model == "iid":
        return IidModel(n=_need(request, "n"), p=_need(request, "p"))
    if model == "heterogeneous":
        return HeterogeneousModel(p_list=_need(request, "p_list"))
    return UrnModel(N=_need(request, "N"), P=_need(request, "P"), n=_need(request, "n"))


def _simulation_spec(request: CommandRequest) -> SimulationSpec:
    return SimulationSpec(generator=_generator(request), trials=request.get("trials", DEFAULT_TRIALS),
                          seed=_need(request, "seed"))


def _bound_command(request: CommandRequest) -> tuple[int, str]:
    result = evaluate_bound(request)
    return EXIT_OK, render_record(result.model_dump(), request.output_format or "json")


def _compare_command(request: CommandRequest) -> tuple[int, str]:
    spec = _simulation_spec(request)
    grid = request.get("t_grid")
    if grid is None:
        grid = np.linspace(0.0, 1.0 - spec.generator.mean_parameter, DEFAULT_T_STEPS).tolist()
    rows = bound_scorecard(spec, grid)
    if request.get("xlsx"):
        export_scorecard(rows, request.get("xlsx"), spec)
    return EXIT_OK, render_table(rows, request.output_format or "csv")


def _verify_command(request: CommandRequest) -> tuple[int, str]:
    options = SuiteOptions(seed=request.get("seed"), max_n=request.get("max_n"))
    reports = run_suites(request.get("suite") or [ALL], options)
    status = EXIT_OK if all(report.passed for report in reports) else EXIT_VERIFY
    return status, render_suite_reports(reports, request.output_format or "text")


def _simulate_command(request: CommandRequest) -> tuple[int, str]:
    spec = _simulation_spec(request)
    k = request.get("k")
    if k is None:
        sums = simulate_sum(spec)
        counts = np.bincount(sums, minlength=spec.generator.size + 1).tolist()
        return EXIT_OK, render_frequency_table(counts, spec.trials, request.output_format or "csv")
    if not (0 <= k <= spec.generator.size + 1):
        raise DomainError(f"--k={k} is outside [0, {spec.generator.size + 1}]")
    tail = empirical_tail(spec, k)
    document = {
        **tail.model_dump(),
        "exact": exact_model_tail(spec.generator, k),
        "model": spec.generator.model_dump(),
    }
    return EXIT_OK, render_record(document, request.output_format or "json")


def _select_command(request: CommandRequest) -> tuple[int, str]:
    matrix = load_score_matrix(_need(request, "matrix"))
    gamma = _need(request, "gamma")
    dist = selector_distribution(matrix, gamma)
    accuracy = accuracy_gap(matrix, gamma)
    samples = request.get("samples", 0)
    drawn = sample_selector(dist, _need(request, "seed"), samples) if samples else None
    column = request.get("audit_column")
    audit = None
    if column is not None:
        audit = stability_audit(matrix, column, _need(request, "replacement"), gamma)

    fmt = request.output_format or "json"
    if fmt == "csv":
        sample_counts = np.bincount(drawn, minlength=dist.m).tolist() if drawn is not None else None
        return EXIT_OK, render_selector_rows(dist.row_sums, dist.probabilities, accuracy,
                                             sample_counts=sample_counts, audit=audit)

    document = {**dist.model_dump(), "accuracy": accuracy.model_dump()}
    if drawn is not None:
        document["samples"] = drawn
    if audit is not None:
        document["audit"] = audit.model_dump()
    return EXIT_OK, render_record(document, fmt)


COMMANDS = {
    "bound": _bound_command,
    "compare": _compare_command,
    "verify": _verify_command,
    "simulate": _simulate_command,
    "select": _select_command,
}


def dispatch(request: CommandRequest) -> tuple[int, str]:
    """执行一个请求，返回 (退出码, 文档)；错误以异常形式抛出"""
    log.info(f"执行子命令 {request.subcommand}: {request.parameters}")
    return COMMANDS[request.subcommand](request)


def _emit(document: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as f:
            f.write(document)
    else:
        sys.stdout.write(document)
        sys.stdout.flush()


def _diagnose(message: str) -> None:
    sys.stderr.write("chernoff: error: " + " ".join(str(message).split()) + "\n")


def _validation_message(e: ValidationError) -> str:
    first = e.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first['msg']}" if location else first["msg"]


def main(argv: Sequence[str] | None = None) -> int:
    try:
        request = parse_request(argv)
        status, document = dispatch(request)
        _emit(document, request.output)
        return status
    except ValidationError as e:
        _diagnose(_validation_message(e))
        return EXIT_DOMAIN
    except OSError as e:
        _diagnose(f"I/O error: {e}")
        return EXIT_IO
    except (ChernoffError, ValueError) as e:
        _diagnose(e)
        return EXIT_DOMAIN
    except Exception as e:
        log.exception(f"未预期的错误: {e}")
        _diagnose(e)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
