import math

import numpy as np

from source.chernoff.bounds import kl_tail_bound, threshold_index
from source.chernoff.divergence import kl_binary
from source.chernoff.mechanisms import (
    MAX_WEIGHT_ENUM_N,
    accuracy_gap,
    encoding_log_ratio,
    encoding_weights,
    selector_distribution,
    stability_audit,
)
from source.chernoff.oracles import exact_joint_tail
from source.chernoff.schema.oracle_specs import JointDistribution
from source.chernoff.schema.query import TailQuery
from source.chernoff.schema.selector import EncodingScheme, ScoreMatrix
from source.chernoff.schema.suite import SuiteOptions
from source.chernoff.suites.base import Tally, register, suite_rng

SELECTOR_GAMMAS = (1.1, 2.0, 10.0)
SELECTOR_TRIALS = 1000
MAX_SELECTOR_DIM = 16
# 行和之差小于该值时不要求概率严格有序
ORDER_GAP = 1e-9


@register("encoding")
def encoding_suite(tally: Tally, options: SuiteOptions) -> None:
    max_n = min(options.max_n or MAX_WEIGHT_ENUM_N, MAX_WEIGHT_ENUM_N)
    for n in range(1, max_n + 1):
        for p in (0.1, 0.25, 0.5, 0.75):
            for t in (0.05, 0.1, 0.2):
                if p + t >= 1.0:
                    continue
                scheme = EncodingScheme(n=n, p=p, t=t)
                label = f"n={n}, p={p}, t={t}"
                weights = encoding_weights(scheme)
                tally.check_close(math.fsum(weights.tolist()), 1.0, f"Σw = 1 at {label}", abs_tol=1e-12)

                log_ratios = [encoding_log_ratio(scheme, k) for k in range(n + 1)]
                for k in range(1, n + 1):
                    tally.record(log_ratios[k] > log_ratios[k - 1], f"ratio increasing at {label}, k={k}")

                divergence = n * kl_binary(p + t, p)
                for k in range(min(threshold_index(n, p, t), n + 1), n + 1):
                    ratio = math.exp(log_ratios[k])
                    tally.check_le(math.exp(divergence) * (1.0 - 1e-9), ratio, f"ratio ≥ e^(nD) at {label}, k={k}")
                if abs((p + t) * n - round((p + t) * n)) < 1e-9:
                    k = round((p + t) * n)
                    tally.check_close(log_ratios[k], divergence, f"log-ratio = nD at {label}", abs_tol=1e-12)

                # 编码路线给出同一个界
                joint = JointDistribution.product([p] * n)
                k = threshold_index(n, p, t)
                exact = exact_joint_tail(joint, k) if k <= n else 0.0
                tally.check_le(exact, kl_tail_bound(TailQuery(n=n, p=p, t=t)).value, f"composition at {label}")

    ten = EncodingScheme(n=10, p=0.5, t=0.3)
    tally.check_close(encoding_log_ratio(ten, 8), 10 * kl_binary(0.8, 0.5), "log-ratio n=10, k=8", abs_tol=1e-12)
    two = EncodingScheme(n=2, p=0.5, t=0.25)
    tally.check_close(math.exp(encoding_log_ratio(two, 2)), 2.25, "ratio n=2, k=2", rel_tol=1e-12)


def _random_matrix(rng: np.random.Generator) -> ScoreMatrix:
    m = int(rng.integers(1, MAX_SELECTOR_DIM + 1))
    n = int(rng.integers(1, MAX_SELECTOR_DIM + 1))
    entries = rng.random((m, n))
    # 部分矩阵只含 0/1，制造相同的行和
    if rng.random() < 0.25:
        entries = (entries < 0.5).astype(float)
    return ScoreMatrix.from_array(entries)


def _check_order(tally: Tally, row_sums: np.ndarray, probabilities: np.ndarray, label: str) -> None:
    order = np.argsort(row_sums, kind="stable")
    for a, b in zip(order[:-1], order[1:]):
        if row_sums[b] - row_sums[a] > ORDER_GAP:
            tally.record(probabilities[b] > probabilities[a], f"monotone {label}, rows {a} < {b}")
        else:
            tally.record(probabilities[b] >= probabilities[a] * (1.0 - 1e-12), f"ties {label}, rows {a} ~ {b}")
    top = int(np.argmax(probabilities))
    tally.record(row_sums[top] >= row_sums.max() - ORDER_GAP, f"argmax agrees {label}")


@register("selector", randomized=True)
def selector_suite(tally: Tally, options: SuiteOptions) -> None:
    rng = suite_rng(options, 2)
    for trial in range(SELECTOR_TRIALS):
        A = _random_matrix(rng)
        column_index = int(rng.integers(A.n))
        replacement = rng.random(A.m)
        for gamma in SELECTOR_GAMMAS:
            label = f"trial={trial}, m={A.m}, n={A.n}, γ={gamma}"
            dist = selector_distribution(A, gamma)
            probabilities = np.asarray(dist.probabilities)
            tally.check_close(math.fsum(dist.probabilities), 1.0, f"normalized {label}", abs_tol=1e-12)
            _check_order(tally, A.row_sums, probabilities, label)

            audit = stability_audit(A, column_index, replacement, gamma)
            tally.record(audit.normalizer_holds, f"normalizer {label}",
                         math.log(gamma) - abs(audit.normalizer_log_ratio))
            for i, ratio in enumerate(audit.ratios):
                tally.record(audit.lower - 1e-12 <= ratio <= audit.upper + 1e-12, f"ratio row {i} {label}",
                             min(ratio - audit.lower, audit.upper - ratio))

            accuracy = accuracy_gap(A, gamma)
            tally.record(accuracy.holds, f"accuracy {label}", accuracy.limit - accuracy.gap)

    closed = selector_distribution(ScoreMatrix(entries=[[1.0], [0.0]]), 2.0)
    tally.check_close(closed.probabilities[0], 2 / 3, "closed form row 0", abs_tol=1e-15)
    tally.check_close(closed.probabilities[1], 1 / 3, "closed form row 1", abs_tol=1e-15)
