import math
from functools import cached_property

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from source.chernoff.schema.distribution import PROB_TOL

MAX_JOINT_N = 20


def bits_to_index(bits: str) -> int:
    """比特串转下标：第 i 个字符对应第 i 位"""
    return int(bits[::-1], 2)


def index_to_bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")[::-1]


class BinomialSpec(BaseModel):
    """二项分布 B(n, p)"""

    n: int = Field(ge=1, description="试验次数", examples=[10])
    p: float = Field(ge=0.0, le=1.0, description="成功概率", examples=[0.5])


class UrnSpec(BaseModel):
    """N 个球 (P 个红球) 的罐子，无放回抽取 n 个"""

    N: int = Field(ge=1, description="球的总数", examples=[10])
    P: int = Field(ge=0, description="红球个数", examples=[5])
    n: int = Field(ge=0, description="抽取个数", examples=[4])

    @model_validator(mode="after")
    def _check_counts(self) -> "UrnSpec":
        if self.P > self.N:
            raise ValueError(f"红球数 P={self.P} 超过总数 N={self.N}")
        if self.n > self.N:
            raise ValueError(f"抽取数 n={self.n} 超过总数 N={self.N}")
        return self

    @property
    def p(self) -> float:
        return self.P / self.N


class JointDistribution(BaseModel):
    """{0,1}^n 上显式给出的联合分布，未列出的比特串概率为 0"""

    n: int = Field(ge=1, le=MAX_JOINT_N, description="变量个数")
    mass: dict[str, float] = Field(description="比特串 -> 概率；第 i 个字符是 X_{i+1}")

    @field_validator("mass")
    @classmethod
    def _check_mass(cls, mass: dict[str, float], info) -> dict[str, float]:
        n = info.data.get("n")
        if n is None:
            return mass
        for bits, prob in mass.items():
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise ValueError(f"非法比特串 {bits!r}，需要长度为 {n} 的 0/1 串")
            if not math.isfinite(prob) or prob < 0.0:
                raise ValueError(f"比特串 {bits} 的概率 {prob} 非法")
        total = math.fsum(mass.values())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"概率之和为 {total!r}，偏离 1 超过 {PROB_TOL}")
        return mass

    @cached_property
    def dense(self) -> np.ndarray:
        """长度 2^n 的概率数组，下标的第 i 位对应 X_{i+1}"""
        table = np.zeros(1 << self.n)
        for bits, prob in self.mass.items():
            table[bits_to_index(bits)] += prob
        return table

    @classmethod
    def from_dense(cls, n: int, table) -> "JointDistribution":
        table = np.asarray(table, dtype=float)
        if table.shape != (1 << n,):
            raise ValueError(f"需要长度为 2^{n} 的数组，实际形状 {table.shape}")
        mass = {index_to_bits(int(i), n): float(table[i]) for i in np.flatnonzero(table)}
        return cls(n=n, mass=mass)

    @classmethod
    def product(cls, p_list) -> "JointDistribution":
        """独立伯努利变量的乘积分布"""
        p_list = [float(p) for p in p_list]
        n = len(p_list)
        table = np.ones(1)
        # 依次加入 X_1..X_n，X_i 占第 i-1 位
        for p in p_list:
            table = np.concatenate([table * (1.0 - p), table * p])
        return cls.from_dense(n, table)

    @classmethod
    def urn(cls, N: int, P: int, n: int) -> "JointDistribution":
        """无放回抽取前 n 个球是否为红球的指示变量的联合分布"""
        spec = UrnSpec(N=N, P=P, n=n)
        if spec.n < 1:
            raise ValueError("指示变量个数 n 至少为 1")
        total = math.perm(N, n)
        table = np.zeros(1 << n)
        for index in range(1 << n):
            reds = index.bit_count()
            blues = n - reds
            if reds > P or blues > N - P:
                continue
            table[index] = math.perm(P, reds) * math.perm(N - P, blues) / total
        return cls.from_dense(n, table)


class HypergeometricClaimsReport(BaseModel):
    """超几何推广中两条引理的逐项余量"""

    spec: UrnSpec
    tau: float
    claim1_margins: list[float] = Field(description="每个 j 的 RHS - LHS")
    claim2_margin: float = Field(description="τ 加权形式的 RHS - LHS")
    holds: bool


class NegativeCorrelationReport(BaseModel):
    """负相关假设的枚举检查结果"""

    holds: bool
    worst_index_set: list[int] = Field(description="余量最小的下标集合 (从 1 开始)")
    worst_slack: float
    checked: int = Field(description="检查过的下标集合数")


class Lemma1Report(BaseModel):
    """有效权函数超出概率的检查结果"""

    probability: float
    bound: float
    holds: bool


class WeakBoundPipelineReport(BaseModel):
    """重走弱化 Chernoff 界的证明链"""

    n: int
    p: float
    t: float
    applicable: bool
    reason: str | None = None
    m: int | None = None
    alpha: float | None = Field(default=None, description="精确尾概率")
    max_exceed_probability: float | None = Field(default=None, description="1-(1-α)^{m-1}")
    markov_bound: float | None = Field(default=None, description="(E[max]-pn)/(tn)")
    lemma_bound: float | None = Field(default=None, description="5√(ln m)/(t√n)")
    holds: bool = True
