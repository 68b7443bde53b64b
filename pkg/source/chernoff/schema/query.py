from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator

from source.chernoff.utils.logspace import safe_exp

# 允许区间端点处的浮点误差
ADMISSIBLE_TOL = 1e-12

TailDirection = Literal["upper", "lower"]
MultiplicativeDirection = Literal["upper", "lower", "two_sided"]


class TailQuery(BaseModel):
    """总体 (n, p) 加上偏差 t 与尾部方向"""

    n: int = Field(ge=1, description="试验次数", examples=[100])
    p: float = Field(
        ge=0.0, le=1.0,
        description="成功概率；Hoeffding 推广中为均值参数 (1/n)Σp_i",
        examples=[0.5],
    )
    t: float = Field(ge=0.0, description="加性偏差", examples=[0.1])
    direction: TailDirection = Field(default="upper", description="尾部方向")

    @model_validator(mode="after")
    def _check_deviation(self) -> "TailQuery":
        limit = 1.0 - self.p if self.direction == "upper" else self.p
        if self.t > limit + ADMISSIBLE_TOL:
            interval = "[0, 1-p]" if self.direction == "upper" else "[0, p]"
            raise ValueError(f"t={self.t} 不在 {self.direction} 方向的允许区间 {interval} 内 (p={self.p})")
        return self

    @property
    def mu(self) -> float:
        return self.p * self.n

    def mirrored(self) -> "TailQuery":
        """下尾查询改写为 1-p 上的上尾查询"""
        return TailQuery(n=self.n, p=1.0 - self.p, t=self.t,
                         direction="upper" if self.direction == "lower" else "lower")


class MultiplicativeQuery(BaseModel):
    """以期望 μ 与相对偏差 δ 描述的查询"""

    mu: float = Field(ge=0.0, description="期望 μ = pn", examples=[10.0])
    delta: float = Field(ge=0.0, description="相对偏差 δ", examples=[0.5])
    direction: MultiplicativeDirection = Field(default="upper")
    n: int | None = Field(
        default=None, ge=1,
        description="可选的试验次数，用于检查 (1+δ)μ ≤ n",
    )

    @model_validator(mode="after")
    def _check_lower_delta(self) -> "MultiplicativeQuery":
        if self.direction == "lower" and self.delta > 1.0:
            raise ValueError(f"下尾要求 δ ≤ 1，实际 δ={self.delta}")
        return self


class BoundResult(BaseModel):
    """一个界的计算结果，同时给出对数值与线性值"""

    name: str = Field(description="界的名称", examples=["kl-upper"])
    log_value: float = Field(description="界的自然对数，可能为正或 -inf")
    value: float = Field(description="exp(log_value)")
    vacuous: bool = Field(description="value ≥ 1 时为 True")
    inputs: dict[str, Any] = Field(default={}, description="查询参数回显")
    note: str | None = Field(default=None, description="附加说明，例如前提条件不成立")

    @classmethod
    def from_log(cls, name: str, log_value: float, inputs: dict[str, Any],
                 note: str | None = None) -> "BoundResult":
        return cls(
            name=name,
            log_value=log_value,
            value=safe_exp(log_value),
            vacuous=log_value >= 0.0,
            inputs=inputs,
            note=note,
        )
