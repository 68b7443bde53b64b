import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class IidModel(BaseModel):
    """n 个独立同分布的伯努利变量"""

    kind: Literal["iid"] = "iid"
    n: int = Field(ge=1, examples=[100])
    p: float = Field(ge=0.0, le=1.0, examples=[0.5])

    @property
    def size(self) -> int:
        return self.n

    @property
    def mean_parameter(self) -> float:
        return self.p


class HeterogeneousModel(BaseModel):
    """成功概率各不相同的独立伯努利变量"""

    kind: Literal["heterogeneous"] = "heterogeneous"
    p_list: list[float] = Field(min_length=1, examples=[[0.2, 0.4, 0.6, 0.8]])

    @field_validator("p_list")
    @classmethod
    def _check_probabilities(cls, p_list: list[float]) -> list[float]:
        for p in p_list:
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"概率 {p} 不在 [0,1] 内")
        return p_list

    @property
    def size(self) -> int:
        return len(self.p_list)

    @property
    def mean_parameter(self) -> float:
        return math.fsum(self.p_list) / len(self.p_list)


class UrnModel(BaseModel):
    """从 N 个球 (P 个红球) 中无放回抽取 n 个"""

    kind: Literal["urn"] = "urn"
    N: int = Field(ge=1, examples=[10])
    P: int = Field(ge=0, examples=[5])
    n: int = Field(ge=1, examples=[4])

    @model_validator(mode="after")
    def _check_counts(self) -> "UrnModel":
        if self.P > self.N or self.n > self.N:
            raise ValueError(f"需要 P ≤ N 且 n ≤ N，实际 N={self.N}, P={self.P}, n={self.n}")
        return self

    @property
    def size(self) -> int:
        return self.n

    @property
    def mean_parameter(self) -> float:
        return self.P / self.N


GeneratorModel = Annotated[
    Union[IidModel, HeterogeneousModel, UrnModel],
    Field(discriminator="kind"),
]


class SimulationSpec(BaseModel):
    """一次可复现的模拟：模型、试验次数与种子"""

    generator: GeneratorModel
    trials: int = Field(ge=1, description="试验次数", examples=[100000])
    seed: int = Field(ge=0, lt=2**64, description="64 位种子", examples=[7])


class EmpiricalTail(BaseModel):
    """经验尾概率 Pr[X ≥ k] 的估计"""

    threshold: int
    estimate: float = Field(ge=0.0, le=1.0)
    standard_error: float = Field(ge=0.0)
    trials: int
    seed: int


class ScorecardRow(BaseModel):
    """对比表的一行：精确值、经验值和各个界"""

    t: float
    k: int
    exact: float
    empirical: float
    kl: float
    multiplicative: float
    simplified: float
    steinke_ullman: float

    def tightness(self) -> dict[str, float]:
        """各个界与精确值之比"""
        ratios = {}
        for column in ("kl", "multiplicative", "simplified", "steinke_ullman"):
            bound = getattr(self, column)
            ratios[column] = bound / self.exact if self.exact > 0.0 else math.inf
        return ratios
