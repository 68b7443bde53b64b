import math

from pydantic import BaseModel, Field, field_validator

PROB_TOL = 1e-12


class BinaryKLQuery(BaseModel):
    """二元 KL 散度 D(a‖p) 的输入"""

    a: float = Field(
        ge=0.0, le=1.0,
        description="第一个参数，例如 p+t 或 p-t",
        examples=[0.6],
    )
    p: float = Field(
        ge=0.0, le=1.0,
        description="参考概率",
        examples=[0.5],
    )


class DiscreteDistribution(BaseModel):
    """m 个元素上的离散分布"""

    weights: list[float] = Field(
        min_length=1,
        description="各元素的概率，非负且和为 1",
        examples=[[0.25, 0.25, 0.25, 0.25]],
    )

    @field_validator("weights")
    @classmethod
    def _check_weights(cls, weights: list[float]) -> list[float]:
        if any(not math.isfinite(w) or w < 0.0 for w in weights):
            raise ValueError("概率必须是非负有限实数")
        total = math.fsum(weights)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"概率之和为 {total!r}，偏离 1 超过 {PROB_TOL}")
        return weights

    @property
    def m(self) -> int:
        return len(self.weights)
