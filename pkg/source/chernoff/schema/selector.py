import math
from functools import cached_property

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class ScoreMatrix(BaseModel):
    """m×n 的得分矩阵，元素在 [0,1] 内"""

    entries: list[list[float]] = Field(
        min_length=1,
        description="按行给出的矩阵元素",
        examples=[[[1.0], [0.0]]],
    )

    @field_validator("entries")
    @classmethod
    def _check_entries(cls, entries: list[list[float]]) -> list[list[float]]:
        width = len(entries[0])
        if width == 0:
            raise ValueError("矩阵至少需要一列")
        for i, row in enumerate(entries):
            if len(row) != width:
                raise ValueError(f"第 {i + 1} 行有 {len(row)} 个元素，应为 {width}")
            for value in row:
                if not (0.0 <= value <= 1.0):
                    raise ValueError(f"第 {i + 1} 行的元素 {value} 不在 [0,1] 内")
        return entries

    @classmethod
    def from_array(cls, array) -> "ScoreMatrix":
        array = np.asarray(array, dtype=float)
        if array.ndim != 2:
            raise ValueError(f"需要二维数组，实际维数 {array.ndim}")
        return cls(entries=array.tolist())

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def row_sums(self) -> np.ndarray:
        """b_i = Σ_j a_ij"""
        return self.array.sum(axis=1)

    def with_column(self, column_index: int, column) -> "ScoreMatrix":
        """把第 column_index 列 (从 0 开始) 替换为 column，得到相邻矩阵"""
        replaced = self.array.copy()
        replaced[:, column_index] = column
        return ScoreMatrix.from_array(replaced)


class SelectorDistribution(BaseModel):
    """稳定选择器 S_γ(A) 的分布"""

    gamma: float = Field(gt=1.0, description="底数 γ")
    probabilities: list[float] = Field(description="Pr[S_γ(A)=i] ∝ γ^{b_i}")
    log_normalizer: float = Field(description="ln C_γ(A) = ln Σ γ^{b_i}")
    row_sums: list[float] = Field(default=[], description="各行之和 b_i")

    @field_validator("probabilities")
    @classmethod
    def _check_probabilities(cls, probabilities: list[float]) -> list[float]:
        if not probabilities:
            raise ValueError("分布至少包含一个元素")
        if any(q < 0.0 for q in probabilities):
            raise ValueError("概率必须非负")
        total = math.fsum(probabilities)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"概率之和为 {total!r}")
        return probabilities

    @property
    def m(self) -> int:
        return len(self.probabilities)


class EncodingScheme(BaseModel):
    """编码论证中的权函数 w(x) = (p+t)^{k_x}(1-p-t)^{n-k_x}"""

    n: int = Field(ge=1, description="比特串长度")
    p: float = Field(ge=0.0, le=1.0, description="真实成功概率")
    t: float = Field(ge=0.0, description="偏差")

    @model_validator(mode="after")
    def _check_shift(self) -> "EncodingScheme":
        if self.p + self.t > 1.0 + 1e-12:
            raise ValueError(f"p+t={self.p + self.t} 超过 1")
        return self

    @property
    def shifted(self) -> float:
        return min(self.p + self.t, 1.0)


class StabilityReport(BaseModel):
    """替换一列前后选择概率之比"""

    gamma: float
    column_index: int
    ratios: list[float] = Field(description="Pr_A(i) / Pr_{A'}(i)")
    lower: float = Field(description="γ^{-2}")
    upper: float = Field(description="γ^{2}")
    normalizer_log_ratio: float = Field(description="ln C_γ(A) - ln C_γ(A')")
    normalizer_holds: bool = Field(description="γ^{-1} C_γ(A') ≤ C_γ(A) ≤ γ C_γ(A')")
    holds: bool


class AccuracyReport(BaseModel):
    """期望得分与最大行和之差"""

    expected_score: float
    max_score: float
    gap: float
    limit: float = Field(description="ln m / ln γ")
    holds: bool
