from pydantic import BaseModel, Field


class SuiteOptions(BaseModel):
    """verify 子命令传给各个套件的参数"""

    seed: int | None = Field(default=None, ge=0, lt=2**64, description="随机套件使用的种子")
    max_n: int | None = Field(default=None, ge=1, description="枚举类套件的 n 上限")


class SuiteReport(BaseModel):
    """一个验证套件的统计结果"""

    name: str = Field(description="套件名称", examples=["eq2"])
    checks: int = Field(default=0, description="检查的断言个数")
    failures: int = Field(default=0, description="失败的断言个数")
    worst_slack: float | None = Field(default=None, description="所有不等式中最小的余量 (右边 - 左边)")
    failure_examples: list[str] = Field(default=[], description="最多 5 个失败样例")

    @property
    def passed(self) -> bool:
        return self.failures == 0
