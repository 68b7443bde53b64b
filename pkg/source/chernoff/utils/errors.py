"""
工具包的异常层次
"""


class ChernoffError(Exception):
    """工具包错误基类"""
    pass


class DomainError(ChernoffError, ValueError):
    """参数超出公式的定义域"""
    pass


class ShapeError(ChernoffError, ValueError):
    """长度或矩阵维度不匹配"""
    pass


class UnsupportedError(ChernoffError):
    """该方法不支持所请求的方向或变体"""
    pass


class ResourceError(ChernoffError):
    """超出枚举 / 模拟的规模上限"""
    pass


class UsageError(ChernoffError):
    """命令行用法错误"""
    pass
