"""
Chernoff 界工具包：尾概率界、精确参照值、证明中的构造与可复现的 Monte Carlo 模拟
"""
__version__ = "0.1.0"
