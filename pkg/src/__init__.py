"""
lr-rfim-toolkit: 长程随机场 Ising 模型验证工具包
一维与二维 Peierls 论证中各引理的穷举检查、无序外场估计与 Metropolis 模拟
"""

__version__ = "1.0.0"
