"""
lr-rfim-toolkit 单元测试
"""
