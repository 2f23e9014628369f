"""
数据模型模块

定义模式、参数、报告与工作流中使用的数据结构。
"""
