"""
工作流模块

基于LangGraph构建的纯化实验编排。
"""

__version__ = "0.1.0"
