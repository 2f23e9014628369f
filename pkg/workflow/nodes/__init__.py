"""
工作流节点模块

包含LangGraph工作流中的追踪、纯化、光源与扫描节点。
"""
