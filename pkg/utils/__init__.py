"""
工具函数模块

通用的辅助函数和工具类。
"""
