"""
纯化协议模块

纯化线路、探测后选择、保真度计算与闭式预测。
"""
