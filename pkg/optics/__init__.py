"""
光学模块

线性光学元件、信道噪声模型与光源态制备。
"""
