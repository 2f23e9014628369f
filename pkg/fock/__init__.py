"""
Fock 表示模块

多光子玻色态的稀疏占据数表示、模式线性映射与偏振约化。
"""
