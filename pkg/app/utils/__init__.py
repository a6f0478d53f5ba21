"""
有限域、多项式与符号多项式工具
"""
