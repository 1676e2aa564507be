"""A_n 型箭图表示与导出范畴的精确计算引擎"""
