"""测试模块"""
