"""
LDP Toolkit numerical core
"""
