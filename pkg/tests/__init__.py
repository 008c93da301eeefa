"""
LDP Toolkit Tests
"""
