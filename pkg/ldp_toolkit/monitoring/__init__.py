"""
LDP Toolkit Monitoring Module
"""
