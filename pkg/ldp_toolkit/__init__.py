"""
LDP Toolkit - large deviations of random projections of high-dimensional vectors
"""

__version__ = "0.1.0"
__author__ = "LDP Toolkit Team"
