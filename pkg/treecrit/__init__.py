"""
treecrit: spectral criticality and Monte Carlo simulation of random
environments on coloured b-ary trees.
"""

__version__ = "1.0.0"
