"""
Source package for tda-stats: persistent homology and statistics of point clouds
"""

__version__ = '1.0.0'
