"""
divlat - full-diversity LDPC lattices over totally real number fields
"""

__version__ = "0.1.0"
