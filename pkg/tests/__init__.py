"""
divlat test suite
"""
