"""
Bounds, frame-error simulation and diversity measurement
"""
