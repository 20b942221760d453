"""
Block-fading channel model
"""
