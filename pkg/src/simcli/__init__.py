"""
Command-line experiments: build checks, simulations and bounds
"""
