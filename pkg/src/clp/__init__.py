"""
Closest lattice point solvers
"""
