"""
Shared errors, configuration models and utilities
"""
