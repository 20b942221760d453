"""
Tests for the clp module
"""
