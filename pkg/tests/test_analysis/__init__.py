"""
Tests for the analysis module
"""
