"""
Tests for common module
"""
