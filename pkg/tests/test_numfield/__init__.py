"""
Tests for the numfield module
"""
