"""
Tests for the ldpc module
"""
