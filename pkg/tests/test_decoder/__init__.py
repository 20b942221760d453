"""
Tests for the decoder module
"""
