"""
Tests for the latcore module
"""
