"""
Tests for the channel module
"""
