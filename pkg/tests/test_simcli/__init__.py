"""
Tests for the simcli module
"""
