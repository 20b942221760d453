"""
Two-stage decoding of full-diversity lattices
"""
