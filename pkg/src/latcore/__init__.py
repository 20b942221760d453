"""
Full-diversity 1-level LDPC lattices
"""
