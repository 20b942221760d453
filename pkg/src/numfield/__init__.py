"""
Totally real monogenic number fields and their primes above 2
"""
