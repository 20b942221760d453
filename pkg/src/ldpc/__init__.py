"""
Binary LDPC codes: parity-check I/O, generation, encoding and decoding
"""
