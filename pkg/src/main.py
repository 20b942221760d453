"""
Entry point for the divlat lattice toolkit
"""

from .cli import cli

if __name__ == "__main__":
    cli()
