"""
pmxml - polymake XML toolkit

Reads, validates, canonically writes and semantically checks polymake
XML data files.
"""

__version__ = "0.1.0"
