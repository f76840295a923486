"""Exact-arithmetic interpretation of decoded polymake data."""
