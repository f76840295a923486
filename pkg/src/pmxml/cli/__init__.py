"""Command-line interface for pmxml."""
