"""Exact algebra and combinatorics of half-turn symmetric alternating sign matrices."""
