"""Half-turn symmetric alternating sign matrices: exact weighted sums and factorization checks."""
