"""Entropy numbers of diagonal operators between Orlicz sequence spaces."""
