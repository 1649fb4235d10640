"""Plane sections of space curves: degree matrices, h-vectors and curve recipes."""
