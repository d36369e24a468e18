"""Observability of linear pairs on solvable non-nilpotent 3D Lie groups."""
