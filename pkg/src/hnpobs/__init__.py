"""Drakokhrust-Platonov first obstruction to the Hasse norm principle for permutation groups."""

__version__ = "0.1.0"
