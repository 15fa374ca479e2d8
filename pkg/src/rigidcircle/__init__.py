"""Nested rectangles, disks and Cantor covers built in exact and log-scale
arithmetic, with checks of the modulus, capacity and reflection estimates
that rest on them."""

__version__ = "0.1.0"
