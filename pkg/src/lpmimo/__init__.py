"""Dual-band log-periodic MIMO antenna design toolkit.

Submodules: geometry (LPDA synthesis/validation), em (electromagnetic
surrogate), metrics (pattern metrics), optimizer (genetic design loop),
placement (slant MIMO pair geometry), omni (four-pole composition),
io/cli (files and command line).
"""

__version__ = "0.1.0"
