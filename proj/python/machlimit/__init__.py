"""Pseudospectral low-Mach-number simulation and Besov-norm analysis."""

from _machlimit import *  # noqa: F401,F403
from _machlimit import __version__  # noqa: F401
