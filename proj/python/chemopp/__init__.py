"""Chemostat-derived predator-prey model family.

Simulation, stability analysis, Lyapunov certificates, limit-cycle location
and bifurcation sweeps for the planar reduction of a substrate-prey-predator
chemostat, including the predation coupling term that the classical logistic
approximation drops.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
