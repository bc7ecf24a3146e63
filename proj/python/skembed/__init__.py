"""Poisson-time embedding of two-sided exponential random walks.

Exact samplers and CDFs for the step laws, Brownian skeletons observed at
Poisson arrivals, transport-process couplings, and the statistics used to
verify them. The heavy lifting happens in the `_core` extension module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
