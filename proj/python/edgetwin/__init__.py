"""Edge digital-twin provisioning simulator.

Thin package wrapper around the C++ extension: scenario generation, the
synchronization-latency model, the provisioning MDP, baseline policies and
the DQN provisioner, plus sweep/metrics helpers.
"""

from edgetwin._core import *  # noqa: F401,F403
from edgetwin._core import __version__  # noqa: F401
