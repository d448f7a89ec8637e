"""Deterministic 2-D shared-control simulator for human-guided robot teams.

Composite guiding vector fields steer robots along operator-drawn paths
and around obstacles; a two-layer intention network fuses autonomous
target seeking with human guidance; a per-robot quadratic program keeps
inter-robot and robot-obstacle distances safe.  The engine is a
fixed-step, fully deterministic loop with a websocket gateway for live
operation.
"""

from .engine import Engine, TickRecord, consensus_error, stability_probe
from .kernels import KERNEL_BACKEND
from .world import World, load_scenario

__all__ = [
    "Engine",
    "TickRecord",
    "World",
    "KERNEL_BACKEND",
    "consensus_error",
    "load_scenario",
    "stability_probe",
]

__version__ = "0.1.0"
