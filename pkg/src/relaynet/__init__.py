"""Capacity region and equation-forwarding schedules for the deterministic
multi-pair two-way relay network."""

from relaynet.core import receive, shift_apply, superpose
from relaynet.forwarding import (
    NotAchievableError,
    OneWay,
    Schedule,
    SchedulingError,
    Shared,
    TimeExpandedSchedule,
    canonicalize,
    schedule_halfduplex,
    schedule_integral,
    schedule_rational,
)
from relaynet.network import FIG2, Flow, FullDuplex, HalfDuplex, NetworkSpec, expand, validate
from relaynet.oracle import brute_force_schedule, check_schedule
from relaynet.region import (
    best_t,
    constraints,
    contains,
    halfduplex_contains,
    integral_points,
    vertices,
)
from relaynet.simulator import run, verify

__version__ = "0.1.0"

__all__ = [
    "FIG2", "Flow", "FullDuplex", "HalfDuplex", "NetworkSpec", "NotAchievableError", "OneWay",
    "Schedule", "SchedulingError", "Shared", "TimeExpandedSchedule", "best_t", "brute_force_schedule",
    "canonicalize", "check_schedule", "constraints", "contains", "expand", "halfduplex_contains",
    "integral_points", "receive", "run", "schedule_halfduplex", "schedule_integral",
    "schedule_rational", "shift_apply", "superpose", "validate", "verify", "vertices",
]
