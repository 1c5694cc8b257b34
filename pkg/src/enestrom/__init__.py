"""Exact-arithmetic tools for the Eneström-Phragmén quota method and its rivals."""

from .errors import ElectionError
from .method import EpConfig, Reduction, Status, allocate, enumerate_allocations, reduction_factor
from .profile import (
    DROOP,
    HARE,
    UPDATED,
    Candidate,
    Fixed,
    Profile,
    aggregate,
    approval_support,
    exact_support,
    format_profile,
    joint_support,
    load_profile,
    parse_profile,
    quota_value,
    star_closure,
)

__version__ = "0.1.0"

__all__ = [
    "ElectionError", "EpConfig", "Reduction", "Status", "allocate", "enumerate_allocations",
    "reduction_factor", "DROOP", "HARE", "UPDATED", "Candidate", "Fixed", "Profile",
    "aggregate", "approval_support", "exact_support", "format_profile", "joint_support",
    "load_profile", "parse_profile", "quota_value", "star_closure",
]
