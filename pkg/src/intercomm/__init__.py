"""Intermittent-communication planning and asynchronous execution for robot teams."""

from .config import load_network, network_from_config
from .coordination import Coordinator, MotionPlan, check_admissible
from .executor import consensus_report, simulate, verify_connectivity_over_time
from .network import InvalidNetwork, Network

__all__ = [
    "Coordinator",
    "InvalidNetwork",
    "MotionPlan",
    "Network",
    "check_admissible",
    "consensus_report",
    "load_network",
    "network_from_config",
    "simulate",
    "verify_connectivity_over_time",
]
