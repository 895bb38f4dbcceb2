"""Exact finite checks for invariant gauges, tunnels and metrization pipelines."""

from .covers import Cover, Development, is_development, is_star_refinement, iterated_star, star
from .dyadic import HALF, INF, ONE, ZERO, format_value, parse_value
from .errors import IsometrizeError
from .gauge import ExtGauge, au_distance, au_oracle, same_topology, verify_lemma_3_4, verify_sandwich
from .horizon import Horizon, HorizonFamily, stabilize
from .invariance import (equiregularity_check, exhaustion_decomposition, is_invariant_cover, is_invariant_gauge,
                         near_properness_check, proper_invariant_cover, saturate_cover, stone_star_refine)
from .pipelines import metrize, proper_metrize, proper_metrize_family, single_metrize
from .space import Bornology, GroupAction, SpaceInstance, enumerate_group, windowed_action
from .tunnels import TunnelSystem, g_saturate_tunnels, tunnel_distance, verify_theorem_3_6, verify_theorem_3_7
from .verdict import Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "Cover",
    "Development",
    "is_development",
    "is_star_refinement",
    "iterated_star",
    "star",
    "HALF",
    "INF",
    "ONE",
    "ZERO",
    "format_value",
    "parse_value",
    "IsometrizeError",
    "ExtGauge",
    "au_distance",
    "au_oracle",
    "same_topology",
    "verify_lemma_3_4",
    "verify_sandwich",
    "Horizon",
    "HorizonFamily",
    "stabilize",
    "equiregularity_check",
    "exhaustion_decomposition",
    "is_invariant_cover",
    "is_invariant_gauge",
    "near_properness_check",
    "proper_invariant_cover",
    "saturate_cover",
    "stone_star_refine",
    "metrize",
    "proper_metrize",
    "proper_metrize_family",
    "single_metrize",
    "Bornology",
    "GroupAction",
    "SpaceInstance",
    "enumerate_group",
    "windowed_action",
    "TunnelSystem",
    "g_saturate_tunnels",
    "tunnel_distance",
    "verify_theorem_3_6",
    "verify_theorem_3_7",
    "Status",
    "Verdict",
]
