"""Construct, analyze and verify finite automata networks F: Q^n -> Q^n."""

from .core import (AutomataNetwork, GlobalMap, LocalRule, config_str, decode, dumps, encode,
                   evaluate, from_global_map, global_map, identity, load, loads, parse_config,
                   power)
from .dynamics import (canonical_form, cycle_structure, cylinder_preimage_count, gray_metrics,
                       is_hamiltonian_map, is_near_hamiltonian_map, isomorphic, preimage_profile)
from .errors import AnforgeError, DomainError, ResourceLimitError, UnsupportedDomainError
from .structure import degree, hamiltonian_cycle, interaction_graph, is_affine, is_centralized

__version__ = "0.1.0"

__all__ = [
    "AutomataNetwork", "GlobalMap", "LocalRule", "config_str", "decode", "dumps", "encode",
    "evaluate", "from_global_map", "global_map", "identity", "load", "loads", "parse_config",
    "power", "canonical_form", "cycle_structure", "cylinder_preimage_count", "gray_metrics",
    "is_hamiltonian_map", "is_near_hamiltonian_map", "isomorphic", "preimage_profile",
    "AnforgeError", "DomainError", "ResourceLimitError", "UnsupportedDomainError", "degree",
    "hamiltonian_cycle", "interaction_graph", "is_affine", "is_centralized",
]
