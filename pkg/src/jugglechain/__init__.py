"""Juggling-state digraphs, backward Markov chains with exact Boltzmann
equilibria, finite-field matrix oracles, and ball-density asymptotics."""

__version__ = "0.1.0"

from .chain import (
    CoinConfig,
    TransitionDist,
    backward_dist,
    backward_step,
    simulate,
    stationary_weight,
    tv_distance,
    verify_stationarity,
)
from .errors import (
    CapTooSmall,
    DomainError,
    IllegalThrow,
    InvalidPattern,
    JuggleError,
    NonTermination,
    ParseError,
    ResourceLimit,
)
from .flagchain import (
    FlagTransition,
    flag_backward_dist,
    flag_backward_step,
    flag_forward_edges,
    flag_stationary_weight,
    group_prefactor,
    label_groups,
    verify_flag_stationarity,
)
from .hatted import (
    HattedState,
    MixedState,
    composed_backward_dist,
    hatted_backward_dist,
    hatted_backward_step,
    hatted_forward_edges,
    path_equivalence_check,
)
from .rng import ChainRng, ScriptedRng
from .series import TruncSeries, sn
from .siteswap import Siteswap, count_patterns, parse_siteswap, validate_siteswap
from .states import (
    FlagState,
    JugglingState,
    erase_labels,
    flag_inversions,
    forward_edges,
    ground_state,
    inversions,
    parse_flag_state,
    parse_state,
    throw_state,
)

__all__ = [
    "CapTooSmall",
    "ChainRng",
    "CoinConfig",
    "DomainError",
    "FlagState",
    "FlagTransition",
    "HattedState",
    "IllegalThrow",
    "InvalidPattern",
    "JuggleError",
    "JugglingState",
    "MixedState",
    "NonTermination",
    "ParseError",
    "ResourceLimit",
    "ScriptedRng",
    "Siteswap",
    "TransitionDist",
    "TruncSeries",
    "backward_dist",
    "backward_step",
    "composed_backward_dist",
    "count_patterns",
    "erase_labels",
    "flag_backward_dist",
    "flag_backward_step",
    "flag_forward_edges",
    "flag_inversions",
    "flag_stationary_weight",
    "forward_edges",
    "ground_state",
    "group_prefactor",
    "hatted_backward_dist",
    "hatted_backward_step",
    "hatted_forward_edges",
    "inversions",
    "label_groups",
    "parse_flag_state",
    "parse_siteswap",
    "parse_state",
    "path_equivalence_check",
    "simulate",
    "sn",
    "stationary_weight",
    "throw_state",
    "tv_distance",
    "validate_siteswap",
    "verify_flag_stationarity",
    "verify_stationarity",
]
