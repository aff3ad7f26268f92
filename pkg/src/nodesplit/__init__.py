"""Exact MPE inference, mini-bucket bounds as exact inference on node-split
networks, and branch-and-bound MPE search over split variables."""

from .bench import BenchInstance, BenchRecord, CodingSpec, coding_ensemble, gen_coding_network, random_network, run_bench
from .elimination import Iteration, Trace, basis, default_order, mbe, network_factors, subtrace, trace_to_dot, ve
from .factors import Factor, ScopeError, condition, eliminate, max_out, multiply, product, sum_out
from .jointree import Jointree, Propagator, build_jointree, max_propagate, propagate, removal_score
from .model import (
    CycleError,
    EvidenceError,
    ModelError,
    Network,
    NormalizationError,
    UAIParseError,
    Variable,
    parse_evidence,
    parse_uai,
    read_evidence,
    read_uai,
    serialize_evidence,
    serialize_uai,
)
from .search import SearchOptions, SearchResult, split_bnb
from .splitting import (
    BoundEvaluator,
    Clone,
    SplitNetwork,
    extend_instantiation,
    full_split,
    mapping_from_json,
    mapping_to_json,
    mpe_bound,
    pe_bound,
    split_mbe,
    split_node,
)
from .strategies import StrategyConfig, apply_strategy, cutset_split, jt_strategy, loop_cutset, mb_strategy

__version__ = "0.1.0"
