"""Directed word-collocation networks from longitudinal child language transcripts."""

from .analysis import DyadReport, EgonetView, dyad_compare, egonet, growth_trajectory, stage_table, top_degree_report
from .builder import (
    DEFAULT_RANGES,
    MluRange,
    StagePlan,
    StageWindow,
    accumulative_series,
    assign_stage,
    build_network,
    build_stage_networks,
    plan_stages,
)
from .centrality import (
    HitsResult,
    ShiftRecord,
    Status,
    classify_word,
    hits,
    shift_table,
    top_authorities,
    top_hubs,
)
from .corpus import (
    Corpus,
    IngestConfig,
    Session,
    Utterance,
    is_spontaneous,
    load_corpora,
    morpheme_count,
    mlu_from_counts,
    parse_session,
    session_mlu,
    to_chat,
    tokenize,
)
from .errors import ConfigError, InputError, InvariantError, LexnetError
from .graph import GrowthPoint, LexicalNetwork, NetworkMeta, average_degree, degree, reverse, top_k_by_degree, union
from .pajek import export_pajek, read_pajek
from .reports import export_csv, export_json

__version__ = "0.1.0"
