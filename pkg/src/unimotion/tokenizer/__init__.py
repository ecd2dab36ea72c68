from .kmeans import kmeans
from .tokens import (
    QuantizationReport,
    TokenizedScenario,
    detokenize,
    headings_from_xy,
    match_tokens,
    measure_quantization,
    tokenize_continuation,
    tokenize_scenario,
)
from .vocab import (
    HEADING_WEIGHT,
    HISTORY_TOKENS,
    MAP_SEGMENT_LENGTH,
    TOKEN_FRAMES,
    TOKENS_PER_SCENARIO,
    AgentVocabulary,
    MapToken,
    MapVocabulary,
    MotionToken,
    build_agent_vocabulary,
    build_map_vocabulary,
    load_vocabulary,
    map_segments,
    motion_segments,
    polyline_segments,
    save_vocabulary,
    serialize_vocabulary,
    vocabulary_digest,
)

__all__ = [
    "kmeans", "MotionToken", "MapToken", "AgentVocabulary", "MapVocabulary",
    "build_agent_vocabulary", "build_map_vocabulary", "save_vocabulary",
    "load_vocabulary", "serialize_vocabulary", "vocabulary_digest",
    "motion_segments", "map_segments", "polyline_segments",
    "TokenizedScenario", "tokenize_scenario", "tokenize_continuation",
    "match_tokens", "detokenize", "headings_from_xy", "measure_quantization",
    "QuantizationReport", "TOKEN_FRAMES", "TOKENS_PER_SCENARIO",
    "HISTORY_TOKENS", "HEADING_WEIGHT", "MAP_SEGMENT_LENGTH",
]
