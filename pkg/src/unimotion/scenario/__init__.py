from .generator import (
    GeneratorConfig,
    IDM_V0,
    LANE_WIDTH,
    V_MAX,
    generate_scenarios,
)
from .io import read_scenarios, read_scenarios_with_provenance, write_scenarios
from .types import (
    DT,
    T_FUTURE_RAW,
    T_HISTORY_RAW,
    T_RAW,
    AgentCategory,
    AgentState,
    AgentTrack,
    MapPolyline,
    PolylineKind,
    Scenario,
    ScenarioSplit,
    split_scenario,
    transform_scenario,
)

__all__ = [
    "AgentCategory", "AgentState", "AgentTrack", "MapPolyline", "PolylineKind",
    "Scenario", "ScenarioSplit", "GeneratorConfig", "DT", "T_RAW",
    "T_HISTORY_RAW", "T_FUTURE_RAW", "V_MAX", "IDM_V0", "LANE_WIDTH",
    "generate_scenarios", "split_scenario", "transform_scenario",
    "read_scenarios", "read_scenarios_with_provenance", "write_scenarios",
]
