"""Traffic-scene data model shared by every task.

A scenario is 91 frames at 10 Hz: 11 history frames and 80 future frames.
Tracks store their states as dense numpy arrays; invalid frames carry no
semantic guarantees beyond the validity flag itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from ..errors import ShapeError
from ..geometry import transform_points, wrap_angle

T_RAW = 91            # frames per scenario
T_HISTORY_RAW = 11    # frames [0, 11) are history
T_FUTURE_RAW = 80     # frames [11, 91) are future
DT = 0.1              # seconds per frame


class AgentCategory(str, Enum):
    VEHICLE = "vehicle"
    PEDESTRIAN = "pedestrian"
    CYCLIST = "cyclist"

    @property
    def index(self) -> int:
        return _CATEGORY_ORDER.index(self)


_CATEGORY_ORDER = [AgentCategory.VEHICLE, AgentCategory.PEDESTRIAN, AgentCategory.CYCLIST]


@dataclass(frozen=True)
class AgentState:
    """One timestamped pose; heading wrapped to (-pi, pi]."""

    x: float
    y: float
    heading: float
    vx: float
    vy: float
    valid: bool = True


@dataclass
class AgentTrack:
    """A fixed-length (T_RAW) track for one agent.

    xy [T, 2], heading [T], vxy [T, 2] and valid [T] are parallel arrays.
    """

    agent_id: str
    category: AgentCategory
    length: float
    width: float
    xy: np.ndarray
    heading: np.ndarray
    vxy: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        self.xy = np.asarray(self.xy, dtype=float)
        self.heading = np.asarray(self.heading, dtype=float)
        self.vxy = np.asarray(self.vxy, dtype=float)
        self.valid = np.asarray(self.valid, dtype=bool)
        n = len(self.xy)
        if self.xy.shape != (n, 2) or self.heading.shape != (n,) \
                or self.vxy.shape != (n, 2) or self.valid.shape != (n,):
            raise ShapeError(f"inconsistent track arrays for agent {self.agent_id}")
        if self.length <= 0 or self.width <= 0:
            raise ShapeError(f"agent {self.agent_id}: non-positive box extents")

    def __len__(self) -> int:
        return len(self.xy)

    def state_at(self, t: int) -> AgentState:
        return AgentState(
            x=float(self.xy[t, 0]), y=float(self.xy[t, 1]),
            heading=float(self.heading[t]),
            vx=float(self.vxy[t, 0]), vy=float(self.vxy[t, 1]),
            valid=bool(self.valid[t]),
        )

    def slice_frames(self, start: int, stop: int) -> "AgentTrack":
        return AgentTrack(
            agent_id=self.agent_id, category=self.category,
            length=self.length, width=self.width,
            xy=self.xy[start:stop].copy(), heading=self.heading[start:stop].copy(),
            vxy=self.vxy[start:stop].copy(), valid=self.valid[start:stop].copy(),
        )


class PolylineKind(str, Enum):
    LANE_CENTER = "lane_center"
    ROAD_EDGE = "road_edge"
    CROSSWALK = "crosswalk"


@dataclass
class MapPolyline:
    """Ordered 2-D vertices; >= 2 points, consecutive points distinct."""

    polyline_id: str
    kind: PolylineKind
    points: np.ndarray  # [P, 2]

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] < 2 or self.points.shape[1] != 2:
            raise ShapeError(f"polyline {self.polyline_id}: needs >= 2 2-D points")
        if np.any(np.all(np.diff(self.points, axis=0) == 0.0, axis=1)):
            raise ShapeError(f"polyline {self.polyline_id}: repeated consecutive points")


@dataclass
class Scenario:
    scenario_id: str
    agents: list[AgentTrack]
    map: list[MapPolyline]
    ego_id: str
    interest_ids: list[str] = field(default_factory=list)
    dt: float = DT

    def __post_init__(self):
        ids = {a.agent_id for a in self.agents}
        if self.agents:
            if self.ego_id not in ids:
                raise ShapeError(f"ego_id {self.ego_id!r} not among agents")
            for iid in self.interest_ids:
                if iid not in ids:
                    raise ShapeError(f"interest id {iid!r} not among agents")
        if not any(p.kind == PolylineKind.LANE_CENTER for p in self.map):
            raise ShapeError("scenario needs at least one lane_center polyline")

    def agent(self, agent_id: str) -> AgentTrack:
        for a in self.agents:
            if a.agent_id == agent_id:
                return a
        from ..errors import LookupError_
        raise LookupError_(f"unknown agent id {agent_id!r}")

    @property
    def ego(self) -> AgentTrack:
        return self.agent(self.ego_id)

    def lane_centers(self) -> list[MapPolyline]:
        return [p for p in self.map if p.kind == PolylineKind.LANE_CENTER]


@dataclass
class ScenarioSplit:
    """History/future partition of one track; concatenation is the source."""

    history: AgentTrack
    future: AgentTrack


def split_scenario(scenario: Scenario) -> dict[str, ScenarioSplit]:
    """Split every track into 11 history + 80 future frames."""
    splits = {}
    for track in scenario.agents:
        if len(track) != T_RAW:
            raise ShapeError(
                f"agent {track.agent_id}: track length {len(track)} != {T_RAW}"
            )
        splits[track.agent_id] = ScenarioSplit(
            history=track.slice_frames(0, T_HISTORY_RAW),
            future=track.slice_frames(T_HISTORY_RAW, T_RAW),
        )
    return splits


def transform_scenario(scenario: Scenario, dx: float, dy: float, dtheta: float) -> Scenario:
    """Apply a global rigid transform to every track and polyline."""
    agents = []
    for track in scenario.agents:
        rot = np.array([[np.cos(dtheta), -np.sin(dtheta)],
                        [np.sin(dtheta), np.cos(dtheta)]])
        agents.append(AgentTrack(
            agent_id=track.agent_id, category=track.category,
            length=track.length, width=track.width,
            xy=transform_points(track.xy, dx, dy, dtheta),
            heading=wrap_angle(track.heading + dtheta),
            vxy=track.vxy @ rot.T,
            valid=track.valid.copy(),
        ))
    polylines = [
        MapPolyline(p.polyline_id, p.kind, transform_points(p.points, dx, dy, dtheta))
        for p in scenario.map
    ]
    return replace(scenario, agents=agents, map=polylines)
