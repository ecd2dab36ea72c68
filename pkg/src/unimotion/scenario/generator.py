"""Synthetic scenario generation.

Vehicles follow lane-centerline routes under intelligent-driver-model car
following with occasional lane changes; pedestrians random-walk near
crosswalks. Output mirrors the 91-frame / 10 Hz logged-data shape so the
rest of the stack is agnostic to the data source.

Desk-scale constraints shape the templates: map tokens cover 0.5 m, so
roads are kept short (and desired speeds low) to bound the per-scene map
token count, and lane vertices carry centimeter jitter so clustered map
segments are not all byte-identical straight lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GenerationError
from ..geometry import wrap_angle
from .types import (
    DT,
    T_RAW,
    AgentCategory,
    AgentTrack,
    MapPolyline,
    PolylineKind,
    Scenario,
)

# Longitudinal control (intelligent driver model) and behavior constants.
IDM_A_MAX = 2.0        # m/s^2
IDM_B = 3.0            # m/s^2 comfortable braking
IDM_HEADWAY = 1.5      # s
IDM_S0 = 2.0           # m standstill gap
IDM_DELTA = 4.0
V_MAX = 15.0           # m/s hard bound on total speed
LANE_WIDTH = 5.0       # m; matches the metrics corridor half-width of 2.5 m
LANE_CHANGE_RATE = 0.05     # Bernoulli events per second
LANE_CHANGE_DURATION = 4.0  # s
PED_SPEED_MAX = 1.5    # m/s
PED_RANGE = 8.0        # m random-walk box half-width around a crosswalk
SPEED_CAP = 8.0        # m/s desired-speed ceiling (urban templates)
TURN_SPEED_CAP = 6.0   # m/s ceiling on arc routes
MAP_JITTER = 0.02      # m std of lane-vertex jitter

VEHICLE_LENGTH, VEHICLE_WIDTH = 4.8, 2.0
PED_LENGTH, PED_WIDTH = 0.8, 0.8

MAP_TEMPLATES = ("straight", "intersection")

SPAWN_MARGIN = 2.0
SPAWN_SPACING = IDM_S0 + VEHICLE_LENGTH + 8.0


@dataclass(frozen=True)
class GeneratorConfig:
    n_scenarios: int
    n_vehicles: int = 3
    n_pedestrians: int = 1
    map_template: str = "straight"
    seed: int = 0

    def __post_init__(self):
        if self.n_scenarios < 0 or self.n_vehicles < 0 or self.n_pedestrians < 0:
            raise GenerationError("agent and scenario counts must be >= 0")
        if self.map_template not in MAP_TEMPLATES:
            raise GenerationError(
                f"unknown map_template {self.map_template!r}; expected one of {MAP_TEMPLATES}"
            )


class _Route:
    """Arc-length parameterized polyline a vehicle can follow."""

    def __init__(self, vertices: np.ndarray, group: int, speed_cap: float,
                 spawn_window: float):
        self.vertices = np.asarray(vertices, dtype=float)
        seg = np.diff(self.vertices, axis=0)
        seg_len = np.linalg.norm(seg, axis=1)
        self.arc = np.concatenate([[0.0], np.cumsum(seg_len)])
        self.length = float(self.arc[-1])
        self.group = group
        self.speed_cap = speed_cap
        self.spawn_window = min(spawn_window, self.length * 0.5)

    def point_at(self, s: float) -> np.ndarray:
        s = float(np.clip(s, 0.0, self.length))
        return np.array([np.interp(s, self.arc, self.vertices[:, 0]),
                         np.interp(s, self.arc, self.vertices[:, 1])])

    def direction_at(self, s: float) -> np.ndarray:
        s = float(np.clip(s, 0.0, self.length))
        idx = min(int(np.searchsorted(self.arc, s, side="right")) - 1,
                  len(self.vertices) - 2)
        idx = max(idx, 0)
        d = self.vertices[idx + 1] - self.vertices[idx]
        return d / max(float(np.linalg.norm(d)), 1e-9)

    def normal_at(self, s: float) -> np.ndarray:
        d = self.direction_at(s)
        return np.array([-d[1], d[0]])


def _sample_line(p0, p1, step=5.0):
    p0, p1 = np.asarray(p0, dtype=float), np.asarray(p1, dtype=float)
    n = max(int(np.ceil(np.linalg.norm(p1 - p0) / step)), 1)
    t = np.linspace(0.0, 1.0, n + 1)[:, None]
    return p0[None] * (1 - t) + p1[None] * t


def _sample_arc(center, radius, theta0, theta1, step=1.0):
    n = max(int(np.ceil(abs(theta1 - theta0) * radius / step)), 2)
    theta = np.linspace(theta0, theta1, n + 1)
    return np.stack([center[0] + radius * np.cos(theta),
                     center[1] + radius * np.sin(theta)], axis=1)


def _jitter(vertices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return vertices + rng.normal(0.0, MAP_JITTER, size=vertices.shape)


def _straight_template(rng):
    length = 100.0
    routes, polylines = [], []
    for i, y in enumerate((0.0, LANE_WIDTH)):
        pts = _jitter(_sample_line([0.0, y], [length, y]), rng)
        polylines.append(MapPolyline(f"lane{i}", PolylineKind.LANE_CENTER, pts))
        routes.append(_Route(pts, group=0, speed_cap=SPEED_CAP, spawn_window=50.0))
    cw = _jitter(np.array([[55.0, -LANE_WIDTH / 2 - 1.0],
                           [55.0, 1.5 * LANE_WIDTH + 1.0]]), rng)
    polylines.append(MapPolyline("cw0", PolylineKind.CROSSWALK, cw))
    return polylines, routes, [cw.mean(axis=0)]


def _intersection_template(rng):
    half, off = 30.0, LANE_WIDTH / 2
    box = 1.5 * LANE_WIDTH  # intersection half-extent where arcs live
    polylines, routes = [], []
    # Through movements, right-hand traffic: east, west, north, south.
    throughs = [
        (np.array([-half, -off]), np.array([half, -off])),
        (np.array([half, off]), np.array([-half, off])),
        (np.array([off, -half]), np.array([off, half])),
        (np.array([-off, half]), np.array([-off, -half])),
    ]
    through_pts = []
    for i, (p0, p1) in enumerate(throughs):
        pts = _jitter(_sample_line(p0, p1), rng)
        through_pts.append(pts)
        polylines.append(MapPolyline(f"lane{i}", PolylineKind.LANE_CENTER, pts))
        routes.append(_Route(pts, group=10 + i, speed_cap=SPEED_CAP,
                             spawn_window=half - box - SPAWN_MARGIN))
    # Protected left turns: approach up to the intersection box, a radius-10
    # quarter arc, then the crossing road's exit leg.
    left_specs = [
        # (approach p0, arc center, theta0, theta1, exit p1)
        ([-half, -off], [-box, -off + 10.0], -np.pi / 2, 0.0, [off, half]),
        ([half, off], [box, off - 10.0], np.pi / 2, np.pi, [-off, -half]),
        ([off, -half], [off - 10.0, -box], 0.0, np.pi / 2, [-half, off]),
        ([-off, half], [-off + 10.0, box], np.pi, 3 * np.pi / 2, [half, -off]),
    ]
    for i, (p0, center, t0, t1, p1) in enumerate(left_specs):
        arc = _sample_arc(np.array(center, dtype=float), 10.0, t0, t1)
        approach = _sample_line(p0, arc[0])
        exit_leg = _sample_line(arc[-1], p1)
        pts = _jitter(np.concatenate([approach[:-1], arc, exit_leg[1:]]), rng)
        polylines.append(MapPolyline(f"turn{i}", PolylineKind.LANE_CENTER, pts))
        routes.append(_Route(pts, group=20 + i, speed_cap=TURN_SPEED_CAP,
                             spawn_window=half - box - SPAWN_MARGIN))
    crosswalks = []
    for i, x in enumerate((-box - 1.5, box + 1.5)):
        pts = _jitter(np.array([[x, -LANE_WIDTH - 1.0], [x, LANE_WIDTH + 1.0]]), rng)
        polylines.append(MapPolyline(f"cw{i}", PolylineKind.CROSSWALK, pts))
        crosswalks.append(pts.mean(axis=0))
    return polylines, routes, crosswalks


def _simulate_vehicles(routes, assignments, spawn_s, spawn_v, desired_v, rng):
    """Per-frame IDM update along routes; returns (xy, heading, vxy) arrays."""
    n = len(assignments)
    route_of = list(assignments)
    s = np.array(spawn_s, dtype=float)
    v = np.array(spawn_v, dtype=float)
    lateral = np.zeros(n)
    change = [None] * n  # (target_route, progress_seconds) during a lane change
    p_change = LANE_CHANGE_RATE * DT

    xy = np.zeros((n, T_RAW, 2))
    heading = np.zeros((n, T_RAW))
    vxy = np.zeros((n, T_RAW, 2))
    prev_heading = np.zeros(n)
    for i in range(n):
        d = routes[route_of[i]].direction_at(s[i])
        prev_heading[i] = np.arctan2(d[1], d[0])

    for t in range(T_RAW):
        accel = np.zeros(n)
        for i in range(n):
            route = routes[route_of[i]]
            # Leader: nearest vehicle ahead on the same route, else the route
            # end acts as a stopped virtual leader so nobody runs off the map.
            gap, lead_v = route.length + VEHICLE_LENGTH - s[i], 0.0
            for j in range(n):
                if j == i or route_of[j] != route_of[i]:
                    continue
                ds = s[j] - s[i]
                if 0 < ds < gap:
                    gap, lead_v = ds, v[j]
            v0 = desired_v[i] if route.speed_cap >= desired_v[i] else route.speed_cap
            free = 1.0 - (v[i] / v0) ** IDM_DELTA
            bumper = max(gap - VEHICLE_LENGTH, 0.1)
            s_star = IDM_S0 + v[i] * IDM_HEADWAY \
                + v[i] * (v[i] - lead_v) / (2.0 * np.sqrt(IDM_A_MAX * IDM_B))
            accel[i] = IDM_A_MAX * (free - (max(s_star, 0.0) / bumper) ** 2)

        for i in range(n):
            route = routes[route_of[i]]
            if change[i] is None and t > 0:
                siblings = [k for k, other in enumerate(routes)
                            if other.group == route.group and k != route_of[i]]
                if siblings and rng.random() < p_change and s[i] < route.length - 30.0:
                    target = siblings[int(rng.integers(len(siblings)))]
                    change[i] = (target, 0.0)

            v[i] = float(np.clip(v[i] + accel[i] * DT, 0.0, V_MAX))
            s[i] = min(s[i] + v[i] * DT, route.length)

            lat_v = 0.0
            if change[i] is not None:
                target, progress = change[i]
                progress += DT
                delta = float(
                    (routes[target].point_at(s[i]) - route.point_at(s[i]))
                    @ route.normal_at(s[i]))
                phase = min(progress / LANE_CHANGE_DURATION, 1.0)
                new_lat = delta * (1.0 - np.cos(np.pi * phase)) / 2.0
                lat_v = (new_lat - lateral[i]) / DT
                lateral[i] = new_lat
                if phase >= 1.0:
                    route_of[i] = target
                    lateral[i] = 0.0
                    change[i] = None
                else:
                    change[i] = (target, progress)
                route = routes[route_of[i]]

            pos = route.point_at(s[i]) + lateral[i] * route.normal_at(s[i])
            vel = v[i] * route.direction_at(s[i]) + lat_v * route.normal_at(s[i])
            speed = float(np.linalg.norm(vel))
            if speed >= 0.1:
                prev_heading[i] = np.arctan2(vel[1], vel[0])
            xy[i, t] = pos
            heading[i, t] = prev_heading[i]
            vxy[i, t] = vel
    return xy, wrap_angle(heading), vxy


def _simulate_pedestrian(anchor, rng):
    pos = anchor + rng.uniform(-2.0, 2.0, size=2)
    vel = rng.uniform(-0.5, 0.5, size=2)
    xy = np.zeros((T_RAW, 2))
    heading = np.zeros(T_RAW)
    vxy = np.zeros((T_RAW, 2))
    prev_heading = float(np.arctan2(vel[1], vel[0]))
    for t in range(T_RAW):
        vel = 0.95 * vel + rng.normal(0.0, 0.4, size=2) * np.sqrt(DT)
        speed = float(np.linalg.norm(vel))
        if speed > PED_SPEED_MAX:
            vel *= PED_SPEED_MAX / speed
        nxt = pos + vel * DT
        for k in range(2):
            if abs(nxt[k] - anchor[k]) > PED_RANGE:
                vel[k] = -vel[k]
                nxt[k] = pos[k] + vel[k] * DT
        pos = nxt
        if float(np.linalg.norm(vel)) >= 0.1:
            prev_heading = float(np.arctan2(vel[1], vel[0]))
        xy[t] = pos
        heading[t] = prev_heading
        vxy[t] = vel
    return xy, heading, vxy


def _generate_one(config: GeneratorConfig, index: int) -> Scenario:
    rng = np.random.default_rng(np.random.SeedSequence((config.seed, index)))
    if config.map_template == "straight":
        polylines, routes, crosswalks = _straight_template(rng)
    else:
        polylines, routes, crosswalks = _intersection_template(rng)

    capacity = sum(
        int(r.spawn_window // SPAWN_SPACING) + 1 for r in routes)
    if config.n_vehicles > capacity:
        raise GenerationError(
            f"map_template {config.map_template!r} fits at most {capacity} vehicles "
            f"at spawn spacing {SPAWN_SPACING:.1f} m; requested {config.n_vehicles}"
        )

    agents: list[AgentTrack] = []
    if config.n_vehicles:
        order = rng.permutation(len(routes))
        assignments, spawn_s, spawn_v, desired_v = [], [], [], []
        per_route_count = {ri: 0 for ri in range(len(routes))}
        placed = 0
        for k in range(config.n_vehicles * len(routes)):
            ri = int(order[k % len(routes)])
            route = routes[ri]
            base = SPAWN_MARGIN + per_route_count[ri] * SPAWN_SPACING
            if base > route.spawn_window:
                continue
            per_route_count[ri] += 1
            assignments.append(ri)
            spawn_s.append(base + rng.uniform(0.0, min(4.0, SPAWN_SPACING - 8.0)))
            v0 = rng.uniform(0.45, 1.0) * min(route.speed_cap, SPEED_CAP)
            desired_v.append(v0)
            spawn_v.append(rng.uniform(0.4, 0.9) * v0)
            placed += 1
            if placed == config.n_vehicles:
                break
        xy, heading, vxy = _simulate_vehicles(
            routes, assignments, spawn_s, spawn_v, desired_v, rng)
        for i in range(config.n_vehicles):
            agents.append(AgentTrack(
                agent_id=f"veh{i}", category=AgentCategory.VEHICLE,
                length=VEHICLE_LENGTH, width=VEHICLE_WIDTH,
                xy=xy[i], heading=heading[i], vxy=vxy[i],
                valid=np.ones(T_RAW, dtype=bool),
            ))

    for i in range(config.n_pedestrians):
        anchor = crosswalks[i % len(crosswalks)]
        xy, heading, vxy = _simulate_pedestrian(anchor, rng)
        agents.append(AgentTrack(
            agent_id=f"ped{i}", category=AgentCategory.PEDESTRIAN,
            length=PED_LENGTH, width=PED_WIDTH,
            xy=xy, heading=heading, vxy=vxy,
            valid=np.ones(T_RAW, dtype=bool),
        ))

    ego_id = agents[0].agent_id if agents else ""
    vehicles = [a.agent_id for a in agents if a.category == AgentCategory.VEHICLE]
    interest = [aid for aid in vehicles if aid != ego_id][:2]
    if not interest and agents:
        interest = [agents[-1].agent_id]
    return Scenario(
        scenario_id=f"{config.map_template}-{config.seed}-{index:05d}",
        agents=agents, map=polylines, ego_id=ego_id, interest_ids=interest,
    )


def generate_scenarios(config: GeneratorConfig) -> list[Scenario]:
    """Deterministic in config: per-scenario RNG streams keyed by (seed, index)."""
    return [_generate_one(config, i) for i in range(config.n_scenarios)]
