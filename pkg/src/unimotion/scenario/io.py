"""Scenario set files: newline-delimited records, one scenario per line.

First line is a header record; an optional provenance record (for
simulated/predicted/planned dumps) follows the header. Numbers are decimal,
so a write/read roundtrip reproduces coordinates exactly.
"""

from __future__ import annotations

import json
import os

import numpy as np

from ..errors import ParseError, VersionError
from .types import DT, AgentCategory, AgentTrack, MapPolyline, PolylineKind, Scenario

FORMAT_NAME = "unimotion-scenario"
FORMAT_VERSION = 1


def _scenario_record(s: Scenario) -> dict:
    agents = []
    for a in s.agents:
        states = np.concatenate(
            [a.xy, a.heading[:, None], a.vxy, a.valid[:, None].astype(float)], axis=1
        )
        agents.append({
            "agent_id": a.agent_id,
            "category": a.category.value,
            "length": a.length,
            "width": a.width,
            "states": [[float(v) if i < 5 else int(v) for i, v in enumerate(row)]
                       for row in states],
        })
    polys = [{
        "polyline_id": p.polyline_id,
        "kind": p.kind.value,
        "points": [[float(x), float(y)] for x, y in p.points],
    } for p in s.map]
    return {
        "scenario_id": s.scenario_id,
        "ego_id": s.ego_id,
        "interest_ids": list(s.interest_ids),
        "agents": agents,
        "map": polys,
    }


def _record_scenario(rec: dict, line: int) -> Scenario:
    try:
        agents = []
        for a in rec["agents"]:
            states = np.asarray(a["states"], dtype=float)
            if states.ndim != 2 or states.shape[1] != 6:
                raise ParseError(
                    f"agent {a['agent_id']}: states must be rows of 6 numbers", line)
            agents.append(AgentTrack(
                agent_id=a["agent_id"],
                category=AgentCategory(a["category"]),
                length=float(a["length"]), width=float(a["width"]),
                xy=states[:, 0:2], heading=states[:, 2],
                vxy=states[:, 3:5], valid=states[:, 5] > 0.5,
            ))
        polys = [
            MapPolyline(p["polyline_id"], PolylineKind(p["kind"]),
                        np.asarray(p["points"], dtype=float))
            for p in rec["map"]
        ]
        return Scenario(
            scenario_id=rec["scenario_id"], agents=agents, map=polys,
            ego_id=rec["ego_id"], interest_ids=list(rec["interest_ids"]),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad scenario record: {exc}", line) from exc


def write_scenarios(path, scenarios, provenance: dict | None = None) -> None:
    header = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "dt": DT}
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        if provenance is not None:
            fh.write(json.dumps({"provenance": provenance}) + "\n")
        for s in scenarios:
            fh.write(json.dumps(_scenario_record(s)) + "\n")


def read_scenarios(path) -> list[Scenario]:
    scenarios, _ = read_scenarios_with_provenance(path)
    return scenarios


def read_scenarios_with_provenance(path) -> tuple[list[Scenario], dict | None]:
    if not os.path.exists(path):
        raise ParseError(f"no such scenario file: {path}")
    scenarios: list[Scenario] = []
    provenance = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
            if lineno == 1:
                if rec.get("format") != FORMAT_NAME:
                    raise ParseError(
                        f"expected header with format={FORMAT_NAME!r}", lineno)
                if rec.get("version") != FORMAT_VERSION:
                    raise VersionError(
                        f"scenario file version {rec.get('version')} != {FORMAT_VERSION}")
                continue
            if "provenance" in rec:
                provenance = rec["provenance"]
                continue
            scenarios.append(_record_scenario(rec, lineno))
    return scenarios, provenance
