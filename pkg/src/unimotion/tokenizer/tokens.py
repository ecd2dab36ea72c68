"""Scenario <-> token-sequence conversion.

Matching is drift-aware: each candidate token is placed at the previously
matched (already quantized) pose and scored against ground-truth absolute
positions, so quantization error does not compound along the sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, RangeError, ShapeError
from ..geometry import to_local, to_world, wrap_angle
from ..scenario.types import T_RAW, AgentCategory, Scenario
from .vocab import (
    HISTORY_TOKENS,
    TOKEN_FRAMES,
    TOKENS_PER_SCENARIO,
    AgentVocabulary,
    MapVocabulary,
    map_segments,
)


@dataclass
class TokenizedScenario:
    scenario_id: str
    agent_ids: list[str]
    categories: np.ndarray       # [N_a] category indices
    lengths: np.ndarray          # [N_a] box lengths
    widths: np.ndarray           # [N_a]
    token_ids: np.ndarray        # [N_a, T]
    valid: np.ndarray            # [N_a, T] bool
    anchor_xy: np.ndarray        # [N_a, T+1, 2] chained boundary poses
    anchor_heading: np.ndarray   # [N_a, T+1]
    map_token_ids: np.ndarray    # [N_m]
    map_xy: np.ndarray           # [N_m, 2]
    map_heading: np.ndarray      # [N_m]
    ego_index: int
    interest_indices: list[int]
    history_tokens: int = HISTORY_TOKENS

    @property
    def n_agents(self) -> int:
        return len(self.agent_ids)

    @property
    def n_steps(self) -> int:
        return self.token_ids.shape[1]

    def slot_pose(self, agent: int, step: int) -> tuple[np.ndarray, float]:
        """Pose after the given token step (the slot's end boundary)."""
        return self.anchor_xy[agent, step + 1], float(self.anchor_heading[agent, step + 1])


def match_tokens(
    vocab: AgentVocabulary,
    start_xy: np.ndarray,
    start_heading: float,
    gt_xy: np.ndarray,          # [n_tokens * 5, 2] absolute positions
    gt_heading: np.ndarray,     # [n_tokens * 5] absolute headings
    slot_valid: np.ndarray,     # [n_tokens] bool
    category: AgentCategory | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Greedy drift-aware matching; returns (ids, anchors_xy, anchors_heading).

    anchors have n_tokens + 1 entries, chained through the matched tokens.
    """
    n_tokens = len(slot_valid)
    if gt_xy.shape != (n_tokens * TOKEN_FRAMES, 2):
        raise ShapeError(f"expected {(n_tokens * TOKEN_FRAMES, 2)} gt points, got {gt_xy.shape}")
    lo, hi = (0, vocab.size) if category is None else vocab.id_range_for(category)
    offsets = vocab.offsets_array()[lo:hi]          # [K, 5, 2]
    dheadings = vocab.heading_array()[lo:hi]        # [K]
    w_h = vocab.heading_weight

    ids = np.full(n_tokens, vocab.zero_token_id, dtype=np.int64)
    anchors_xy = np.zeros((n_tokens + 1, 2))
    anchors_h = np.zeros(n_tokens + 1)
    anchors_xy[0] = start_xy
    anchors_h[0] = start_heading

    for i in range(n_tokens):
        if not slot_valid[i]:
            anchors_xy[i + 1] = anchors_xy[i]
            anchors_h[i + 1] = anchors_h[i]
            continue
        sl = slice(i * TOKEN_FRAMES, (i + 1) * TOKEN_FRAMES)
        gt_local = to_local(gt_xy[sl], anchors_xy[i], anchors_h[i])   # [5, 2]
        gt_dh = wrap_angle(gt_heading[sl][-1] - anchors_h[i])
        dist = np.linalg.norm(offsets - gt_local[None], axis=2).sum(axis=1) \
            + w_h * np.abs(wrap_angle(dheadings - gt_dh))
        best = int(np.argmin(dist))                 # ties -> lowest id
        ids[i] = lo + best
        anchors_xy[i + 1] = to_world(offsets[best][-1], anchors_xy[i], anchors_h[i])
        anchors_h[i + 1] = wrap_angle(anchors_h[i] + dheadings[best])
    return ids, anchors_xy, anchors_h


def tokenize_scenario(
    scenario: Scenario,
    agent_vocab: AgentVocabulary,
    map_vocab: MapVocabulary,
) -> TokenizedScenario:
    if agent_vocab is None or map_vocab is None:
        raise ConfigurationError("both vocabularies are required for tokenization")

    n_a = len(scenario.agents)
    token_ids = np.zeros((n_a, TOKENS_PER_SCENARIO), dtype=np.int64)
    valid = np.zeros((n_a, TOKENS_PER_SCENARIO), dtype=bool)
    anchor_xy = np.zeros((n_a, TOKENS_PER_SCENARIO + 1, 2))
    anchor_h = np.zeros((n_a, TOKENS_PER_SCENARIO + 1))

    for ai, track in enumerate(scenario.agents):
        if len(track) != T_RAW:
            raise ShapeError(f"agent {track.agent_id}: track length {len(track)} != {T_RAW}")
        slot_valid = np.array([
            track.valid[i * TOKEN_FRAMES:(i + 1) * TOKEN_FRAMES + 1].all()
            for i in range(TOKENS_PER_SCENARIO)
        ])
        first_valid = int(np.argmax(track.valid)) if track.valid.any() else 0
        cat = track.category if agent_vocab.per_category else None
        ids, axy, ah = match_tokens(
            agent_vocab,
            track.xy[first_valid], float(track.heading[first_valid]),
            track.xy[1:], track.heading[1:], slot_valid, category=cat,
        )
        token_ids[ai] = ids
        valid[ai] = slot_valid
        anchor_xy[ai] = axy
        anchor_h[ai] = ah

    m_shapes, m_poses, _ = map_segments(scenario)
    shapes = map_vocab.shapes_array().reshape(map_vocab.size, -1)     # [K, 6]
    d2 = np.sum((m_shapes.reshape(len(m_shapes), 1, -1) - shapes[None]) ** 2, axis=2)
    map_ids = np.argmin(d2, axis=1).astype(np.int64)

    agent_ids = [a.agent_id for a in scenario.agents]
    interest = [agent_ids.index(i) for i in scenario.interest_ids]
    return TokenizedScenario(
        scenario_id=scenario.scenario_id,
        agent_ids=agent_ids,
        categories=np.array([a.category.index for a in scenario.agents], dtype=np.int64),
        lengths=np.array([a.length for a in scenario.agents]),
        widths=np.array([a.width for a in scenario.agents]),
        token_ids=token_ids, valid=valid,
        anchor_xy=anchor_xy, anchor_heading=anchor_h,
        map_token_ids=map_ids, map_xy=m_poses[:, :2], map_heading=m_poses[:, 2],
        ego_index=agent_ids.index(scenario.ego_id) if scenario.agents else -1,
        interest_indices=interest,
    )


def detokenize(
    token_ids: np.ndarray,
    start_xy: np.ndarray,
    start_heading: float,
    vocab: AgentVocabulary,
) -> tuple[np.ndarray, np.ndarray]:
    """Chain token offsets from a start pose; returns (xy [5n, 2], heading [5n]).

    Headings interpolate linearly inside each token.
    """
    token_ids = np.asarray(token_ids, dtype=np.int64)
    if token_ids.size and (token_ids.min() < 0 or token_ids.max() >= vocab.size):
        raise RangeError(
            f"token id out of range [0, {vocab.size}): {int(token_ids.min())}..{int(token_ids.max())}")
    xy = np.zeros((len(token_ids) * TOKEN_FRAMES, 2))
    heading = np.zeros(len(token_ids) * TOKEN_FRAMES)
    cur_xy = np.asarray(start_xy, dtype=float)
    cur_h = float(start_heading)
    frac = np.arange(1, TOKEN_FRAMES + 1) / TOKEN_FRAMES
    for i, tid in enumerate(token_ids):
        tok = vocab.tokens[int(tid)]
        sl = slice(i * TOKEN_FRAMES, (i + 1) * TOKEN_FRAMES)
        xy[sl] = to_world(tok.offsets, cur_xy, cur_h)
        heading[sl] = wrap_angle(cur_h + frac * tok.heading_delta)
        cur_xy = xy[sl][-1]
        cur_h = float(heading[sl][-1])
    return xy, heading


def headings_from_xy(
    xy: np.ndarray, start_xy: np.ndarray, start_heading: float, dt: float = 0.1
) -> np.ndarray:
    """Finite-difference headings, holding the previous value below 0.1 m/s."""
    pts = np.concatenate([np.asarray(start_xy, dtype=float)[None],
                          np.asarray(xy, dtype=float)], axis=0)
    steps = np.diff(pts, axis=0)
    out = np.zeros(len(xy))
    prev = float(start_heading)
    for i, step in enumerate(steps):
        if np.linalg.norm(step) / dt >= 0.1:
            prev = float(np.arctan2(step[1], step[0]))
        out[i] = prev
    return out


def tokenize_continuation(
    vocab: AgentVocabulary,
    start_xy: np.ndarray,
    start_heading: float,
    future_xy: np.ndarray,
    n_tokens: int,
    category: AgentCategory | None = None,
    future_heading: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tokenize a continuous future (e.g. a predicted trajectory) from a pose."""
    need = n_tokens * TOKEN_FRAMES
    if len(future_xy) < need:
        raise ShapeError(f"future needs {need} frames, got {len(future_xy)}")
    future_xy = np.asarray(future_xy, dtype=float)[:need]
    if future_heading is None:
        future_heading = headings_from_xy(future_xy, start_xy, start_heading)
    return match_tokens(
        vocab, np.asarray(start_xy, dtype=float), float(start_heading),
        future_xy, np.asarray(future_heading, dtype=float)[:need],
        np.ones(n_tokens, dtype=bool), category=category,
    )


@dataclass
class QuantizationReport:
    mean_ade: float
    p99_ade: float        # the corpus quantization bound
    per_agent_ade: np.ndarray


def measure_quantization(
    scenarios: list[Scenario],
    agent_vocab: AgentVocabulary,
    map_vocab: MapVocabulary,
) -> QuantizationReport:
    """Tokenize-detokenize roundtrip displacement over a corpus."""
    ades = []
    for s in scenarios:
        tok = tokenize_scenario(s, agent_vocab, map_vocab)
        for ai, track in enumerate(s.agents):
            if not tok.valid[ai].all():
                continue
            xy, _ = detokenize(tok.token_ids[ai], track.xy[0],
                               float(track.heading[0]), agent_vocab)
            ades.append(float(np.mean(np.linalg.norm(xy - track.xy[1:], axis=1))))
    per_agent = np.array(ades)
    return QuantizationReport(
        mean_ade=float(per_agent.mean()),
        p99_ade=float(np.percentile(per_agent, 99)),
        per_agent_ade=per_agent,
    )
