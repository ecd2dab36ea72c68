"""Agent and map token vocabularies.

Agent tokens are 0.5 s motion segments (5 offsets at 0.1 s plus a heading
delta) normalized to the segment-start pose and clustered with k-means.
Map tokens are 0.5 m polyline segments resampled to 3 points in their
segment-start frame.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapacityError, ParseError, VersionError
from ..geometry import to_local, wrap_angle
from ..scenario.types import AgentCategory, Scenario
from .kmeans import kmeans

TOKEN_FRAMES = 5            # raw frames per agent token (0.5 s at 10 Hz)
TOKENS_PER_SCENARIO = 18    # 90 future-facing intervals / 5
HISTORY_TOKENS = 2          # frames 1..10 as two 0.5 s tokens
MAP_SEGMENT_LENGTH = 0.5    # meters per map token
MAP_SEGMENT_POINTS = 3
HEADING_WEIGHT = 1.0        # meters-per-radian scale in the matching metric

VOCAB_FORMAT = "unimotion-vocab"
VOCAB_VERSION = 1

_CATEGORIES = [c.value for c in AgentCategory]


@dataclass(frozen=True)
class MotionToken:
    token_id: int
    offsets: np.ndarray       # [5, 2] meters, segment-start frame
    heading_delta: float      # radians over the full token


@dataclass(frozen=True)
class MapToken:
    token_id: int
    shape: np.ndarray         # [3, 2] meters, first point at origin
    kind: str


@dataclass
class AgentVocabulary:
    tokens: list[MotionToken]
    heading_weight: float = HEADING_WEIGHT
    per_category: bool = False
    # When per_category is set, category_ranges maps category -> (lo, hi) id span.
    category_ranges: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.tokens)

    @property
    def zero_token_id(self) -> int:
        return self._zero_id

    def __post_init__(self):
        norms = [float(np.abs(t.offsets).sum() + abs(t.heading_delta)) for t in self.tokens]
        self._zero_id = int(np.argmin(norms))

    def offsets_array(self) -> np.ndarray:
        return np.stack([t.offsets for t in self.tokens])  # [K, 5, 2]

    def heading_array(self) -> np.ndarray:
        return np.array([t.heading_delta for t in self.tokens])  # [K]

    def id_range_for(self, category: AgentCategory) -> tuple[int, int]:
        if not self.per_category:
            return (0, self.size)
        return self.category_ranges[category.value]


@dataclass
class MapVocabulary:
    tokens: list[MapToken]

    @property
    def size(self) -> int:
        return len(self.tokens)

    def shapes_array(self) -> np.ndarray:
        return np.stack([t.shape for t in self.tokens])  # [K, 3, 2]


def motion_segments(scenario: Scenario, category: AgentCategory | None = None):
    """Normalized (offsets [5,2], heading_delta) pairs for every valid token slot."""
    out_off, out_dh = [], []
    for track in scenario.agents:
        if category is not None and track.category != category:
            continue
        for i in range(TOKENS_PER_SCENARIO):
            lo, hi = i * TOKEN_FRAMES, (i + 1) * TOKEN_FRAMES
            if not track.valid[lo:hi + 1].all():
                continue
            origin_xy = track.xy[lo]
            origin_h = track.heading[lo]
            offsets = to_local(track.xy[lo + 1:hi + 1], origin_xy, origin_h)
            dh = float(wrap_angle(track.heading[hi] - origin_h))
            out_off.append(offsets)
            out_dh.append(dh)
    return out_off, out_dh


def _segment_features(offsets_list, dh_list, heading_weight):
    flat = np.stack([o.reshape(-1) for o in offsets_list])  # [N, 10]
    dh = np.asarray(dh_list)[:, None] * heading_weight
    return np.concatenate([flat, dh], axis=1)  # [N, 11]


def _tokens_from_centroids(centroids, heading_weight, id_offset=0):
    tokens = []
    for i, row in enumerate(centroids):
        tokens.append(MotionToken(
            token_id=id_offset + i,
            offsets=row[:10].reshape(5, 2).copy(),
            heading_delta=float(row[10] / heading_weight),
        ))
    return tokens


def _snap_zero_token(tokens: list[MotionToken]) -> list[MotionToken]:
    # The vocabulary carries an exact zero-motion token by construction.
    norms = [float(np.abs(t.offsets).sum() + abs(t.heading_delta)) for t in tokens]
    zid = int(np.argmin(norms))
    snapped = MotionToken(tokens[zid].token_id, np.zeros((5, 2)), 0.0)
    return [snapped if i == zid else t for i, t in enumerate(tokens)]


def build_agent_vocabulary(
    scenarios: list[Scenario],
    k: int,
    seed: int = 0,
    heading_weight: float = HEADING_WEIGHT,
    per_category: bool = False,
) -> AgentVocabulary:
    if per_category:
        tokens: list[MotionToken] = []
        ranges: dict[str, tuple[int, int]] = {}
        per_k = k // len(_CATEGORIES)
        for ci, cat in enumerate(AgentCategory):
            offs, dhs = [], []
            for s in scenarios:
                o, d = motion_segments(s, category=cat)
                offs.extend(o)
                dhs.extend(d)
            lo = len(tokens)
            if not offs:
                ranges[cat.value] = (lo, lo)
                continue
            feats = _segment_features(offs, dhs, heading_weight)
            kk = min(per_k, len(np.unique(feats, axis=0)))
            if kk == 0:
                raise CapacityError(f"no segments for category {cat.value}")
            centroids, _ = kmeans(feats, kk, seed=seed + ci)
            tokens.extend(_snap_zero_token(
                _tokens_from_centroids(centroids, heading_weight, id_offset=lo)))
            ranges[cat.value] = (lo, len(tokens))
        return AgentVocabulary(tokens, heading_weight, True, ranges)

    offs, dhs = [], []
    for s in scenarios:
        o, d = motion_segments(s)
        offs.extend(o)
        dhs.extend(d)
    if len(offs) < k:
        raise CapacityError(f"{len(offs)} segments < requested vocabulary size {k}")
    feats = _segment_features(offs, dhs, heading_weight)
    centroids, _ = kmeans(feats, k, seed=seed)
    return AgentVocabulary(_snap_zero_token(
        _tokens_from_centroids(centroids, heading_weight)), heading_weight)


def polyline_segments(points: np.ndarray, kind: str):
    """Cut a polyline into 0.5 m segments of 3 resampled points.

    Returns (shapes [S,3,2] local, poses [S,3] (x, y, heading), kinds).
    """
    points = np.asarray(points, dtype=float)
    seg = np.diff(points, axis=0)
    seg_len = np.linalg.norm(seg, axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = float(arc[-1])
    n_segments = max(int(total // MAP_SEGMENT_LENGTH), 1)

    def at(s):
        s = np.clip(s, 0.0, total)
        return np.stack([np.interp(s, arc, points[:, 0]),
                         np.interp(s, arc, points[:, 1])], axis=-1)

    shapes, poses, kinds = [], [], []
    for i in range(n_segments):
        s0 = i * MAP_SEGMENT_LENGTH
        span = min(MAP_SEGMENT_LENGTH, max(total - s0, 1e-6))
        sample = at(s0 + np.linspace(0.0, span, MAP_SEGMENT_POINTS))
        tangent = sample[1] - sample[0]
        heading = float(np.arctan2(tangent[1], tangent[0]))
        local = to_local(sample, sample[0], heading)
        shapes.append(local)
        poses.append([sample[0, 0], sample[0, 1], heading])
        kinds.append(kind)
    return np.stack(shapes), np.array(poses), kinds


def map_segments(scenario: Scenario):
    shapes, poses, kinds = [], [], []
    for poly in scenario.map:
        sh, po, kn = polyline_segments(poly.points, poly.kind.value)
        shapes.append(sh)
        poses.append(po)
        kinds.extend(kn)
    return np.concatenate(shapes), np.concatenate(poses), kinds


def build_map_vocabulary(scenarios: list[Scenario], k: int, seed: int = 0) -> MapVocabulary:
    all_shapes, all_kinds = [], []
    for s in scenarios:
        sh, _, kn = map_segments(s)
        all_shapes.append(sh)
        all_kinds.extend(kn)
    shapes = np.concatenate(all_shapes)  # [N, 3, 2]
    if len(shapes) < k:
        raise CapacityError(f"{len(shapes)} map segments < requested size {k}")
    feats = shapes.reshape(len(shapes), -1)
    centroids, assignment = kmeans(feats, k, seed=seed)
    kinds_arr = np.array(all_kinds)
    tokens = []
    for i, row in enumerate(centroids):
        members = kinds_arr[assignment == i]
        if len(members):
            values, counts = np.unique(members, return_counts=True)
            kind = str(values[np.argmax(counts)])
        else:
            kind = "lane_center"
        tokens.append(MapToken(i, row.reshape(3, 2).copy(), kind))
    return MapVocabulary(tokens)


# ---------------------------------------------------------------------------
# Serialization. Digests are sha256 over the exact serialized bytes, so a
# vocabulary's identity follows its content.

def _agent_vocab_lines(vocab: AgentVocabulary):
    header = {"format": VOCAB_FORMAT, "version": VOCAB_VERSION, "kind": "agent",
              "size": vocab.size, "heading_weight": vocab.heading_weight}
    if vocab.per_category:
        header["category_ranges"] = vocab.category_ranges
    yield json.dumps(header)
    for t in vocab.tokens:
        yield json.dumps({"token_id": t.token_id,
                          "offsets": [[float(x), float(y)] for x, y in t.offsets],
                          "heading_delta": float(t.heading_delta)})


def _map_vocab_lines(vocab: MapVocabulary):
    yield json.dumps({"format": VOCAB_FORMAT, "version": VOCAB_VERSION,
                      "kind": "map", "size": vocab.size, "heading_weight": 0.0})
    for t in vocab.tokens:
        yield json.dumps({"token_id": t.token_id,
                          "shape": [[float(x), float(y)] for x, y in t.shape],
                          "kind": t.kind})


def serialize_vocabulary(vocab) -> str:
    lines = _agent_vocab_lines(vocab) if isinstance(vocab, AgentVocabulary) \
        else _map_vocab_lines(vocab)
    return "".join(line + "\n" for line in lines)


def vocabulary_digest(vocab) -> str:
    return hashlib.sha256(serialize_vocabulary(vocab).encode()).hexdigest()


def save_vocabulary(path, vocab) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_vocabulary(vocab))


def load_vocabulary(path):
    if not os.path.exists(path):
        raise ParseError(f"no such vocabulary file: {path}")
    with open(path) as fh:
        return _parse_vocabulary(fh)


def _parse_vocabulary(fh: io.TextIOBase):
    header = None
    agent_tokens: list[MotionToken] = []
    map_tokens: list[MapToken] = []
    for lineno, raw in enumerate(fh, start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
        if lineno == 1:
            if rec.get("format") != VOCAB_FORMAT:
                raise ParseError(f"expected {VOCAB_FORMAT!r} header", lineno)
            if rec.get("version") != VOCAB_VERSION:
                raise VersionError(
                    f"vocabulary version {rec.get('version')} != {VOCAB_VERSION}")
            header = rec
            continue
        try:
            if header["kind"] == "agent":
                agent_tokens.append(MotionToken(
                    token_id=int(rec["token_id"]),
                    offsets=np.asarray(rec["offsets"], dtype=float),
                    heading_delta=float(rec["heading_delta"]),
                ))
            else:
                map_tokens.append(MapToken(
                    token_id=int(rec["token_id"]),
                    shape=np.asarray(rec["shape"], dtype=float),
                    kind=str(rec["kind"]),
                ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad token record: {exc}", lineno) from exc
    if header is None:
        raise ParseError("empty vocabulary file", 1)
    if header["kind"] == "agent":
        ranges = {k: tuple(v) for k, v in header.get("category_ranges", {}).items()}
        return AgentVocabulary(
            agent_tokens, float(header.get("heading_weight", HEADING_WEIGHT)),
            per_category=bool(ranges), category_ranges=ranges)
    return MapVocabulary(map_tokens)
