"""Planar rigid-transform helpers shared by the tokenizer, model and metrics."""

from __future__ import annotations

import numpy as np


def wrap_angle(theta):
    """Wrap angles to (-pi, pi]."""
    wrapped = -((-np.asarray(theta) + np.pi) % (2.0 * np.pi) - np.pi)
    return wrapped


def rotation(theta):
    """2x2 rotation matrices, shape [..., 2, 2]."""
    c, s = np.cos(theta), np.sin(theta)
    return np.stack(
        [np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2
    )


def to_local(points, origin_xy, origin_heading):
    """Express world-frame points in the frame at (origin_xy, origin_heading).

    points [..., 2]; origin_xy [2] or broadcastable; returns same shape.
    """
    points = np.asarray(points, dtype=float)
    delta = points - np.asarray(origin_xy, dtype=float)
    c, s = np.cos(origin_heading), np.sin(origin_heading)
    x = delta[..., 0] * c + delta[..., 1] * s
    y = -delta[..., 0] * s + delta[..., 1] * c
    return np.stack([x, y], axis=-1)


def to_world(points, origin_xy, origin_heading):
    """Inverse of :func:`to_local`."""
    points = np.asarray(points, dtype=float)
    c, s = np.cos(origin_heading), np.sin(origin_heading)
    x = points[..., 0] * c - points[..., 1] * s
    y = points[..., 0] * s + points[..., 1] * c
    return np.stack([x, y], axis=-1) + np.asarray(origin_xy, dtype=float)


def transform_points(points, dx, dy, dtheta):
    """Apply a global rigid transform (rotate by dtheta, then translate)."""
    points = np.asarray(points, dtype=float)
    c, s = np.cos(dtheta), np.sin(dtheta)
    x = points[..., 0] * c - points[..., 1] * s + dx
    y = points[..., 0] * s + points[..., 1] * c + dy
    return np.stack([x, y], axis=-1)


def polyline_point_distance(point, polyline):
    """Min distance from a point to a polyline given as [P, 2] vertices."""
    return float(np.min(polyline_points_distance(np.asarray(point)[None], polyline)))


def polyline_points_distance(points, polyline):
    """Min distance from each of [N, 2] points to segments of [P, 2] polyline."""
    points = np.asarray(points, dtype=float)
    poly = np.asarray(polyline, dtype=float)
    if len(poly) == 1:
        return np.linalg.norm(points - poly[0], axis=-1)
    a = poly[:-1]  # [S, 2]
    b = poly[1:]
    ab = b - a
    denom = np.maximum(np.sum(ab * ab, axis=-1), 1e-12)  # [S]
    ap = points[:, None, :] - a[None, :, :]  # [N, S, 2]
    t = np.clip(np.sum(ap * ab[None], axis=-1) / denom[None], 0.0, 1.0)
    proj = a[None] + t[..., None] * ab[None]
    d = np.linalg.norm(points[:, None, :] - proj, axis=-1)  # [N, S]
    return np.min(d, axis=1)
