"""Deterministic Lloyd k-means with k-means++ seeding.

Empty clusters are re-seeded at the point farthest from its assigned
centroid, which keeps vocabulary ids dense.
"""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centroids = np.empty((k, points.shape[1]))
    first = rng.integers(n)
    centroids[0] = points[first]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centroids[i] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centroids[i]) ** 2, axis=1))
    return centroids


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int,
    max_iter: int = 50,
    tol: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray]:
    """Cluster [N, D] points into k centroids; returns (centroids, assignment)."""
    points = np.asarray(points, dtype=float)
    distinct = np.unique(points, axis=0)
    if len(distinct) < k:
        raise CapacityError(
            f"need >= {k} distinct points to build {k} clusters, got {len(distinct)}"
        )
    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(points, k, rng)

    assignment = np.zeros(len(points), dtype=np.int64)
    for _ in range(max_iter):
        # [N, k] squared distances; argmin ties resolve to the lowest id.
        d2 = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        assignment = np.argmin(d2, axis=1)
        new_centroids = centroids.copy()
        for c in range(k):
            members = points[assignment == c]
            if len(members):
                new_centroids[c] = members.mean(axis=0)
            else:
                farthest = np.argmax(d2[np.arange(len(points)), assignment])
                new_centroids[c] = points[farthest]
                assignment[farthest] = c
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break
    d2 = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
    assignment = np.argmin(d2, axis=1)
    return centroids, assignment
