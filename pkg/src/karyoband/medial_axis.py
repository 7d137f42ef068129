"""Medial-axis approximation: thinning, branch pruning, polyline fitting."""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .imagecore import ImageError

SQRT2 = math.sqrt(2.0)

_NEIGHBORS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


@dataclass(frozen=True)
class AxisPolyline:
    """Ordered subpixel (row, col) vertices approximating the medial axis."""

    points: np.ndarray  # (n, 2) float64

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("polyline needs at least 2 (row, col) points")
        if np.any(np.linalg.norm(np.diff(pts, axis=0), axis=1) < 1e-12):
            raise ValueError("consecutive polyline points must be distinct")
        object.__setattr__(self, "points", pts)

    @property
    def segment_tangents(self):
        d = np.diff(self.points, axis=0)
        return d / np.linalg.norm(d, axis=1, keepdims=True)

    @property
    def segment_lengths(self):
        return np.linalg.norm(np.diff(self.points, axis=0), axis=1)


def skeletonize(mask):
    """One-pixel-wide skeleton of a foreground mask (Zhang-Suen thinning)."""
    if not mask.any():
        raise ImageError("cannot skeletonize an empty mask")
    return kernels.zhang_suen_thin(mask)


def _pixel_graph(pixels):
    index = {p: i for i, p in enumerate(pixels)}
    adj = [[] for _ in pixels]
    for i, (r, c) in enumerate(pixels):
        for dr, dc in _NEIGHBORS:
            j = index.get((r + dr, c + dc))
            if j is not None:
                adj[i].append((j, SQRT2 if dr and dc else 1.0))
    return adj


def _dijkstra(adj, start):
    dist = [math.inf] * len(adj)
    prev = [-1] * len(adj)
    dist[start] = 0.0
    heap = [(0.0, start)]
    while heap:
        d, i = heapq.heappop(heap)
        if d > dist[i]:
            continue
        for j, w in adj[i]:
            nd = d + w
            if nd < dist[j] - 1e-12:
                dist[j] = nd
                prev[j] = i
                heapq.heappush(heap, (nd, j))
    return dist, prev


def longest_path(skeleton):
    """Maximal-length simple path between skeleton endpoints.

    Edge weights are 1 (axial) and sqrt(2) (diagonal). Raises on a
    disconnected skeleton.
    """
    pixels = [tuple(p) for p in np.argwhere(skeleton)]
    if not pixels:
        raise ImageError("empty skeleton")
    if len(pixels) == 1:
        return [pixels[0]]
    pixels.sort()
    adj = _pixel_graph(pixels)
    dist0, _ = _dijkstra(adj, 0)
    if any(math.isinf(d) for d in dist0):
        raise ImageError("disconnected skeleton")
    endpoints = [i for i, a in enumerate(adj) if len(a) <= 1]
    if not endpoints:
        # pure cycle: double sweep from an arbitrary pixel
        endpoints = [int(np.argmax(dist0))]
    best = (-1.0, None, None)
    for s in endpoints:
        dist, prev = _dijkstra(adj, s)
        t = int(np.argmax(dist))
        if dist[t] > best[0]:
            best = (dist[t], t, prev)
    _, t, prev = best
    path = []
    while t != -1:
        path.append(pixels[t])
        t = prev[t]
    return path[::-1]


def _resample(points, step):
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    targets = list(np.arange(0.0, total, step))
    if not targets or total - targets[-1] > 1e-9:
        targets.append(total)
    out = np.stack([
        np.interp(targets, s, points[:, 0]),
        np.interp(targets, s, points[:, 1]),
    ], axis=1)
    # drop near-duplicate consecutive vertices
    keep = [0]
    for i in range(1, len(out)):
        if np.linalg.norm(out[i] - out[keep[-1]]) > 1e-9:
            keep.append(i)
    return out[keep]


def _extend_to_boundary(point, direction, mask, max_steps=1000):
    h, w = mask.shape
    pos = point.copy()
    last = point.copy()
    for _ in range(max_steps):
        pos = pos + 0.5 * direction
        r = int(round(pos[0]))
        c = int(round(pos[1]))
        if r < 0 or r >= h or c < 0 or c >= w or not mask[r, c]:
            break
        last = pos.copy()
    return last


def fit_polyline(path, mask, step=5.0):
    """Resample a pixel path at `step` arc-length intervals and extend both
    ends along their tangents until they leave the mask."""
    if len(path) == 0:
        raise ImageError("empty path")
    if len(path) < 2:
        raise ImageError("path too short to orient a polyline")
    pts = np.asarray(path, dtype=np.float64)
    verts = _resample(pts, step)
    t0 = verts[0] - verts[1]
    t0 /= np.linalg.norm(t0)
    t1 = verts[-1] - verts[-2]
    t1 /= np.linalg.norm(t1)
    head = _extend_to_boundary(verts[0], t0, mask)
    tail = _extend_to_boundary(verts[-1], t1, mask)
    out = [head] if np.linalg.norm(head - verts[0]) > 1e-9 else []
    out.extend(verts)
    if np.linalg.norm(tail - verts[-1]) > 1e-9:
        out.append(tail)
    return AxisPolyline(np.asarray(out))
