"""Hypergraph descriptors, spectral comparison and PCA."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentPair, TooFewSamples
from .floorplan import ENTRANCE, FloorPlan, RoomProgram, facade_rooms
from .hypergraph import Hypergraph

FEATURE_SET_VERSION = "features-v1"
FEATURE_NAMES = (
    "n_rooms",
    "n_bedrooms",
    "total_area_m2",
    "access_edges_per_room",
    "mean_access_degree",
    "max_depth",
    "mean_leaf_depth",
    "leaf_depth_variance",
    "facade_room_fraction",
    "compactness",
)


class DegenerateVariance(UserWarning):
    pass


def features(hg: Hypergraph, plan: FloorPlan) -> np.ndarray:
    if set(hg.room_ids) != set(plan.room_ids):
        raise InconsistentPair(f"hypergraph {hg.label} and plan {plan.plan_id} have different rooms")
    n = len(hg.room_ids)
    depths = np.array([d for node, d in hg.root.walk() if node.is_leaf], dtype=float)
    n_edges = len(hg.access_edges)
    area = plan.boundary.area
    return np.array([
        n,
        sum(1 for r in plan.rooms if r.program is RoomProgram.BEDROOM),
        area,
        n_edges / n,
        (2 * n_edges + 1) / n,  # the entrance link adds one endpoint
        depths.max(),
        depths.mean(),
        depths.var(),
        len(facade_rooms(plan.rooms, plan.facade_edges)) / n,
        4.0 * math.sqrt(area) / plan.boundary.perimeter,
    ], dtype=float)


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    std: np.ndarray
    components: np.ndarray  # rows are unit principal axes
    explained_variance: np.ndarray
    explained_ratio: np.ndarray

    def standardize(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        safe = np.where(self.std > 0, self.std, 1.0)
        return np.where(self.std > 0, (x - self.mean) / safe, 0.0)

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.standardize(x) @ self.components.T

    def reconstruct(self, scores: np.ndarray) -> np.ndarray:
        """Back to standardized feature space."""
        return np.atleast_2d(scores) @ self.components


def pca_fit(matrix: np.ndarray) -> PcaModel:
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise TooFewSamples(f"PCA needs at least 2 rows, got {x.shape[0] if x.ndim == 2 else 0}")
    if not np.all(np.isfinite(x)):
        raise ValueError("feature matrix contains non-finite values")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std > 1e-12 * np.maximum(1.0, np.abs(mean)), std, 0.0)
    safe = np.where(std > 0, std, 1.0)
    z = np.where(std > 0, (x - mean) / safe, 0.0)
    cov = z.T @ z / x.shape[0]
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(-vals, kind="stable")
    vals = np.clip(vals[order], 0.0, None)
    comps = vecs[:, order].T.copy()
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    total = vals.sum()
    if total <= 0:
        warnings.warn("all features have zero variance", DegenerateVariance, stacklevel=2)
        ratio = np.zeros_like(vals)
    else:
        ratio = vals / total
    return PcaModel(mean, std, comps, vals, ratio)


# -- spectral comparison ----------------------------------------------------------

def subdivision_adjacency(hg: Hypergraph) -> np.ndarray:
    nodes = [node for node, _ in hg.root.walk()]
    index = {id(node): i for i, node in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)))
    for node in nodes:
        for c in node.children:
            a[index[id(node)], index[id(c)]] = a[index[id(c)], index[id(node)]] = 1.0
    return a


def access_adjacency(hg: Hypergraph) -> np.ndarray:
    """Room access graph plus an entrance node linked to the entrance room."""
    names = sorted(hg.room_ids) + [ENTRANCE]
    index = {r: i for i, r in enumerate(names)}
    a = np.zeros((len(names), len(names)))
    for u, v in list(hg.access_edges) + [(hg.entrance_room, ENTRANCE)]:
        a[index[u], index[v]] = a[index[v], index[u]] = 1.0
    return a


def spectrum(adjacency: np.ndarray) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(adjacency))[::-1]


def spectral_distance(a: np.ndarray, b: np.ndarray) -> float:
    n = max(len(a), len(b))
    pa = np.pad(a, (0, n - len(a)))
    pb = np.pad(b, (0, n - len(b)))
    return float(np.linalg.norm(pa - pb))


def hypergraph_distance(a: Hypergraph, b: Hypergraph) -> tuple[float, float]:
    """(subdivision, access) spectral distances."""
    return (spectral_distance(spectrum(subdivision_adjacency(a)), spectrum(subdivision_adjacency(b))),
            spectral_distance(spectrum(access_adjacency(a)), spectrum(access_adjacency(b))))
