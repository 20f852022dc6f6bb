"""Contiguity-constrained agglomeration of map units into super-classes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataValidationError
from .som import MapTopology, SomModel

LINKAGES = ("ward", "single", "complete", "average")


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    cost: float
    new: int
    size: int


@dataclass(frozen=True, eq=False)
class SuperClustering:
    """Partition of map units. Ids are canonical: ordered by lowest unit."""

    topology: MapTopology
    unit_to_super: np.ndarray
    merge_history: tuple[Merge, ...]
    k: int
    linkage: str = "ward"
    group_labels: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    def members(self, s: int) -> list[int]:
        return np.flatnonzero(self.unit_to_super == s).tolist()


def canonical_labels(labels) -> np.ndarray:
    labels = np.asarray(labels)
    out = np.empty(labels.size, dtype=np.int64)
    mapping = {}
    for i, lab in enumerate(labels.tolist()):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


def is_connected(topology: MapTopology, units) -> bool:
    units = sorted(set(int(u) for u in units))
    if not units:
        return True
    adj = topology.distance_matrix() == 1
    seen = {units[0]}
    stack = [units[0]]
    member = set(units)
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u]).tolist():
            if v in member and v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(member)


def _link_cost(linkage, ca, cb, wa, wb, pair_d, ma, mb):
    if linkage == "ward":
        tot = wa + wb
        if tot == 0:
            return 0.0
        return wa * wb / tot * float(np.sum((ca - cb) ** 2))
    block = pair_d[np.ix_(ma, mb)]
    if linkage == "single":
        return float(block.min())
    if linkage == "complete":
        return float(block.max())
    return float(block.mean())


def agglomerate(vectors, topology: MapTopology, weights=None, linkage: str = "ward",
                constrained: bool = True) -> list[Merge]:
    """Full bottom-up merge history down to one cluster.

    Ward cost is ``wa*wb/(wa+wb) * |ca - cb|^2`` (the increase in weighted
    within-cluster inertia). Only map-adjacent clusters may merge when
    ``constrained``. Ties go to the lexicographically smallest (a, b).
    """
    if linkage not in LINKAGES:
        raise DataValidationError(f"unknown linkage {linkage!r}")
    x = np.asarray(vectors, dtype=float)
    u = x.shape[0]
    if u != topology.n_units:
        raise DataValidationError("one vector per map unit is required")
    w = np.ones(u) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (u,) or (w < 0).any():
        raise DataValidationError("weights must be one non-negative value per unit")
    adj_units = topology.distance_matrix() == 1
    pair_d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2))

    members = {i: [i] for i in range(u)}
    centroid = {i: x[i].copy() for i in range(u)}
    weight = {i: float(w[i]) for i in range(u)}
    if constrained:
        neighbours = {i: set(np.flatnonzero(adj_units[i]).tolist()) for i in range(u)}
    history = []
    next_id = u
    while len(members) > 1:
        if constrained:
            pairs = sorted((a, b) for a in neighbours for b in neighbours[a] if a < b)
        else:
            ids = sorted(members)
            pairs = [(a, b) for ia, a in enumerate(ids) for b in ids[ia + 1:]]
        best = None
        for a, b in pairs:
            c = _link_cost(linkage, centroid[a], centroid[b], weight[a], weight[b],
                           pair_d, members[a], members[b])
            if best is None or c < best[0]:
                best = (c, a, b)
        if best is None:
            raise DataValidationError("map adjacency graph is disconnected")
        cost, a, b = best
        wa, wb = weight[a], weight[b]
        tot = wa + wb
        if tot > 0:
            cen = (wa * centroid[a] + wb * centroid[b]) / tot
        else:
            na, nb = len(members[a]), len(members[b])
            cen = (na * centroid[a] + nb * centroid[b]) / (na + nb)
        members[next_id] = sorted(members.pop(a) + members.pop(b))
        centroid[next_id] = cen
        weight[next_id] = tot
        del centroid[a], centroid[b], weight[a], weight[b]
        if constrained:
            joined = (neighbours.pop(a) | neighbours.pop(b)) - {a, b}
            for v in joined:
                neighbours[v] -= {a, b}
                neighbours[v].add(next_id)
            neighbours[next_id] = joined
        history.append(Merge(a, b, cost, next_id, len(members[next_id])))
        next_id += 1
    return history


def cut(history, n_units: int, k: int) -> np.ndarray:
    """Canonical labels of the ``k``-cluster partition from a merge history."""
    if not 1 <= k <= n_units:
        raise DataValidationError(f"k={k} outside 1..{n_units}")
    parent = list(range(n_units + len(history)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in history[: n_units - k]:
        parent[m.a] = m.new
        parent[m.b] = m.new
    return canonical_labels([find(i) for i in range(n_units)])


def cluster_units(model: SomModel, k: int, weights=None, linkage: str = "ward") -> SuperClustering:
    """Group map units into ``k`` contiguous super-classes.

    ``weights`` are per-unit masses for Ward (typically class sizes);
    the default weighs every unit, empty or not, as 1.
    """
    topo = model.topology
    if not 1 <= k <= topo.n_units:
        raise DataValidationError(f"k={k} outside 1..{topo.n_units}")
    history = agglomerate(model.codevectors, topo, weights, linkage, constrained=True)
    return SuperClustering(topo, cut(history, topo.n_units, k), tuple(history), k, linkage,
                           metadata={"linkage": linkage,
                                     "weights": "unit" if weights is None else "class size",
                                     "adjacency": "chebyshev-1"})


def audit_contiguity(clustering: SuperClustering) -> dict:
    """Re-check map connectivity of every cluster formed along the history."""
    n = clustering.topology.n_units
    members = {i: [i] for i in range(n)}
    failures = []
    for step, m in enumerate(clustering.merge_history):
        members[m.new] = members.pop(m.a) + members.pop(m.b)
        if not is_connected(clustering.topology, members[m.new]):
            failures.append(step)
    final_ok = all(is_connected(clustering.topology, clustering.members(s))
                   for s in range(int(clustering.unit_to_super.max()) + 1))
    return {"merges_checked": len(clustering.merge_history), "failed_merges": failures,
            "final_partition_contiguous": final_ok,
            "ok": not failures and final_ok}


def regroup(clustering: SuperClustering, groups, labels=None) -> SuperClustering:
    """Merge super-classes into coarser groups, e.g. ``[[0], [1, 2], [3, 4]]``.

    Every group must stay map-contiguous. Ids of the result are canonical;
    ``labels`` (one per input group) follow their group.
    """
    groups = [sorted(int(s) for s in g) for g in groups]
    existing = sorted(set(clustering.unit_to_super.tolist()))
    flat = sorted(s for g in groups for s in g)
    if flat != existing or any(not g for g in groups):
        raise DataValidationError(f"groups {groups} do not partition super-classes {existing}")
    if labels is not None and len(labels) != len(groups):
        raise DataValidationError("one label per group is required")
    lookup = {s: gi for gi, g in enumerate(groups) for s in g}
    raw = np.array([lookup[s] for s in clustering.unit_to_super.tolist()])
    for gi, g in enumerate(groups):
        if not is_connected(clustering.topology, np.flatnonzero(raw == gi)):
            raise DataValidationError(f"group {g} is not contiguous on the map")
    new = canonical_labels(raw)
    order = {}
    for r, c in zip(raw.tolist(), new.tolist()):
        order.setdefault(c, r)
    new_labels = ()
    if labels is not None:
        new_labels = tuple(labels[order[c]] for c in range(len(groups)))
    return SuperClustering(clustering.topology, new, clustering.merge_history, len(groups),
                           clustering.linkage, new_labels,
                           dict(clustering.metadata, regrouped_from=groups))
