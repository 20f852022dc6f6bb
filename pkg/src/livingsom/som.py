"""Kohonen self-organizing maps: topologies, online training, diagnostics."""
from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from numba import njit

from .errors import DataValidationError
from .rng import substream


@dataclass(frozen=True)
class MapTopology:
    """A string (1-D chain) or a rectangular grid of units.

    Grid units are numbered row-major; ``dims`` is ``(length,)`` for a string
    and ``(rows, cols)`` for a grid. Grid adjacency is Chebyshev (8 neighbours).
    """

    kind: str
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.kind == "string" and len(self.dims) != 1:
            raise DataValidationError("string topology takes one dimension")
        if self.kind == "grid" and len(self.dims) != 2:
            raise DataValidationError("grid topology takes (rows, cols)")
        if self.kind not in ("string", "grid"):
            raise DataValidationError(f"unknown topology kind {self.kind!r}")
        if min(self.dims) < 1:
            raise DataValidationError("topology dimensions must be >= 1")

    @classmethod
    def string(cls, length: int) -> "MapTopology":
        return cls("string", (length,))

    @classmethod
    def grid(cls, rows: int, cols: int) -> "MapTopology":
        return cls("grid", (rows, cols))

    @classmethod
    def parse(cls, text: str) -> "MapTopology":
        """``string-10`` or ``grid-8x8``."""
        m = re.fullmatch(r"string-(\d+)", text.strip())
        if m:
            return cls.string(int(m.group(1)))
        m = re.fullmatch(r"grid-(\d+)x(\d+)", text.strip())
        if m:
            return cls.grid(int(m.group(1)), int(m.group(2)))
        raise DataValidationError(f"cannot parse topology {text!r}")

    def __str__(self):
        if self.kind == "string":
            return f"string-{self.dims[0]}"
        return f"grid-{self.dims[0]}x{self.dims[1]}"

    @property
    def n_units(self) -> int:
        return math.prod(self.dims)

    def position(self, i: int) -> tuple[int, int]:
        if self.kind == "string":
            return 0, i
        return divmod(i, self.dims[1])

    def positions(self) -> np.ndarray:
        idx = np.arange(self.n_units)
        if self.kind == "string":
            return np.stack([np.zeros_like(idx), idx], axis=1)
        return np.stack([idx // self.dims[1], idx % self.dims[1]], axis=1)

    def distance_matrix(self) -> np.ndarray:
        pos = self.positions()
        return np.abs(pos[:, None, :] - pos[None, :, :]).max(axis=2)

    def neighbor_pairs(self) -> list[tuple[int, int]]:
        d = self.distance_matrix()
        i, j = np.nonzero(np.triu(d == 1))
        return list(zip(i.tolist(), j.tolist()))


def map_distance(topology: MapTopology, i: int, j: int) -> int:
    u = topology.n_units
    for k in (i, j):
        if not 0 <= k < u:
            raise IndexError(f"unit {k} outside 0..{u - 1}")
    (ri, ci), (rj, cj) = topology.position(i), topology.position(j)
    return max(abs(ri - rj), abs(ci - cj))


@dataclass(frozen=True)
class SomConfig:
    """Online training schedule.

    ``iterations=None`` means 100 steps per training row, ``radius_start=None``
    means ``ceil(max(dims) / 2)``. Rate and radius decay linearly.
    """

    iterations: int | None = None
    rate_start: float = 0.5
    rate_end: float = 0.01
    radius_start: int | None = None
    radius_end: int = 0
    init: str = "sample"
    seed: int = 0

    def __post_init__(self):
        if self.iterations is not None and self.iterations < 1:
            raise DataValidationError("iterations must be >= 1")
        if not 0.0 <= self.rate_end <= self.rate_start <= 1.0:
            raise DataValidationError("need 0 <= rate_end <= rate_start <= 1")
        if self.radius_end < 0 or (self.radius_start is not None and self.radius_start < self.radius_end):
            raise DataValidationError("need radius_start >= radius_end >= 0")
        if self.init not in ("sample", "uniform-box"):
            raise DataValidationError(f"unknown init {self.init!r}")
        if self.seed < 0:
            raise DataValidationError("seed must be non-negative")

    def resolved(self, topology: MapTopology, n_rows: int) -> "SomConfig":
        return replace(
            self,
            iterations=self.iterations if self.iterations is not None else 100 * max(n_rows, 1),
            radius_start=self.radius_start if self.radius_start is not None
            else math.ceil(max(topology.dims) / 2),
        )


@dataclass(frozen=True, eq=False)
class SomModel:
    topology: MapTopology
    codevectors: np.ndarray
    config: SomConfig
    trained: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.codevectors.shape[1]

    def to_dict(self) -> dict:
        return {
            "topology": {"kind": self.topology.kind, "dims": list(self.topology.dims)},
            "config": asdict(self.config),
            "seed": self.config.seed,
            "trained": self.trained,
            "provenance": self.provenance,
            # float repr round-trips exactly through json
            "codevectors": self.codevectors.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SomModel":
        topo = MapTopology(doc["topology"]["kind"], tuple(doc["topology"]["dims"]))
        return cls(topo, np.array(doc["codevectors"], dtype=float), SomConfig(**doc["config"]),
                   bool(doc["trained"]), dict(doc.get("provenance", {})))

    def to_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "SomModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _as_data(data, dim=None) -> np.ndarray:
    x = np.ascontiguousarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1) if dim is None or x.size == dim else x.reshape(-1, dim)
    if x.ndim != 2:
        raise DataValidationError("data must be a 2-D array")
    if dim is not None and x.shape[0] and x.shape[1] != dim:
        raise DataValidationError(f"dimension mismatch: data has {x.shape[1]}, map has {dim}")
    if not np.all(np.isfinite(x)):
        raise DataValidationError("data contains non-finite values")
    return x


def init_som(topology: MapTopology, dim: int, data=None, config: SomConfig = SomConfig()) -> SomModel:
    rng = substream(config.seed, "init")
    u = topology.n_units
    if data is None:
        if config.init == "sample":
            raise DataValidationError("sample init needs data")
        cv = rng.random((u, dim))
    else:
        x = _as_data(data, dim)
        if config.init == "sample":
            if x.shape[0] < u:
                raise DataValidationError(f"sample init needs >= {u} rows, got {x.shape[0]}")
            cv = x[rng.choice(x.shape[0], size=u, replace=False)].copy()
        else:
            lo, hi = x.min(axis=0), x.max(axis=0)
            cv = lo + rng.random((u, dim)) * (hi - lo)
    return SomModel(topology, cv, config, False, {"init": config.init})


@njit(cache=True)
def _nearest(cv, x):
    best = 0
    best_d = np.inf
    for u in range(cv.shape[0]):
        d = 0.0
        for k in range(cv.shape[1]):
            t = x[k] - cv[u, k]
            d += t * t
        if d < best_d:
            best_d = d
            best = u
    return best, best_d


@njit(cache=True)
def _two_nearest(cv, x):
    b1 = -1
    b2 = -1
    d1 = np.inf
    d2 = np.inf
    for u in range(cv.shape[0]):
        d = 0.0
        for k in range(cv.shape[1]):
            t = x[k] - cv[u, k]
            d += t * t
        if d < d1:
            b2, d2 = b1, d1
            b1, d1 = u, d
        elif d < d2:
            b2, d2 = u, d
    return b1, d1, b2


@njit(cache=True)
def _assign_rows(cv, x):
    n = x.shape[0]
    units = np.empty(n, dtype=np.int64)
    dists = np.empty(n)
    for i in range(n):
        units[i], dists[i] = _nearest(cv, x[i])
    return units, dists


@njit(cache=True)
def _train(cv, x, order, rates, radii, grid_dist):
    for t in range(order.shape[0]):
        xi = x[order[t]]
        c, _ = _nearest(cv, xi)
        eps = rates[t]
        r = radii[t]
        for u in range(cv.shape[0]):
            if grid_dist[c, u] <= r:
                for k in range(cv.shape[1]):
                    cv[u, k] += eps * (xi[k] - cv[u, k])


def schedules(config: SomConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-step learning rate and integer neighbourhood radius."""
    t_max = config.iterations
    frac = np.arange(t_max) / (t_max - 1) if t_max > 1 else np.zeros(1)
    rates = config.rate_start + (config.rate_end - config.rate_start) * frac
    radii = config.radius_start + (config.radius_end - config.radius_start) * frac
    # half-up rounding; np.round would round half to even
    return rates, np.floor(radii + 0.5).astype(np.int64)


def train_online(model: SomModel, data, config: SomConfig | None = None) -> SomModel:
    """Stochastic Kohonen training with a 0/1 neighbourhood of shrinking radius.

    Rows are drawn with replacement from the ``order`` substream of
    ``config.seed``; every unit within map distance ``r(t)`` of the winner
    moves a fraction ``rate(t)`` towards the drawn row.
    """
    x = _as_data(data, model.dim)
    if x.shape[0] == 0:
        raise DataValidationError("training data is empty")
    config = (config or model.config).resolved(model.topology, x.shape[0])
    rates, radii = schedules(config)
    order = substream(config.seed, "order").integers(0, x.shape[0], size=config.iterations)
    cv = np.array(model.codevectors, dtype=np.float64, copy=True)
    _train(cv, x, order, rates, radii, model.topology.distance_matrix().astype(np.int64))
    prov = dict(model.provenance, n_train=int(x.shape[0]), iterations=int(config.iterations),
                radius_start=int(config.radius_start), neighbourhood="step",
                sampling="with replacement")
    return SomModel(model.topology, cv, config, True, prov)


def train_step(model: SomModel, x, rate: float, radius: int) -> SomModel:
    """A single update towards ``x``; used to probe final-phase stability."""
    xi = _as_data(x, model.dim)
    cv = np.array(model.codevectors, copy=True)
    _train(cv, xi, np.zeros(1, dtype=np.int64), np.array([rate], dtype=float),
           np.array([radius], dtype=np.int64), model.topology.distance_matrix().astype(np.int64))
    return replace(model, codevectors=cv)


def fit_som(data, topology: MapTopology, config: SomConfig = SomConfig()) -> SomModel:
    x = _as_data(data)
    return train_online(init_som(topology, x.shape[1], x, config), x, config)


def bmu(model: SomModel, x) -> int:
    """Index of the closest code vector (squared Euclidean; lowest index on ties)."""
    xi = np.asarray(x, dtype=np.float64)
    if xi.shape != (model.dim,):
        raise DataValidationError(f"expected a vector of length {model.dim}")
    if not np.all(np.isfinite(xi)):
        raise DataValidationError("input contains non-finite values")
    return int(_nearest(np.ascontiguousarray(model.codevectors), np.ascontiguousarray(xi))[0])


def assign(model: SomModel, data) -> np.ndarray:
    x = _as_data(data, model.dim)
    if x.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return _assign_rows(np.ascontiguousarray(model.codevectors), x)[0]


def class_sizes(model: SomModel, assignment) -> np.ndarray:
    return np.bincount(np.asarray(assignment, dtype=np.int64), minlength=model.topology.n_units)


def quality(model: SomModel, data) -> dict:
    """Quantization error (mean squared distance to the BMU) and topographic
    error (share of rows whose two best units are not map neighbours)."""
    x = _as_data(data, model.dim)
    if x.shape[0] == 0:
        raise DataValidationError("quality needs data")
    cv = np.ascontiguousarray(model.codevectors)
    units, d = _assign_rows(cv, x)
    qe = float(np.mean(d))
    if model.topology.n_units < 2:
        return {"quantization_error": qe, "topographic_error": 0.0}
    dist = model.topology.distance_matrix()
    bad = 0
    for i in range(x.shape[0]):
        b1, _, b2 = _two_nearest(cv, x[i])
        bad += int(dist[b1, b2] > 1)
    return {"quantization_error": qe, "topographic_error": bad / x.shape[0]}


def unit_distances(model: SomModel) -> list[tuple[int, int, float]]:
    cv = model.codevectors
    return [(i, j, float(np.sqrt(np.sum((cv[i] - cv[j]) ** 2))))
            for i, j in model.topology.neighbor_pairs()]


def umatrix(model: SomModel) -> np.ndarray:
    """Mean distance from each unit to its map neighbours, shaped like the map."""
    total = np.zeros(model.topology.n_units)
    count = np.zeros(model.topology.n_units)
    for i, j, d in unit_distances(model):
        total[[i, j]] += d
        count[[i, j]] += 1
    out = np.divide(total, count, out=np.zeros_like(total), where=count > 0)
    if model.topology.kind == "grid":
        return out.reshape(model.topology.dims)
    return out.reshape(1, -1)
