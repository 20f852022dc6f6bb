"""End-to-end analyses writing deterministic artifact directories."""
from __future__ import annotations

import contextlib
import json
import math
import os
import shutil
import tempfile
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import pandas as pd

from . import __version__
from . import reference as ref
from .codebook import Codebook
from .conventions import CONVENTIONS
from .errors import DataValidationError
from .korresp import classify_modalities, polarity_baseline
from .mca import coordinates, fit_mca
from .profiling import (ZSCORE_DOMAIN_ORDER, DOMAIN_NAMES, class_columns, flags_frame,
                        overrepresentation, poverty_flags, profile_table, profile_variables,
                        standardized_partial_means)
from .rng import derive_seed
from .scores import (calibrate_threshold, distribution, distribution_from_weights,
                     score_matrix)
from .som import (MapTopology, SomConfig, SomModel, assign, class_sizes, fit_som, quality,
                  umatrix, unit_distances)
from .superclass import audit_contiguity, cluster_units, cut, regroup
from .survey_data import Dataset, burt_table, disjunctive_code, load_dataset

SOM_KEYS = ("iterations", "rate_start", "rate_end", "radius_start", "radius_end", "init")


@dataclass
class PipelineConfig:
    data: str | None = None
    codebook: str | None = None
    out: str = "out"
    seed: int = 0
    modality_topologies: list = field(default_factory=lambda: ["string-10", "grid-10x10"])
    household_topology: str = "grid-8x8"
    score_topology: str = "string-5"
    som: dict = field(default_factory=dict)
    axes: int | float | None = None
    k: int = 5
    groups: list | None = None
    group_labels: list = field(default_factory=lambda: ["A", "B", "C", "D", "E", "F"])
    linkage: str = "ward"
    weighted: bool = False
    poverty_rate: str | float = "computed"
    score_table: str | None = None
    shuffles: int = 1000

    def __post_init__(self):
        unknown = set(self.som) - set(SOM_KEYS)
        if unknown:
            raise DataValidationError(f"unknown som keys: {sorted(unknown)}")
        if self.poverty_rate != "computed":
            try:
                self.poverty_rate = float(self.poverty_rate)
            except (TypeError, ValueError):
                raise DataValidationError("poverty_rate must be 'computed' or a number") from None
        if int(self.seed) != self.seed or self.seed < 0:
            raise DataValidationError("seed must be a non-negative integer")

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise DataValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def from_json(cls, path) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataValidationError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)

    def som_config(self, analysis: str) -> SomConfig:
        return SomConfig(**self.som, seed=derive_seed(self.seed, analysis))


# -- artifact plumbing ------------------------------------------------------

def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def write_csv(path, frame: pd.DataFrame, index=False) -> None:
    frame.to_csv(path, index=index, lineterminator="\n")


@contextlib.contextmanager
def artifact_dir(out: str | Path, name: str):
    """Yield a scratch directory that replaces ``out/name`` only on success."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{name}.tmp-", dir=out))
    try:
        yield tmp
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    final = out / name
    if final.exists():
        shutil.rmtree(final)
    os.replace(tmp, final)


def metadata(config: PipelineConfig, command: str, **results) -> dict:
    return {"command": command, "version": __version__, "seed": config.seed,
            "config": asdict(config), "conventions": CONVENTIONS, "results": results}


def update_root_metadata(config: PipelineConfig) -> None:
    out = Path(config.out)
    present = sorted(p.name for p in out.iterdir() if p.is_dir() and not p.name.startswith("."))
    tmp = out / ".metadata.json.tmp"
    write_json(tmp, {"version": __version__, "seed": config.seed, "config": asdict(config),
                     "conventions": CONVENTIONS, "artifacts": present})
    os.replace(tmp, out / "metadata.json")


# -- inputs -----------------------------------------------------------------

def load(config: PipelineConfig) -> Dataset:
    if not config.data:
        raise DataValidationError("no data file configured")
    ds = load_dataset(config.data, config.codebook)
    if ds.n == 0:
        raise DataValidationError(f"{config.data}: no records")
    return ds


def _frame_coords(coords, first_col, first_vals):
    frame = pd.DataFrame(coords, columns=[f"axis{k + 1}" for k in range(coords.shape[1])])
    frame.insert(0, first_col, list(first_vals))
    return frame


def _map_frames(model: SomModel) -> dict[str, pd.DataFrame]:
    topo = model.topology
    pos = topo.positions()
    dist = pd.DataFrame(unit_distances(model), columns=["unit_a", "unit_b", "distance"])
    um = umatrix(model).ravel()
    umf = pd.DataFrame({"unit": np.arange(topo.n_units), "row": pos[:, 0], "col": pos[:, 1],
                        "mean_neighbour_distance": um})
    return {"unit_distances.csv": dist, "umatrix.csv": umf}


# -- commands ---------------------------------------------------------------

def cmd_validate(config: PipelineConfig) -> dict:
    ds = load(config)
    cb = ds.codebook
    freq = ds.responses.mean(axis=0) * 100.0
    rows = []
    for j, it in enumerate(cb.items):
        refv = ref.ITEM_NEGATIVE_PERCENT.get(it.code)
        rows.append({"modality": f"{it.code}0", "percent": 100.0 - freq[j],
                     "reference": None if refv is None else 100.0 - refv})
        rows.append({"modality": f"{it.code}1", "percent": freq[j], "reference": refv})
    return {"records": ds.n, "dropped": ds.dropped, "items": cb.n_items,
            "modalities": rows, "descriptors": [] if ds.descriptors is None
            else list(ds.descriptors.columns)}


def cmd_mca(config: PipelineConfig) -> Path:
    ds = load(config)
    z = disjunctive_code(ds)
    model = fit_mca(z)
    with artifact_dir(config.out, "mca") as d:
        _write_mca(d, model, ds)
        write_json(d / "metadata.json", metadata(
            config, "mca", n=ds.n, n_axes=model.n_axes, total_inertia=model.total_inertia,
            mca=model.metadata))
    update_root_metadata(config)
    return Path(config.out) / "mca"


def _write_mca(d: Path, model, ds: Dataset) -> None:
    shares = model.inertia_shares
    write_csv(d / "eigenvalues.csv", pd.DataFrame({
        "axis": np.arange(1, model.n_axes + 1), "eigenvalue": model.eigenvalues,
        "share": shares, "cumulative_share": np.cumsum(shares)}))
    write_csv(d / "modality_coords.csv", _frame_coords(model.modality_coords, "modality", model.labels))
    write_csv(d / "observation_coords.csv", _frame_coords(model.observation_coords, "id", ds.ids))


def cmd_map_modalities(config: PipelineConfig) -> Path:
    ds = load(config)
    cb = ds.codebook
    z = disjunctive_code(ds)
    burt = burt_table(z)
    mca_model = fit_mca(z)
    results = {}
    with artifact_dir(config.out, "modalities") as d:
        write_csv(d / "burt.csv", pd.DataFrame(burt.counts, index=burt.labels, columns=burt.labels),
                  index=True)
        write_csv(d / "mca_modality_coords.csv",
                  _frame_coords(mca_model.modality_coords, "modality", mca_model.labels))
        for spec in config.modality_topologies:
            topo = MapTopology.parse(spec)
            mmap = classify_modalities(burt, topo, config.som_config(f"modalities/{topo}"))
            sub = d / str(topo)
            sub.mkdir()
            pos = topo.positions()
            labels = mmap.unit_labels()
            write_csv(sub / "layout.csv", pd.DataFrame({
                "unit": np.arange(topo.n_units), "row": pos[:, 0], "col": pos[:, 1],
                "n_modalities": [len(x) for x in labels],
                "modalities": [" ".join(x) for x in labels]}))
            pol = cb.modality_polarity()
            write_csv(sub / "assignment.csv", pd.DataFrame({
                "modality": mmap.labels, "unit": mmap.assignment,
                "polarity": np.where(pol == 1, "negative", "neutral")}))
            cv = pd.DataFrame(mmap.model.codevectors, columns=list(burt.labels))
            cv.insert(0, "unit", np.arange(topo.n_units))
            write_csv(sub / "codevectors.csv", cv)
            for name, frame in _map_frames(mmap.model).items():
                write_csv(sub / name, frame)
            mmap.model.to_json(sub / "model.json")
            sep = polarity_baseline(mmap, cb, config.shuffles, derive_seed(config.seed, f"shuffle/{topo}"))
            sep["n_shuffles"] = config.shuffles
            write_json(sub / "separation.json", sep)
            q = quality(mmap.model, mmap.profiles)
            results[str(topo)] = {"separation": sep, "quality": q,
                                  "occupied_units": int(sum(1 for x in labels if x))}
        write_json(d / "metadata.json", metadata(config, "map-modalities", n=ds.n, maps=results))
    update_root_metadata(config)
    return Path(config.out) / "modalities"


def _order_by_score(labels, totals, k) -> np.ndarray:
    """Rank of each label 0..k-1 by increasing mean total score (empty last)."""
    means = [totals[labels == c].mean() if (labels == c).any() else math.inf for c in range(k)]
    order = sorted(range(k), key=lambda c: (means[c], c))
    rank = np.empty(k, dtype=np.int64)
    rank[order] = np.arange(k)
    return rank


def _display_order(config: PipelineConfig, sc, hh_sc, totals) -> tuple[np.ndarray, list, str]:
    """Display numbers of super-classes and their A/B/C groups.

    Returns ``rank`` (canonical id -> 0-based display number) and the groups
    in display numbering. Explicit config groups refer to super-classes
    numbered by increasing mean total score. By default the groups are the
    3-cluster cut of the same merge history, and super-classes are numbered
    group by group (groups, then members, by increasing mean score) so that
    merged columns sit next to their members.
    """
    rank = _order_by_score(hh_sc, totals, config.k)
    if config.groups is not None:
        return rank, [[int(s) - 1 for s in g] for g in config.groups], "config"
    n_groups = min(3, config.k)
    coarse = cut(sc.merge_history, sc.topology.n_units, n_groups)
    sc_group = np.empty(config.k, dtype=np.int64)
    sc_group[sc.unit_to_super] = coarse
    g_rank = _order_by_score(sc_group[hh_sc], totals, n_groups)
    order = sorted(range(config.k), key=lambda s: (g_rank[sc_group[s]], rank[s]))
    rank = np.empty(config.k, dtype=np.int64)
    rank[order] = np.arange(config.k)
    groups = [sorted(int(rank[s]) for s in range(config.k) if sc_group[s] == g)
              for g in range(n_groups)]
    return rank, groups, "history cut"


def cmd_map_households(config: PipelineConfig) -> Path:
    ds = load(config)
    totals, _ = score_matrix(ds.responses, ds.codebook)
    z = disjunctive_code(ds)
    mca_model = fit_mca(z)
    x = coordinates(mca_model, "observations", config.axes)
    topo = MapTopology.parse(config.household_topology)
    som_cfg = config.som_config("households")
    model = fit_som(x, topo, som_cfg)
    units = assign(model, x)
    sizes = class_sizes(model, units)
    sc = cluster_units(model, config.k, sizes if config.weighted else None, config.linkage)
    audit = audit_contiguity(sc)
    if not audit["ok"]:
        raise DataValidationError(f"contiguity audit failed: {audit}")

    hh_sc = sc.unit_to_super[units]
    rank, groups, groups_source = _display_order(config, sc, hh_sc, totals)
    inv = np.argsort(rank)
    display = rank[sc.unit_to_super]                          # per unit, 0-based display number
    # group ids in the display numbering -> canonical super-class ids
    grouped = regroup(sc, [[int(inv[s]) for s in g] for g in groups])
    hh_group = grouped.unit_to_super[units]
    g_rank = _order_by_score(hh_group, totals, len(groups))
    g_label = [config.group_labels[g_rank[g]] for g in range(len(groups))]

    # profile columns: super-classes grouped, then merged groups, then All
    hh_disp = display[units]
    columns = []
    for g in np.argsort(g_rank):
        members = sorted(set(display[grouped.unit_to_super == g].tolist()))
        for s in members:
            columns.append((str(s + 1), hh_disp == s))
        if len(members) > 1:
            columns.append(("+".join(str(s + 1) for s in members), np.isin(hh_disp, members)))
    profile = profile_table(profile_variables(ds), columns)
    flags = overrepresentation(profile)
    q = quality(model, x)

    with artifact_dir(config.out, "households") as d:
        model.to_json(d / "model.json")
        cv = pd.DataFrame(model.codevectors, columns=[f"axis{k + 1}" for k in range(x.shape[1])])
        cv.insert(0, "unit", np.arange(topo.n_units))
        write_csv(d / "codevectors.csv", cv)
        for name, frame in _map_frames(model).items():
            write_csv(d / name, frame)
        write_csv(d / "assignments.csv", pd.DataFrame({
            "id": list(ds.ids), "unit": units, "superclass": hh_disp + 1,
            "group": [g_label[g] for g in hh_group]}))
        pos = topo.positions()
        write_csv(d / "superclasses.csv", pd.DataFrame({
            "unit": np.arange(topo.n_units), "row": pos[:, 0], "col": pos[:, 1],
            "size": sizes, "superclass": display + 1,
            "group": [g_label[g] for g in grouped.unit_to_super]}))
        write_json(d / "merge_history.json", [
            {"a": m.a, "b": m.b, "cost": m.cost, "new": m.new, "size": m.size}
            for m in sc.merge_history])
        write_json(d / "contiguity_audit.json", audit)
        profile.to_csv(d / "profile.csv")
        write_csv(d / "flags.csv", flags_frame(flags))
        write_json(d / "metadata.json", metadata(
            config, "map-households", n=ds.n, mca_axes=int(x.shape[1]),
            mca_total_inertia=mca_model.total_inertia, topology=str(topo),
            som=asdict(model.config), quality=q, n_classes=topo.n_units,
            empty_classes=int((sizes == 0).sum()), k=config.k,
            groups_source=groups_source,
            groups={g_label[g]: [s + 1 for s in sorted(set(display[grouped.unit_to_super == g].tolist()))]
                    for g in range(len(groups))},
            superclass_sizes={str(s + 1): int((hh_disp == s).sum()) for s in range(config.k)},
            superclustering=sc.metadata))
    update_root_metadata(config)
    return Path(config.out) / "households"


def poverty_rate(config: PipelineConfig, ds: Dataset | None) -> tuple[float, str]:
    if config.poverty_rate != "computed":
        return float(config.poverty_rate), "fixed"
    if ds is None or not (ds.has("REV") and ds.has("NBTOT")):
        raise DataValidationError("poverty_rate 'computed' needs REV and NBTOT columns")
    return 100.0 * poverty_flags(ds)[1], "computed"


def cmd_map_scores(config: PipelineConfig) -> Path:
    ds = load(config)
    cb = ds.codebook
    totals, partial = score_matrix(ds.responses, cb)
    x = partial.astype(float)
    topo = MapTopology.parse(config.score_topology)
    model = fit_som(x, topo, config.som_config("scores"))
    if topo.kind == "string" and model.codevectors[0].sum() > model.codevectors[-1].sum():
        model = replace(model, codevectors=model.codevectors[::-1].copy())
    units = assign(model, x)
    rate, rate_source = poverty_rate(config, ds)
    dist = distribution(ds)
    thr = calibrate_threshold(dist, rate)
    bad = totals >= thr
    columns = [("basic 0", ~bad), ("basic 1", bad)]
    columns += class_columns(units, topo.n_units)
    profile = profile_table(profile_variables(ds), columns)
    flags = overrepresentation(profile)
    z, undefined = standardized_partial_means(units, partial, topo.n_units, cb.domains)
    zrows = [{"class": c + 1, "domain": DOMAIN_NAMES.get(dom, dom), "z": z[c, j],
              "undefined": bool(undefined[j])}
             for c in range(topo.n_units) for j, dom in enumerate(ZSCORE_DOMAIN_ORDER)]
    with artifact_dir(config.out, "scores") as d:
        model.to_json(d / "model.json")
        cv = pd.DataFrame(model.codevectors, columns=[DOMAIN_NAMES.get(x_, x_) for x_ in cb.domains])
        cv.insert(0, "unit", np.arange(topo.n_units))
        write_csv(d / "codevectors.csv", cv)
        for name, frame in _map_frames(model).items():
            write_csv(d / name, frame)
        write_csv(d / "assignments.csv", pd.DataFrame({
            "id": list(ds.ids), "class": units + 1, "total": totals, "basic": bad.astype(int)}))
        profile.to_csv(d / "profile.csv")
        write_csv(d / "flags.csv", flags_frame(flags))
        write_csv(d / "zscores.csv", pd.DataFrame(zrows))
        write_json(d / "metadata.json", metadata(
            config, "map-scores", n=ds.n, topology=str(topo), som=asdict(model.config),
            quality=quality(model, x), poverty_rate=rate, poverty_rate_source=rate_source,
            threshold=thr, matched_cumulative=dist.descending_at(thr),
            class_shares={str(c + 1): 100.0 * float((units == c).mean()) for c in range(topo.n_units)}))
    update_root_metadata(config)
    return Path(config.out) / "scores"


def read_score_table(path, max_score: int = 26) -> np.ndarray:
    """Weights per score 0..max_score from a CSV with ``score`` and
    ``percent`` columns; scores absent from the table get zero mass."""
    if path == "reference":
        w = np.zeros(max_score + 1)
        for s, p in ref.SCORE_PERCENT.items():
            w[s] = p
        return w
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as exc:
        raise DataValidationError(f"cannot read score table {path}: {exc}") from exc
    if not {"score", "percent"} <= set(frame.columns):
        raise DataValidationError("score table needs 'score' and 'percent' columns")
    scores = frame["score"].to_numpy()
    if (scores < 0).any() or (scores > max_score).any() or len(set(scores.tolist())) != len(scores):
        raise DataValidationError(f"scores must be distinct and lie in 0..{max_score}")
    w = np.zeros(max_score + 1)
    w[scores.astype(int)] = frame["percent"].to_numpy(dtype=float)
    return w


def cmd_threshold(config: PipelineConfig) -> Path:
    ds = None
    if config.score_table is not None:
        n_items = Codebook.from_json(config.codebook).n_items if config.codebook else Codebook.default().n_items
        dist = distribution_from_weights(read_score_table(config.score_table, n_items))
        source = str(config.score_table)
        if config.poverty_rate == "computed" and config.data:
            ds = load(config)
    else:
        ds = load(config)
        dist = distribution(ds)
        source = "data"
    rate, rate_source = poverty_rate(config, ds)
    thr = calibrate_threshold(dist, rate)
    matched = dist.descending_at(thr)
    with artifact_dir(config.out, "threshold") as d:
        write_csv(d / "distribution.csv", dist.to_frame())
        result = {"target_rate": rate, "target_source": rate_source, "threshold": thr,
                  "matched_cumulative": matched, "distribution_source": source}
        write_json(d / "threshold.json", result)
        write_json(d / "metadata.json", metadata(config, "threshold", **result))
    update_root_metadata(config)
    return Path(config.out) / "threshold"
