"""Household records, CSV ingestion and disjunctive coding."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .codebook import Codebook
from .errors import DataValidationError

log = logging.getLogger(__name__)

ID_COLUMN = "ID"
CATEGORICAL_DESCRIPTORS = {
    "LOGT": range(1, 6),
    "TUR": range(0, 5),
    "TYM": range(0, 5),
    "SLS": range(1, 6),
}
COUNT_DESCRIPTORS = ("NBTOT", "NB17")
REAL_DESCRIPTORS = ("AGEM", "REV")
DESCRIPTOR_COLUMNS = ("LOGT", "TUR", "TYM", "NBTOT", "NB17", "AGEM", "SLS", "REV")
MISSING_TOKENS = frozenset({"", "NA", "NaN", "nan", "."})


@dataclass(frozen=True)
class DescriptorBundle:
    household_type: int | None = None
    dwelling_type: int | None = None
    location: int | None = None
    n_persons: int | None = None
    n_children_under17: int | None = None
    mean_adult_age: float | None = None
    monthly_income: float | None = None
    subjective_lc: int | None = None


@dataclass(frozen=True)
class HouseholdRecord:
    id: str
    responses: np.ndarray
    descriptors: DescriptorBundle | None = None


@dataclass(frozen=True, eq=False)
class Dataset:
    """Validated household responses plus optional descriptors.

    ``responses`` is an ``n x Q`` int8 array in codebook item order, 1 for the
    negative modality. ``descriptors`` is a DataFrame aligned with the rows
    (columns drawn from ``DESCRIPTOR_COLUMNS``) or ``None``.
    """

    codebook: Codebook
    ids: tuple[str, ...]
    responses: np.ndarray
    descriptors: pd.DataFrame | None = None
    dropped: int = 0

    def __post_init__(self):
        r = np.ascontiguousarray(self.responses, dtype=np.int8).reshape(-1, self.codebook.n_items)
        r.setflags(write=False)
        object.__setattr__(self, "responses", r)
        if len(self.ids) != r.shape[0]:
            raise DataValidationError("ids and responses have different lengths")
        if r.size and not np.isin(r, (0, 1)).all():
            raise DataValidationError("responses must be 0/1")
        if self.descriptors is not None and len(self.descriptors) != r.shape[0]:
            raise DataValidationError("descriptors and responses have different lengths")

    def __len__(self):
        return self.responses.shape[0]

    @property
    def n(self) -> int:
        return self.responses.shape[0]

    def has(self, column: str) -> bool:
        return self.descriptors is not None and column in self.descriptors.columns

    def record(self, i: int) -> HouseholdRecord:
        bundle = None
        if self.descriptors is not None:
            row = self.descriptors.iloc[i]

            def get(col, cast):
                return cast(row[col]) if col in row.index else None

            bundle = DescriptorBundle(
                household_type=get("TYM", int), dwelling_type=get("LOGT", int),
                location=get("TUR", int), n_persons=get("NBTOT", int),
                n_children_under17=get("NB17", int), mean_adult_age=get("AGEM", float),
                monthly_income=get("REV", float), subjective_lc=get("SLS", int))
        return HouseholdRecord(self.ids[i], self.responses[i], bundle)

    def records(self):
        for i in range(self.n):
            yield self.record(i)

    def equals(self, other: "Dataset") -> bool:
        if self.ids != other.ids or self.dropped != other.dropped:
            return False
        if not np.array_equal(self.responses, other.responses):
            return False
        if (self.descriptors is None) != (other.descriptors is None):
            return False
        return self.descriptors is None or self.descriptors.equals(other.descriptors)

    def to_csv(self, path: str | Path) -> None:
        frame = pd.DataFrame(self.responses, columns=self.codebook.codes)
        frame.insert(0, ID_COLUMN, list(self.ids))
        if self.descriptors is not None:
            for col in self.descriptors.columns:
                frame[col] = self.descriptors[col].to_numpy()
        frame.to_csv(path, index=False, lineterminator="\n")


def _validate_descriptors(frame: pd.DataFrame, row_ids: list[str]) -> pd.DataFrame:
    out = {}
    for col in frame.columns:
        values = pd.to_numeric(frame[col], errors="coerce")
        bad = values.isna()
        if bad.any():
            rid = row_ids[int(np.flatnonzero(bad.to_numpy())[0])]
            raise DataValidationError(f"column {col}: non-numeric value for household {rid}")
        arr = values.to_numpy()
        if col in CATEGORICAL_DESCRIPTORS or col in COUNT_DESCRIPTORS:
            if not np.all(arr == np.round(arr)):
                raise DataValidationError(f"column {col}: values must be integers")
            arr = arr.astype(np.int64)
        if col in CATEGORICAL_DESCRIPTORS:
            levels = CATEGORICAL_DESCRIPTORS[col]
            if not np.isin(arr, list(levels)).all():
                raise DataValidationError(
                    f"column {col}: levels must lie in {levels.start}..{levels.stop - 1}")
        elif col in COUNT_DESCRIPTORS:
            if (arr < 0).any():
                raise DataValidationError(f"column {col}: counts must be >= 0")
        out[col] = arr
    desc = pd.DataFrame(out, columns=list(frame.columns))
    if "NBTOT" in desc and "NB17" in desc and (desc["NB17"] > desc["NBTOT"]).any():
        raise DataValidationError("NB17 exceeds NBTOT for some households")
    return desc


def load_dataset(data_path: str | Path, codebook_path: str | Path | None = None) -> Dataset:
    """Read and validate a household CSV.

    Rows with a missing item response or a missing descriptor value are
    dropped and counted in ``Dataset.dropped``. Any other anomaly (unknown
    column, value other than 0/1 on an item, duplicate id) raises
    ``DataValidationError``.
    """
    codebook = Codebook.default() if codebook_path is None else Codebook.from_json(codebook_path)
    try:
        with open(data_path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataValidationError(f"cannot read {data_path}: {exc}") from exc
    rows = [r for r in rows if r]
    if not rows:
        raise DataValidationError(f"{data_path}: empty file, no records")

    header = [h.strip() for h in rows[0]]
    known = set(codebook.codes) | set(DESCRIPTOR_COLUMNS) | {ID_COLUMN}
    for col in header:
        if col not in known:
            raise DataValidationError(f"unknown column {col!r} in {data_path}")
    if len(set(header)) != len(header):
        raise DataValidationError(f"repeated column names in {data_path}")
    missing = [c for c in codebook.codes if c not in header]
    if missing:
        raise DataValidationError(f"missing item columns: {missing}")

    body = rows[1:]
    for lineno, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise DataValidationError(f"line {lineno}: expected {len(header)} fields, got {len(r)}")
    cells = np.array([[c.strip() for c in r] for r in body], dtype=object).reshape(len(body), len(header))
    col = {name: j for j, name in enumerate(header)}

    if ID_COLUMN in col:
        ids = [str(v) for v in cells[:, col[ID_COLUMN]]]
    else:
        ids = [str(i + 1) for i in range(len(body))]
    seen = set()
    for rid in ids:
        if rid in seen:
            raise DataValidationError(f"duplicate household id {rid!r}")
        seen.add(rid)

    item_cells = cells[:, [col[c] for c in codebook.codes]]
    desc_names = [c for c in DESCRIPTOR_COLUMNS if c in col]
    desc_cells = cells[:, [col[c] for c in desc_names]]

    is_missing = np.vectorize(lambda v: v in MISSING_TOKENS, otypes=[bool])
    item_missing = is_missing(item_cells) if item_cells.size else np.zeros(item_cells.shape, bool)
    desc_missing = is_missing(desc_cells) if desc_cells.size else np.zeros(desc_cells.shape, bool)
    present = ~item_missing
    bad = present & ~np.isin(item_cells, ("0", "1"))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise DataValidationError(
            f"non-binary response {item_cells[i, j]!r} for item {codebook.codes[j]} "
            f"(household {ids[i]})")

    keep = ~(item_missing.any(axis=1) | desc_missing.any(axis=1))
    dropped = int((~keep).sum())
    if dropped:
        log.info("dropped %d incomplete records from %s", dropped, data_path)

    kept_ids = [rid for rid, k in zip(ids, keep) if k]
    responses = (item_cells[keep] == "1").astype(np.int8)
    descriptors = None
    if desc_names:
        frame = pd.DataFrame(desc_cells[keep], columns=desc_names)
        descriptors = _validate_descriptors(frame, kept_ids)
    return Dataset(codebook, tuple(kept_ids), responses, descriptors, dropped)


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    """Complete disjunctive table: ``n x 2Q``, neutral column before negative."""

    z: np.ndarray
    labels: tuple[str, ...]
    n_items: int

    @property
    def n(self) -> int:
        return self.z.shape[0]


def disjunctive_code(dataset: Dataset) -> IndicatorMatrix:
    r = dataset.responses
    z = np.empty((r.shape[0], 2 * r.shape[1]), dtype=np.int8)
    z[:, 0::2] = 1 - r
    z[:, 1::2] = r
    z.setflags(write=False)
    return IndicatorMatrix(z, tuple(dataset.codebook.modality_labels()), dataset.codebook.n_items)


@dataclass(frozen=True, eq=False)
class BurtTable:
    counts: np.ndarray
    labels: tuple[str, ...]
    n_items: int
    n_obs: int = field(default=0)


def burt_table(indicator: IndicatorMatrix) -> BurtTable:
    z = indicator.z.astype(np.int64)
    b = z.T @ z
    b.setflags(write=False)
    return BurtTable(b, indicator.labels, indicator.n_items, indicator.n)
