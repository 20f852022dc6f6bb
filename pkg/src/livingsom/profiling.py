"""Class profiles against external descriptors, with v-test flags."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from . import reference as ref
from .errors import DataValidationError
from .scores import score_matrix
from .survey_data import Dataset, HouseholdRecord

ADULT_AGE = 17
V_THRESHOLD = 2.0
DOMAIN_NAMES = {"dwelling-comfort": "dwelling 1", "dwelling-problems": "dwelling 2",
                "environment": "environment", "durables": "durables",
                "deprivations": "deprivations"}
ZSCORE_DOMAIN_ORDER = ("dwelling-comfort", "dwelling-problems", "environment",
                       "deprivations", "durables")


def consumption_units(n_persons, n_children) -> np.ndarray:
    """Equivalence scale 1 / 0.5 / 0.3: first adult, other adults, children
    under 17."""
    n_persons = np.asarray(n_persons, dtype=float)
    n_children = np.asarray(n_children, dtype=float)
    adults = n_persons - n_children
    # a household made only of children: the first child counts as head
    return np.where(adults < 1,
                    1.0 + 0.3 * np.maximum(n_children - 1, 0),
                    1.0 + 0.5 * (adults - 1) + 0.3 * n_children)


def equivalized_income(record: HouseholdRecord) -> float:
    d = record.descriptors
    if d is None or d.monthly_income is None or math.isnan(d.monthly_income):
        raise DataValidationError(f"household {record.id}: missing income")
    if not d.n_persons:
        raise DataValidationError(f"household {record.id}: zero persons")
    kids = d.n_children_under17 or 0
    return float(d.monthly_income / consumption_units(d.n_persons, kids))


def equivalized_incomes(dataset: Dataset) -> np.ndarray:
    for col in ("REV", "NBTOT"):
        if not dataset.has(col):
            raise DataValidationError(f"income per C.U. needs column {col}")
    d = dataset.descriptors
    persons = d["NBTOT"].to_numpy()
    if (persons < 1).any():
        raise DataValidationError("households with zero persons")
    kids = d["NB17"].to_numpy() if "NB17" in d else np.zeros_like(persons)
    return d["REV"].to_numpy(dtype=float) / consumption_units(persons, kids)


def poverty_flags(incomes) -> tuple[np.ndarray, float]:
    """Poor when income per C.U. is below half the (household) median.

    Accepts a Dataset or an array of equivalized incomes; the rate is a
    fraction in [0, 1].
    """
    y = equivalized_incomes(incomes) if isinstance(incomes, Dataset) else np.asarray(incomes, float)
    if y.size == 0:
        raise DataValidationError("no incomes")
    poor = y < 0.5 * np.median(y)
    return poor, float(poor.mean())


@dataclass(frozen=True, eq=False)
class ProfileVariables:
    """Per-household variables; ``kinds`` maps each column to 'share' (0/1
    indicator, reported in percent) or 'mean'."""

    frame: pd.DataFrame
    kinds: dict


def profile_variables(dataset: Dataset, include_items: bool = True) -> ProfileVariables:
    cb = dataset.codebook
    totals, partial = score_matrix(dataset.responses, cb)
    cols, kinds = {}, {}

    def add(block, label, values, kind):
        cols[(block, label)] = np.asarray(values, dtype=float)
        kinds[(block, label)] = kind

    add("Average total score", "", totals, "mean")
    for k, dom in enumerate(cb.domains):
        add("Average partial scores", DOMAIN_NAMES.get(dom, dom), partial[:, k], "mean")
    if dataset.has("REV") and dataset.has("NBTOT"):
        y = equivalized_incomes(dataset)
        add("Average income per C.U.", "", y, "mean")
        add("Proportion of poor", "", poverty_flags(y)[0], "share")
    d = dataset.descriptors
    blocks = (("SLS", "Subjective living conditions", ref.SLS_LEVELS),
              ("LOGT", "Type of dwelling", ref.LOGT_LEVELS),
              ("TUR", "Type of location", ref.TUR_LEVELS),
              ("TYM", "Type of household", ref.TYM_LEVELS))
    for col, block, levels in blocks:
        if dataset.has(col):
            for code, name in levels.items():
                add(block, name, d[col].to_numpy() == code, "share")
    for col, block in (("NBTOT", "Total number of persons in the household"),
                       ("AGEM", "Age of the adults"),
                       ("NB17", "Number of persons aged <17")):
        if dataset.has(col):
            add(block, "", d[col].to_numpy(), "mean")
    if include_items:
        for j, it in enumerate(cb.items):
            add("Items", it.negative_label, dataset.responses[:, j], "share")
    frame = pd.DataFrame(cols)
    frame.columns = pd.MultiIndex.from_tuples(frame.columns, names=["block", "variable"])
    return ProfileVariables(frame, kinds)


@dataclass(frozen=True, eq=False)
class ClassProfile:
    table: pd.DataFrame
    sizes: dict
    variables: ProfileVariables
    masks: dict = field(repr=False, default_factory=dict)

    def to_csv(self, path) -> None:
        self.table.to_csv(path, lineterminator="\n")


def class_columns(assignment, n_classes: int | None = None, labels=None,
                  merged=None) -> list[tuple[str, np.ndarray]]:
    """Column masks: one per class, optional merged groups placed after their
    last member (``merged={"2+3": [1, 2]}``)."""
    a = np.asarray(assignment)
    k = int(a.max()) + 1 if n_classes is None else n_classes
    labels = [str(c + 1) for c in range(k)] if labels is None else list(labels)
    merged = merged or {}
    after = {}
    for name, members in merged.items():
        after.setdefault(max(members), []).append((name, members))
    out = []
    for c in range(k):
        out.append((labels[c], a == c))
        for name, members in after.get(c, []):
            out.append((name, np.isin(a, members)))
    return out


def profile_table(variables: ProfileVariables, columns) -> ClassProfile:
    frame = variables.frame
    n = len(frame)
    columns = list(columns) + [("All", np.ones(n, dtype=bool))]
    data = {}
    sizes = {}
    for label, mask in columns:
        mask = np.asarray(mask, dtype=bool)
        size = int(mask.sum())
        sizes[label] = size
        col = {("Proportion of each class", ""): 100.0 * size / n if n else np.nan}
        for key in frame.columns:
            v = frame[key].to_numpy()[mask]
            m = float(np.mean(v)) if size else np.nan
            col[key] = 100.0 * m if variables.kinds[key] == "share" else m
        data[label] = col
    table = pd.DataFrame(data)
    table.index = pd.MultiIndex.from_tuples(table.index, names=["block", "variable"])
    return ClassProfile(table, sizes, variables, {label: np.asarray(m, bool) for label, m in columns})


def class_profile(assignment, dataset: Dataset, n_classes: int | None = None, labels=None,
                  merged=None, include_items: bool = True) -> ClassProfile:
    """Profile table: one column per class (plus merged groups) and 'All'.

    Classes without members keep their column, filled with NaN.
    """
    a = np.asarray(assignment)
    if a.shape != (dataset.n,):
        raise DataValidationError("assignment must cover the dataset")
    return profile_table(profile_variables(dataset, include_items),
                         class_columns(a, n_classes, labels, merged))


@dataclass(frozen=True)
class OverrepFlag:
    klass: str
    descriptor: tuple
    v_value: float
    flagged: bool
    undefined: bool = False


def v_test_share(n_k: int, share_k: float, p: float, n: int) -> float:
    """Hypergeometric v-test for a category share inside a class."""
    var = n_k * p * (1 - p) * (n - n_k) / (n - 1)
    if n < 2 or var <= 0:
        return float("nan")
    return (n_k * share_k - n_k * p) / math.sqrt(var)


def v_test_mean(n_k: int, mean_k: float, mean: float, var: float, n: int) -> float:
    """v-test for a class mean (variance with denominator N)."""
    den = ((n - n_k) / (n - 1)) * var / n_k if n > 1 and n_k > 0 else 0.0
    if den <= 0:
        return float("nan")
    return (mean_k - mean) / math.sqrt(den)


def overrepresentation(profile: ClassProfile, columns=None) -> list[OverrepFlag]:
    """v-tests of every variable in every column except 'All'.

    Undefined statistics (no variance, empty or complete class) are returned
    with ``undefined=True`` and are never flagged.
    """
    frame = profile.variables.frame
    n = len(frame)
    out = []
    for label, mask in profile.masks.items():
        if label == "All" or (columns is not None and label not in columns):
            continue
        n_k = int(mask.sum())
        for key in frame.columns:
            x = frame[key].to_numpy()
            if n_k == 0:
                v = float("nan")
            elif profile.variables.kinds[key] == "share":
                v = v_test_share(n_k, float(x[mask].mean()), float(x.mean()), n)
            else:
                v = v_test_mean(n_k, float(x[mask].mean()), float(x.mean()), float(x.var()), n)
            undefined = math.isnan(v)
            out.append(OverrepFlag(label, key, v, (not undefined) and abs(v) >= V_THRESHOLD, undefined))
    return out


def flags_frame(flags) -> pd.DataFrame:
    return pd.DataFrame([{"class": f.klass, "block": f.descriptor[0], "variable": f.descriptor[1],
                          "v": f.v_value, "flagged": f.flagged,
                          "status": "undefined" if f.undefined else "ok"} for f in flags])


def standardized_partial_means(assignment, partials, n_classes: int | None = None,
                               domains=None, order=ZSCORE_DOMAIN_ORDER):
    """Class means of the partial scores as z-values of the overall distribution.

    Returns ``(z, undefined)``: ``z`` is ``n_classes x D`` with columns in
    ``order`` (when ``domains`` names the input columns), ``undefined`` marks
    domains with zero overall standard deviation, whose z are set to 0.
    Empty classes get NaN rows.
    """
    a = np.asarray(assignment)
    p = np.asarray(partials, dtype=float)
    if domains is not None:
        p = p[:, [list(domains).index(d) for d in order]]
    k = int(a.max()) + 1 if n_classes is None else n_classes
    mean = p.mean(axis=0)
    sd = p.std(axis=0)
    undefined = sd == 0
    z = np.full((k, p.shape[1]), np.nan)
    for c in range(k):
        sel = a == c
        if sel.any():
            z[c] = np.where(undefined, 0.0, (p[sel].mean(axis=0) - mean) / np.where(undefined, 1.0, sd))
    return z, undefined
