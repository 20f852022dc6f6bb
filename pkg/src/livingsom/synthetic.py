"""Synthetic household surveys drawn from a mixture of independent Bernoullis."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from . import reference as ref
from .codebook import Codebook
from .errors import DataValidationError
from .profiling import consumption_units
from .rng import substream
from .survey_data import Dataset

log = logging.getLogger(__name__)

_CATEGORICAL_KEYS = ("LOGT", "TUR", "TYM", "SLS")
_LEVEL_BASE = {"LOGT": 1, "TUR": 0, "TYM": 0, "SLS": 1}
_CLASS_DESCRIPTOR_KEYS = set(_CATEGORICAL_KEYS) | {"AGEM", "REVUC"}


def _probs(values, name) -> np.ndarray:
    p = np.asarray(values, dtype=float)
    if p.shape != (5,) or (p < 0).any() or p.sum() <= 0:
        raise DataValidationError(f"{name}: expected 5 non-negative weights")
    return p / p.sum()


@dataclass
class DescriptorSpec:
    """Marginal distributions for the general descriptors.

    Categorical blocks are 5 weights (normalized on use). Income is drawn
    per consumption unit as a log-normal with the given mean and log-scale
    sigma, then multiplied by the household's consumption units.
    """

    LOGT: tuple = ref.LOGT_PERCENT
    TUR: tuple = ref.TUR_PERCENT
    TYM: tuple = ref.TYM_PERCENT
    SLS: tuple = ref.SLS_PERCENT
    age_mean: float = ref.MEAN_ADULT_AGE
    age_sd: float = 14.0
    income_mean_per_cu: float = ref.MEAN_INCOME_PER_CU
    income_sigma: float = 0.5

    @classmethod
    def from_dict(cls, doc: dict) -> "DescriptorSpec":
        allowed = set(cls.__dataclass_fields__)
        extra = set(doc) - allowed
        if extra:
            raise DataValidationError(f"unknown descriptor keys: {sorted(extra)}")
        kw = {k: tuple(v) if k in _CATEGORICAL_KEYS else float(v) for k, v in doc.items()}
        return cls(**kw)

    def to_dict(self) -> dict:
        return {k: list(getattr(self, k)) if k in _CATEGORICAL_KEYS else getattr(self, k)
                for k in self.__dataclass_fields__}


@dataclass
class LatentClass:
    weight: float
    overrides: dict[str, float] = field(default_factory=dict)
    descriptors: dict = field(default_factory=dict)


@dataclass
class SynthSpec:
    n: int
    marginals: dict[str, float]
    classes: list[LatentClass] = field(default_factory=list)
    descriptors: DescriptorSpec | None = None

    def validate(self, codebook: Codebook) -> None:
        if int(self.n) != self.n or self.n < 0:
            raise DataValidationError("n must be a non-negative integer")
        codes = set(codebook.codes)
        missing = codes - set(self.marginals)
        if missing:
            raise DataValidationError(f"marginals missing for items {sorted(missing)}")
        freqs = [("marginal", c, f) for c, f in self.marginals.items()]
        for k, cl in enumerate(self.classes):
            freqs += [(f"class {k}", c, f) for c, f in cl.overrides.items()]
            extra = set(cl.descriptors) - _CLASS_DESCRIPTOR_KEYS
            if extra:
                raise DataValidationError(f"class {k}: unknown descriptor keys {sorted(extra)}")
        for where, code, f in freqs:
            if code not in codes:
                raise DataValidationError(f"{where}: unknown item {code!r}")
            if not (0.0 <= f <= 1.0) or math.isnan(f):
                raise DataValidationError(f"{where}: frequency for {code} outside [0, 1]: {f}")
        if self.classes:
            w = np.array([cl.weight for cl in self.classes], dtype=float)
            if (w < 0).any() or abs(math.fsum(w) - 1.0) > 1e-9:
                raise DataValidationError(f"class weights must be >= 0 and sum to 1, got {math.fsum(w)!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthSpec":
        extra = set(doc) - {"n", "marginals", "classes", "descriptors"}
        if extra:
            raise DataValidationError(f"unknown SynthSpec keys: {sorted(extra)}")
        classes = []
        for raw in doc.get("classes", []):
            bad = set(raw) - {"weight", "overrides", "descriptors"}
            if bad:
                raise DataValidationError(f"unknown class keys: {sorted(bad)}")
            classes.append(LatentClass(float(raw["weight"]),
                                       {k: float(v) for k, v in raw.get("overrides", {}).items()},
                                       dict(raw.get("descriptors", {}))))
        desc = doc.get("descriptors")
        return cls(int(doc["n"]), {k: float(v) for k, v in doc["marginals"].items()}, classes,
                   DescriptorSpec.from_dict(desc) if desc is not None else None)

    @classmethod
    def from_json(cls, path: str | Path) -> "SynthSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        doc = {"n": self.n, "marginals": dict(self.marginals),
               "classes": [{"weight": c.weight, "overrides": dict(c.overrides),
                            "descriptors": {k: list(v) if isinstance(v, tuple) else v
                                            for k, v in c.descriptors.items()}}
                           for c in self.classes]}
        if self.descriptors is not None:
            doc["descriptors"] = self.descriptors.to_dict()
        return doc


def class_frequencies(spec: SynthSpec, codebook: Codebook) -> np.ndarray:
    """Per-class negative frequencies (``k x Q``).

    Items a class does not override get the frequency that keeps the mixture
    marginal equal to ``spec.marginals``; when that is infeasible it is
    clipped to [0, 1] and the marginal is missed.
    """
    classes = spec.classes or [LatentClass(1.0)]
    w = np.array([c.weight for c in classes], dtype=float)
    freq = np.empty((len(classes), codebook.n_items))
    for j, code in enumerate(codebook.codes):
        over = np.array([code in c.overrides for c in classes])
        for k, c in enumerate(classes):
            if over[k]:
                freq[k, j] = c.overrides[code]
        if over.all():
            continue
        w_over = w[over].sum()
        fixed = sum(w[k] * freq[k, j] for k in np.flatnonzero(over))
        rest = (spec.marginals[code] - fixed) / (1.0 - w_over)
        if not 0.0 <= rest <= 1.0:
            log.warning("item %s: marginal %.3f unreachable with overrides; clipping",
                        code, spec.marginals[code])
            rest = min(max(rest, 0.0), 1.0)
        freq[~over, j] = rest
    return freq


def _household_composition(rng, tym):
    """Persons and children under 17 for each household type code."""
    n = tym.size
    persons = np.ones(n, dtype=np.int64)
    kids = np.zeros(n, dtype=np.int64)
    couple = tym == 1
    persons[couple] = 2
    with_kids = tym == 2
    m = int(with_kids.sum())
    total_kids = rng.choice([1, 2, 3, 4], size=m, p=[0.38, 0.40, 0.17, 0.05])
    young = rng.binomial(total_kids, 0.6)
    persons[with_kids] = 2 + total_kids
    kids[with_kids] = young
    lone = tym == 3
    m = int(lone.sum())
    total_kids = rng.choice([1, 2, 3], size=m, p=[0.55, 0.30, 0.15])
    persons[lone] = 1 + total_kids
    kids[lone] = rng.binomial(total_kids, 0.6)
    other = tym == 4
    m = int(other.sum())
    adults = rng.choice([2, 3, 4], size=m, p=[0.3, 0.5, 0.2])
    young = rng.binomial(1, 0.3, size=m)
    persons[other] = adults + young
    kids[other] = young
    return persons, kids


def _descriptors(rng, spec: DescriptorSpec, classes, labels) -> pd.DataFrame:
    n = labels.size
    out = {}
    for key in ("LOGT", "TUR", "TYM", "SLS"):
        col = np.empty(n, dtype=np.int64)
        for k, cl in enumerate(classes):
            idx = np.flatnonzero(labels == k)
            p = _probs(cl.descriptors.get(key, getattr(spec, key)), key)
            col[idx] = _LEVEL_BASE[key] + rng.choice(5, size=idx.size, p=p)
        out[key] = col
    persons, kids = _household_composition(rng, out["TYM"])
    age = np.empty(n)
    income_cu = np.empty(n)
    for k, cl in enumerate(classes):
        idx = np.flatnonzero(labels == k)
        age[idx] = rng.normal(cl.descriptors.get("AGEM", spec.age_mean), spec.age_sd, size=idx.size)
        mean = cl.descriptors.get("REVUC", spec.income_mean_per_cu)
        s = spec.income_sigma
        income_cu[idx] = mean * np.exp(s * rng.standard_normal(idx.size) - 0.5 * s * s)
    cu = consumption_units(persons, kids)
    return pd.DataFrame({
        "LOGT": out["LOGT"], "TUR": out["TUR"], "TYM": out["TYM"],
        "NBTOT": persons, "NB17": kids,
        "AGEM": np.round(np.clip(age, 17.0, 95.0), 1),
        "SLS": out["SLS"],
        "REV": np.round(income_cu * cu, 2),
    })


def generate_synthetic(spec: SynthSpec, seed: int, codebook: Codebook | None = None,
                       return_classes: bool = False):
    """Draw a Dataset from ``spec``; bit-identical for identical (spec, seed)."""
    codebook = codebook or Codebook.default()
    spec.validate(codebook)
    classes = spec.classes or [LatentClass(1.0)]
    rng = substream(seed, "synth")
    w = np.array([c.weight for c in classes], dtype=float)
    labels = rng.choice(len(classes), size=spec.n, p=w / w.sum())
    freq = class_frequencies(spec, codebook)
    responses = (rng.random((spec.n, codebook.n_items)) < freq[labels]).astype(np.int8)
    descriptors = None
    if spec.descriptors is not None:
        descriptors = _descriptors(rng, spec.descriptors, classes, labels)
    width = len(str(max(spec.n, 1)))
    ids = tuple(f"H{i + 1:0{width}d}" for i in range(spec.n))
    ds = Dataset(codebook, ids, responses, descriptors, 0)
    return (ds, labels) if return_classes else ds


def echp_spec(n: int = ref.N_HOUSEHOLDS) -> SynthSpec:
    """Five latent classes shaped like the published household classes,
    with overall item marginals at the published ECHP frequencies."""
    codes = Codebook.default().codes
    classes = []
    for w, freqs, desc in zip(ref.HOUSEHOLD_CLASS_WEIGHTS, ref.HOUSEHOLD_CLASS_ITEM_PERCENT,
                              ref.HOUSEHOLD_CLASS_DESCRIPTORS):
        classes.append(LatentClass(w / 100.0, {c: f / 100.0 for c, f in zip(codes, freqs)},
                                   dict(desc)))
    marginals = {c: f / 100.0 for c, f in ref.ITEM_NEGATIVE_PERCENT.items()}
    return SynthSpec(n, marginals, classes, DescriptorSpec())
