"""Deprivation scores and calibration of a living-conditions poverty line."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .codebook import Codebook
from .errors import DataValidationError
from .survey_data import Dataset, HouseholdRecord


@dataclass(frozen=True)
class ScoreVector:
    total: int
    partial: tuple[int, ...]


def score(household: HouseholdRecord, codebook: Codebook) -> ScoreVector:
    r = np.asarray(household.responses, dtype=np.int64)
    dom = codebook.domain_of_items()
    partial = tuple(int(r[dom == k].sum()) for k in range(len(codebook.domains)))
    return ScoreVector(int(r.sum()), partial)


def score_matrix(responses, codebook: Codebook) -> tuple[np.ndarray, np.ndarray]:
    """Totals (n,) and per-domain partial scores (n x D) for many records."""
    r = np.asarray(responses, dtype=np.int64).reshape(-1, codebook.n_items)
    dom = codebook.domain_of_items()
    onehot = (dom[:, None] == np.arange(len(codebook.domains))[None, :]).astype(np.int64)
    partial = r @ onehot
    return partial.sum(axis=1), partial


@dataclass(frozen=True, eq=False)
class ScoreDistribution:
    """Percent of households per score, and both cumulative readings.

    ``descending[s]`` is the share with a score >= s, ``ascending[s]`` the
    share with a score <= s.
    """

    scores: np.ndarray
    percent: np.ndarray
    descending: np.ndarray
    ascending: np.ndarray

    @property
    def max_score(self) -> int:
        return int(self.scores[-1])

    def descending_at(self, s: int) -> float:
        if s > self.max_score:
            return 0.0
        return float(self.descending[s])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"score": self.scores, "percent": self.percent,
                             "cumulative_descending": self.descending,
                             "cumulative_ascending": self.ascending})


def distribution_from_weights(weights) -> ScoreDistribution:
    """Distribution from non-negative mass per score 0..S (counts or percents)."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or (w < 0).any():
        raise DataValidationError("weights must be a non-empty non-negative vector")
    total = math.fsum(w)
    if total <= 0:
        raise DataValidationError("empty distribution")
    # exact tail sums: cumulative percents are compared against published values
    desc = np.array([100.0 * math.fsum(w[s:]) / total for s in range(w.size)])
    asc = np.array([100.0 * math.fsum(w[: s + 1]) / total for s in range(w.size)])
    return ScoreDistribution(np.arange(w.size), 100.0 * w / total, desc, asc)


def distribution_from_scores(totals, max_score: int, weights=None) -> ScoreDistribution:
    totals = np.asarray(totals, dtype=np.int64)
    if totals.size == 0:
        raise DataValidationError("empty dataset")
    if totals.min() < 0 or totals.max() > max_score:
        raise DataValidationError(f"scores must lie in 0..{max_score}")
    w = np.ones(totals.size) if weights is None else np.asarray(weights, dtype=float)
    mass = np.zeros(max_score + 1)
    # fsum is exact, so the result does not depend on record order
    for s in range(max_score + 1):
        mass[s] = math.fsum(w[totals == s])
    return distribution_from_weights(mass)


def distribution(dataset: Dataset, codebook: Codebook | None = None, weights=None) -> ScoreDistribution:
    codebook = codebook or dataset.codebook
    if dataset.n == 0:
        raise DataValidationError("empty dataset")
    totals, _ = score_matrix(dataset.responses, codebook)
    return distribution_from_scores(totals, codebook.n_items, weights)


def calibrate_threshold(dist: ScoreDistribution, target_rate: float) -> int:
    """Score whose share of households at or above it is closest to the
    target rate (percent). Ties go to the higher score; the target 0 gives
    ``max_score + 1`` (nobody classified as deprived)."""
    if not 0.0 <= target_rate <= 100.0:
        raise DataValidationError("target rate must lie in [0, 100]")
    best_s, best_gap = 0, math.inf
    for s in range(dist.max_score + 2):
        gap = abs(dist.descending_at(s) - target_rate)
        if gap <= best_gap:
            best_s, best_gap = s, gap
    return best_s


def classify_bad(totals, threshold: int) -> np.ndarray:
    """True for households whose total score is at or above the threshold."""
    return np.asarray(totals) >= threshold
