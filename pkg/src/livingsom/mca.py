"""Correspondence analysis of contingency and disjunctive tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Integral, Real

import numpy as np

from .errors import DataValidationError, NumericalError
from .survey_data import BurtTable, IndicatorMatrix

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CorrespondenceModel:
    """Fitted CA / MCA solution.

    Coordinates are principal (scaled by the singular values), so Euclidean
    distances between rows of ``observation_coords`` reproduce chi-square
    distances between row profiles. Axes are ordered by decreasing eigenvalue.
    """

    row_masses: np.ndarray
    col_masses: np.ndarray
    eigenvalues: np.ndarray
    modality_coords: np.ndarray
    observation_coords: np.ndarray
    total_inertia: float
    labels: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    @property
    def n_axes(self) -> int:
        return self.eigenvalues.size

    @property
    def inertia_shares(self) -> np.ndarray:
        return self.eigenvalues / self.total_inertia


def fix_signs(col_coords: np.ndarray) -> np.ndarray:
    """Per-axis signs making the largest-|loading| column coordinate positive."""
    if col_coords.size == 0:
        return np.ones(col_coords.shape[1])
    a = np.abs(col_coords)
    # first index within rounding of the max: balanced items give exact +/- pairs
    lead = np.argmax(a >= a.max(axis=0) * (1 - 1e-9), axis=0)
    signs = np.sign(col_coords[lead, np.arange(col_coords.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def correspondence_analysis(table, labels=()) -> CorrespondenceModel:
    """Simple CA of a non-negative table (rows: observations, cols: modalities)."""
    x = np.asarray(table, dtype=float)
    if x.ndim != 2 or (x < 0).any():
        raise DataValidationError("table must be a non-negative 2-D array")
    if x.shape[0] < 2:
        raise DataValidationError("need at least 2 rows")
    if (x.sum(axis=0) == 0).any():
        zero = np.flatnonzero(x.sum(axis=0) == 0)
        names = [labels[j] for j in zero] if labels else zero.tolist()
        raise DataValidationError(f"zero-frequency columns: {names}")
    if (x.sum(axis=1) == 0).any():
        raise DataValidationError("zero rows are not allowed")
    p = x / x.sum()
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    s = (p - np.outer(r, c)) / np.sqrt(np.outer(r, c))
    try:
        u, sv, vt = np.linalg.svd(s, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    if not np.all(np.isfinite(sv)):
        raise NumericalError("non-finite singular values")
    keep = sv > RANK_TOL * sv[0] if sv.size and sv[0] > 0 else np.zeros(sv.size, bool)
    sv = sv[keep]
    u = u[:, keep]
    v = vt[keep].T
    row_coords = u * sv / np.sqrt(r)[:, None]
    col_coords = v * sv / np.sqrt(c)[:, None]
    signs = fix_signs(col_coords)
    return CorrespondenceModel(
        row_masses=r, col_masses=c, eigenvalues=sv ** 2,
        modality_coords=col_coords * signs, observation_coords=row_coords * signs,
        total_inertia=float(np.sum(s * s)), labels=tuple(labels),
        metadata={"variant": "indicator-matrix CA", "coordinates": "principal",
                  "sign_rule": "largest |modality loading| positive",
                  "rank_tolerance": RANK_TOL})


def fit_mca(indicator: IndicatorMatrix, q: int | None = None) -> CorrespondenceModel:
    """MCA as CA of the complete disjunctive table.

    With ``K`` modalities over ``q`` items the total inertia is ``(K - q)/q``
    and at most ``K - q`` axes are non-trivial.
    """
    z = np.asarray(indicator.z, dtype=float)
    q = indicator.n_items if q is None else q
    if z.shape[0] < 2:
        raise DataValidationError("MCA needs at least 2 observations")
    if not np.allclose(z.sum(axis=1), q):
        raise DataValidationError(f"indicator rows must sum to the item count {q}")
    model = correspondence_analysis(z, indicator.labels)
    model.metadata["n_items"] = q
    return model


def n_axes_for(model: CorrespondenceModel, k) -> int:
    """Resolve an axis count (int) or a cumulative inertia fraction (float)."""
    if isinstance(k, bool):
        raise DataValidationError("k must be an int or a float fraction")
    if k is None:
        return model.n_axes
    if isinstance(k, Integral):
        if not 1 <= k <= model.n_axes:
            raise DataValidationError(f"k={k} outside 1..{model.n_axes}")
        return int(k)
    if isinstance(k, Real):
        if not 0.0 < k <= 1.0:
            raise DataValidationError(f"inertia fraction {k} outside (0, 1]")
        cum = np.cumsum(model.eigenvalues) / np.sum(model.eigenvalues)
        # guard the 1.0 boundary against cumulative rounding
        hit = np.flatnonzero(cum >= k - 1e-12)
        return int(hit[0]) + 1 if hit.size else model.n_axes
    raise DataValidationError("k must be an int or a float fraction")


def coordinates(model: CorrespondenceModel, side: str = "observations", k=None) -> np.ndarray:
    kk = n_axes_for(model, k)
    if side == "observations":
        return model.observation_coords[:, :kk]
    if side == "modalities":
        return model.modality_coords[:, :kk]
    raise DataValidationError(f"side must be 'observations' or 'modalities', not {side!r}")


def scaled_burt_profiles(burt: BurtTable | np.ndarray) -> np.ndarray:
    """Burt row profiles divided by sqrt(column mass).

    Euclidean distance between two output rows equals the chi-square distance
    between the corresponding Burt row profiles.
    """
    b = np.asarray(burt.counts if isinstance(burt, BurtTable) else burt, dtype=float)
    rows = b.sum(axis=1)
    if (rows == 0).any():
        raise DataValidationError(f"zero-frequency modalities at rows {np.flatnonzero(rows == 0).tolist()}")
    col_mass = b.sum(axis=0) / b.sum()
    return (b / rows[:, None]) / np.sqrt(col_mass)[None, :]
