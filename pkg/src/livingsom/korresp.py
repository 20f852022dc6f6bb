"""Kohonen classification of modalities from chi-square scaled Burt profiles."""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .codebook import Codebook
from .mca import scaled_burt_profiles
from .rng import substream
from .som import MapTopology, SomConfig, SomModel, assign, fit_som
from .survey_data import BurtTable

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ModalityMap:
    model: SomModel
    labels: tuple[str, ...]      # modality label per Burt row
    assignment: np.ndarray       # unit per modality
    profiles: np.ndarray         # the scaled Burt rows the map was trained on

    def unit_labels(self) -> list[list[str]]:
        """Modality labels held by each unit (empty list for empty units)."""
        out = [[] for _ in range(self.model.topology.n_units)]
        for lab, u in zip(self.labels, self.assignment):
            out[u].append(lab)
        return out


def classify_modalities(burt: BurtTable, topology: MapTopology,
                        config: SomConfig = SomConfig()) -> ModalityMap:
    """Train a map on the rows of the chi-square scaled Burt table.

    Rows and columns of a Burt table are the same modalities, so classifying
    the scaled rows alone carries the full row/column geometry.
    """
    x = scaled_burt_profiles(burt)
    if topology.n_units > x.shape[0]:
        log.warning("%d units for %d modalities: some units stay empty",
                    topology.n_units, x.shape[0])
    if config.init == "sample" and topology.n_units > x.shape[0]:
        config = replace(config, init="uniform-box")
    model = fit_som(x, topology, config)
    return ModalityMap(model, tuple(burt.labels), assign(model, x), x)


def _pair_mask(mmap: ModalityMap) -> np.ndarray:
    d = mmap.model.topology.distance_matrix()[np.ix_(mmap.assignment, mmap.assignment)]
    return np.triu(d <= 1, k=1)


def polarity_separation(mmap: ModalityMap, codebook: Codebook | None = None,
                        polarity=None) -> float:
    """Share of modality pairs on the same or adjacent units that have the
    same polarity (both negative or both neutral). NaN when no such pair."""
    if polarity is None:
        polarity = codebook.modality_polarity()
    polarity = np.asarray(polarity)
    mask = _pair_mask(mmap)
    if not mask.any():
        return float("nan")
    same = polarity[:, None] == polarity[None, :]
    return float(same[mask].mean())


def polarity_baseline(mmap: ModalityMap, codebook: Codebook, n_shuffles: int = 1000,
                      seed: int = 0) -> dict:
    """Permutation baseline: polarity labels shuffled over fixed map positions."""
    polarity = codebook.modality_polarity()
    mask = _pair_mask(mmap)
    rng = substream(seed, "polarity-shuffle")
    scores = np.empty(n_shuffles)
    for s in range(n_shuffles):
        p = rng.permutation(polarity)
        scores[s] = (p[:, None] == p[None, :])[mask].mean() if mask.any() else np.nan
    k = polarity.size
    n_neg = int(polarity.sum())
    same_pairs = n_neg * (n_neg - 1) / 2 + (k - n_neg) * (k - n_neg - 1) / 2
    return {"mean": float(np.mean(scores)), "sd": float(np.std(scores)),
            "base_rate": same_pairs / (k * (k - 1) / 2),
            "observed": polarity_separation(mmap, polarity=polarity)}
