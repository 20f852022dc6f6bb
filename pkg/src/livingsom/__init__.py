"""Kohonen maps, correspondence analysis and deprivation scores for
household living-conditions surveys."""

__version__ = "0.1.0"

from .codebook import Codebook, Item
from .survey_data import Dataset, load_dataset, disjunctive_code, burt_table
from .synthetic import SynthSpec, generate_synthetic, echp_spec
from .mca import fit_mca, coordinates, scaled_burt_profiles
from .som import MapTopology, SomConfig, SomModel, fit_som, assign, bmu, quality
from .superclass import cluster_units, regroup
from .scores import score, distribution, calibrate_threshold
from .profiling import class_profile, overrepresentation, standardized_partial_means

__all__ = [
    "Codebook", "Item", "Dataset", "load_dataset", "disjunctive_code", "burt_table",
    "SynthSpec", "generate_synthetic", "echp_spec", "fit_mca", "coordinates",
    "scaled_burt_profiles", "MapTopology", "SomConfig", "SomModel", "fit_som", "assign",
    "bmu", "quality", "cluster_units", "regroup", "score", "distribution",
    "calibrate_threshold", "class_profile", "overrepresentation",
    "standardized_partial_means",
]
