"""Modelling conventions recorded in every artifact's metadata."""

CONVENTIONS = {
    "indicator_columns": "items in codebook order, neutral column before negative column",
    "missing_data": "records with any missing item or descriptor are dropped at load",
    "synthetic_generator": "mixture of independent Bernoullis; non-overridden items balanced to the marginals",
    "mca": "CA of the complete disjunctive table, principal coordinates, trivial axis removed",
    "mca_sign": "each axis oriented so its largest |modality coordinate| is positive",
    "mca_rank_tolerance": 1e-10,
    "mca_axes_default": "all non-trivial axes",
    "modality_map_input": "Burt row profiles scaled by 1/sqrt(column mass)",
    "som_kernel": "0/1 neighbourhood within an integer radius",
    "som_map_metric": "string |i-j|; grid Chebyshev",
    "som_schedule": "linear rate 0.5 -> 0.01, linear radius ceil(max(dims)/2) -> 0 (half-up rounding), 100 steps per row",
    "som_sampling": "rows drawn with replacement",
    "som_sample_init_fallback": "uniform-box when the map has more units than rows",
    "tie_breaking": "lowest index wins",
    "superclass_linkage": "ward on code vectors, merges restricted to map-adjacent clusters",
    "superclass_weights": "1 per unit unless class-size weighting is requested",
    "superclass_order": "super-classes and groups numbered by increasing mean total score",
    "default_groups": "3-cluster cut of the same merge history",
    "score_map_orientation": "string oriented so code-vector sums increase along it",
    "threshold_rule": "score minimizing |share with score >= s - target|; ties to the higher score; target 0 -> max+1",
    "equivalence_scale": "1 first adult, 0.5 other persons aged 17+, 0.3 persons under 17",
    "poverty_line": "50% of the household median income per consumption unit",
    "v_test_threshold": 2.0,
}
