import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from livingsom.codebook import Codebook, Item
from livingsom.errors import DataValidationError
from livingsom.mca import (correspondence_analysis, coordinates, fit_mca,
                           n_axes_for, scaled_burt_profiles)
from livingsom.survey_data import Dataset, IndicatorMatrix, burt_table, disjunctive_code

from oracles import chi2_profile_distance, dense_ca, random_indicator


def indicator(z, q):
    z = np.asarray(z)
    return IndicatorMatrix(z, tuple(f"m{j}" for j in range(z.shape[1])), q)


def valid_random_indicator(rng, n, q):
    while True:
        z = random_indicator(rng, n, q)
        if (z.sum(axis=0) > 0).all():
            return z


def assert_matches_oracle(model, z, tol=1e-8):
    lam, rows, cols = dense_ca(z)
    k = model.n_axes
    assert np.allclose(model.eigenvalues, lam[:k], atol=tol, rtol=0)
    assert np.all(lam[k:] < 1e-10)
    # compare up to a per-axis sign, aligned independently of the package rule
    s = np.sign(np.sum(model.modality_coords * cols[:, :k], axis=0))
    s[s == 0] = 1.0
    rows, cols = rows[:, :k] * s, cols[:, :k] * s
    full = np.concatenate([[np.inf], lam[:k], [0.0]])
    for a in range(k):
        gap = min(full[a] - full[a + 1], full[a + 1] - full[a + 2])
        if gap > 1e-6:
            assert np.allclose(model.modality_coords[:, a], cols[:, a], atol=tol, rtol=0)
            assert np.allclose(model.observation_coords[:, a], rows[:, a], atol=tol, rtol=0)


def test_perfect_association_saturates():
    z = np.array([[1, 0, 1, 0], [0, 1, 0, 1]] * 5)
    m = fit_mca(indicator(z, 2))
    assert m.eigenvalues[0] == pytest.approx(1.0, abs=1e-12)


def test_default_codebook_inertia(codebook, rng):
    ds = Dataset(codebook, tuple(map(str, range(300))), rng.integers(0, 2, size=(300, 26)))
    m = fit_mca(disjunctive_code(ds))
    assert abs(m.eigenvalues.sum() - 1.0) <= 1e-8
    assert abs(m.total_inertia - 1.0) <= 1e-8
    assert m.n_axes == 26


@pytest.mark.parametrize("seed", range(5))
def test_four_items_match_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    z = valid_random_indicator(rng, 30, 4)
    assert_matches_oracle(fit_mca(indicator(z, 4)), z)


def test_model_invariants(rng):
    z = valid_random_indicator(rng, 40, 5)
    m = fit_mca(indicator(z, 5))
    assert np.all(np.diff(m.eigenvalues) <= 1e-15)
    assert np.all((m.eigenvalues >= 0) & (m.eigenvalues <= 1))
    assert np.allclose(m.row_masses, 1 / 40)
    assert np.allclose(m.col_masses, z.sum(0) / (40 * 5))
    assert np.all(np.abs(m.col_masses @ m.modality_coords) < 1e-8)
    assert np.all(np.abs(m.row_masses @ m.observation_coords) < 1e-8)


def test_transition_formula(rng):
    q = 5
    z = valid_random_indicator(rng, 40, q)
    m = fit_mca(indicator(z, q))
    bary = (z / q) @ m.modality_coords
    assert np.allclose(m.observation_coords, bary / np.sqrt(m.eigenvalues), atol=1e-8)


def test_sign_convention(rng):
    z = valid_random_indicator(rng, 25, 3)
    g = fit_mca(indicator(z, 3)).modality_coords
    for a in range(g.shape[1]):
        top = np.abs(g[:, a]).max()
        first = np.flatnonzero(np.abs(g[:, a]) >= top * (1 - 1e-9))[0]
        assert g[first, a] > 0


def test_duplicated_column_distributional_equivalence(rng):
    z = valid_random_indicator(rng, 30, 4).astype(float)
    dup = np.column_stack([z, z[:, 2]])
    merged = z.copy()
    merged[:, 2] *= 2
    a = correspondence_analysis(dup)
    b = correspondence_analysis(merged)
    assert a.n_axes == b.n_axes
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-8, rtol=0)


def test_errors():
    z = np.array([[1, 0, 1, 0], [1, 0, 0, 1]])
    with pytest.raises(DataValidationError, match="zero-frequency"):
        fit_mca(indicator(z, 2))
    with pytest.raises(DataValidationError):
        fit_mca(indicator(z[:1], 2))


def test_coordinate_selection(rng):
    z = valid_random_indicator(rng, 40, 4)
    m = fit_mca(indicator(z, 4))
    assert coordinates(m, "observations", m.n_axes).shape == (40, m.n_axes)
    assert coordinates(m, "modalities", 1.0).shape == (8, m.n_axes)
    assert coordinates(m, "observations").shape[1] == m.n_axes
    with pytest.raises(DataValidationError):
        coordinates(m, "observations", 0)
    with pytest.raises(DataValidationError):
        coordinates(m, "observations", m.n_axes + 1)
    with pytest.raises(DataValidationError):
        coordinates(m, "observations", 1.5)


def test_fraction_rule():
    class Stub:
        eigenvalues = np.array([0.4, 0.2, 0.2, 0.1, 0.1])
        n_axes = 5
    assert n_axes_for(Stub, 0.5) == 2
    assert n_axes_for(Stub, 0.4) == 1
    assert n_axes_for(Stub, 1.0) == 5


# -- scaled Burt profiles ----------------------------------------------------

def toy_burt():
    cb = Codebook((Item("I1", "d", "B", "A"), Item("I2", "d", "Y", "X")), ("d",))
    ds = Dataset(cb, ("1", "2", "3"), np.array([[0, 0], [1, 0], [1, 1]]))
    return burt_table(disjunctive_code(ds))


def test_scaled_profiles_toy_isometry():
    b = toy_burt()
    x = scaled_burt_profiles(b)
    d = np.linalg.norm(x[0] - x[1])
    assert d ** 2 == pytest.approx(chi2_profile_distance(b.counts, 0, 1), abs=1e-10)


def test_identical_rows_zero_distance():
    b = np.array([[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 2, 0], [1, 1, 0, 2]])
    b2 = b.copy()
    b2[1] = b2[0]
    x = scaled_burt_profiles(b2)
    assert np.linalg.norm(x[0] - x[1]) == 0.0


def test_uniform_burt_equal_distances():
    b = np.full((6, 6), 1.0) + 3.0 * np.eye(6)
    x = scaled_burt_profiles(b)
    d = [np.linalg.norm(x[i] - x[j]) for i in range(6) for j in range(i + 1, 6)]
    assert np.allclose(d, d[0], rtol=1e-12)


def test_balanced_burt_cross_item_distances_equal():
    # 3 balanced items whose modalities co-occur equally across items
    b = np.full((6, 6), 1.0)
    for q in range(3):
        b[2 * q:2 * q + 2, 2 * q:2 * q + 2] = [[2, 0], [0, 2]]
    x = scaled_burt_profiles(b)
    d = [np.linalg.norm(x[i] - x[j]) for i in range(6) for j in range(i + 1, 6) if i // 2 != j // 2]
    assert np.allclose(d, d[0], rtol=1e-12)


def test_zero_row_rejected():
    with pytest.raises(DataValidationError):
        scaled_burt_profiles(np.array([[1, 0], [0, 0]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 6), st.integers(5, 40))
def test_scaled_profile_isometry_property(seed, q, n):
    rng = np.random.default_rng(seed)
    z = valid_random_indicator(rng, n, q)
    b = z.T @ z
    x = scaled_burt_profiles(b)
    for j in range(2 * q):
        for l in range(j + 1, 2 * q):
            d2 = float(np.sum((x[j] - x[l]) ** 2))
            assert abs(d2 - chi2_profile_distance(b, j, l)) <= 1e-10 * max(1.0, d2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 6), st.integers(10, 50))
def test_oracle_equivalence_property(seed, q, n):
    rng = np.random.default_rng(seed)
    z = valid_random_indicator(rng, n, q)
    m = fit_mca(indicator(z, q))
    assert_matches_oracle(m, z)
    assert abs(m.eigenvalues.sum() - (2 * q - q) / q) <= 1e-8
