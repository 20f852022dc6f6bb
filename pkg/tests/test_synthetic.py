import numpy as np
import pytest

from livingsom import reference as ref
from livingsom.errors import DataValidationError
from livingsom.synthetic import LatentClass, SynthSpec, echp_spec, generate_synthetic


def flat_spec(codebook, n, f=0.1):
    return SynthSpec(n, {c: f for c in codebook.codes})


def test_marginal_within_two_points(codebook):
    marg = {c: 0.1 for c in codebook.codes}
    marg["CLB"] = 0.034
    ds = generate_synthetic(SynthSpec(6458, marg), seed=1)
    assert 0.014 <= ds.responses[:, 0].mean() <= 0.054
    assert np.all(np.abs(ds.responses.mean(axis=0) - np.array(list(marg.values()))) <= 0.02)


def test_empty_dataset(codebook):
    ds = generate_synthetic(flat_spec(codebook, 0), seed=3)
    assert ds.n == 0 and ds.responses.shape == (0, 26)


def test_generator_is_deterministic(codebook):
    a = generate_synthetic(echp_spec(500), seed=9)
    b = generate_synthetic(echp_spec(500), seed=9)
    c = generate_synthetic(echp_spec(500), seed=10)
    assert a.equals(b)
    assert not a.equals(c)


def test_latent_class_overrides(codebook):
    codes = codebook.codes
    groups = [codes[0:8], codes[8:16], codes[16:24]]
    classes = [LatentClass(1 / 3, {c: (0.9 if c in g else 0.02) for c in codes}) for g in groups]
    spec = SynthSpec(3000, {c: 0.3 for c in codes}, classes)
    ds, lab = generate_synthetic(spec, seed=4, return_classes=True)
    for k, cl in enumerate(classes):
        obs = ds.responses[lab == k].mean(axis=0)
        want = np.array([cl.overrides[c] for c in codes])
        assert np.max(np.abs(obs - want)) <= 0.03


def test_partial_overrides_balance_marginals(codebook):
    marg = {c: 0.2 for c in codebook.codes}
    classes = [LatentClass(0.25, {"CLB": 0.6}), LatentClass(0.75, {})]
    ds, lab = generate_synthetic(SynthSpec(8000, marg, classes), seed=2, return_classes=True)
    assert abs(ds.responses[:, 0].mean() - 0.2) < 0.02
    assert abs(ds.responses[lab == 0, 0].mean() - 0.6) < 0.03


def test_spec_validation(codebook):
    marg = {c: 0.1 for c in codebook.codes}
    with pytest.raises(DataValidationError):
        generate_synthetic(SynthSpec(10, dict(marg, CLB=1.2)), seed=0)
    with pytest.raises(DataValidationError):
        generate_synthetic(SynthSpec(10, marg, [LatentClass(0.5), LatentClass(0.4)]), seed=0)
    with pytest.raises(DataValidationError):
        SynthSpec.from_dict({"n": 1, "marginals": marg, "extra": 1})


def test_spec_json_roundtrip(tmp_path):
    import json
    spec = echp_spec(100)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(spec.to_dict()))
    again = SynthSpec.from_json(p)
    assert generate_synthetic(again, 5).equals(generate_synthetic(spec, 5))


def test_echp_preset_matches_reference(echp_full):
    assert echp_full.n == ref.N_HOUSEHOLDS
    obs = echp_full.responses.mean(axis=0) * 100
    want = np.array([ref.ITEM_NEGATIVE_PERCENT[c] for c in echp_full.codebook.codes])
    assert np.max(np.abs(obs - want)) <= 2.0
    d = echp_full.descriptors
    assert (d["NB17"] <= d["NBTOT"]).all()
    assert d["SLS"].between(1, 5).all()
