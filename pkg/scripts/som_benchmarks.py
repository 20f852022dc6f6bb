"""Seeded benchmarks of the map algorithms on constructed data.

    python3 scripts/som_benchmarks.py --seeds 10

Reports blob purity on a 5-unit string, quantization error before and after
training, topographic error of an 8x8 grid on uniform data, and the polarity
separation of modality maps on two-blob survey data.
"""
import argparse
import time

import numpy as np

from livingsom.codebook import Codebook, Item
from livingsom.korresp import classify_modalities, polarity_separation
from livingsom.som import MapTopology, SomConfig, assign, fit_som, init_som, quality, train_online
from livingsom.survey_data import Dataset, burt_table, disjunctive_code


def blobs(rng, n=3000):
    centers = np.array([[0.0, 0.0], [8.0, 0.0], [0.0, 8.0]])
    lab = rng.integers(0, 3, n)
    return centers[lab] + rng.normal(size=(n, 2)), lab


def purity(units, labels):
    return sum(np.bincount(labels[units == u]).max() for u in np.unique(units)) / len(labels)


def two_blob_burt(rng, n=1000, q=10):
    z = rng.random(n) < 0.5
    r = (rng.random((n, q)) < np.where(z[:, None], 0.85, 0.15)).astype(np.int8)
    cb = Codebook(tuple(Item(f"I{i}", "d", "bad", "ok") for i in range(q)), ("d",))
    return burt_table(disjunctive_code(Dataset(cb, tuple(map(str, range(n))), r))), cb


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    rows = []
    t0 = time.perf_counter()
    for seed in range(args.seeds):
        rng = np.random.default_rng(seed)
        x, lab = blobs(rng)
        cfg = SomConfig(seed=seed)
        m0 = init_som(MapTopology.string(5), 2, x, cfg)
        m1 = train_online(m0, x, cfg)
        u = rng.random((2000, 2))
        te = quality(fit_som(u, MapTopology.grid(8, 8), cfg), u)["topographic_error"]
        burt, cb = two_blob_burt(rng)
        sep = polarity_separation(classify_modalities(burt, MapTopology.string(5), cfg), cb)
        rows.append((seed, purity(assign(m1, x), lab), quality(m0, x)["quantization_error"],
                     quality(m1, x)["quantization_error"], te, sep))
    print(f"{'seed':>4} {'purity':>7} {'QE init':>8} {'QE end':>7} {'TE 8x8':>7} {'sep':>6}")
    for r in rows:
        print(f"{r[0]:>4} {r[1]:>7.3f} {r[2]:>8.3f} {r[3]:>7.3f} {r[4]:>7.4f} {r[5]:>6.3f}")
    a = np.array([r[1:] for r in rows])
    print(f"mean {a[:, 0].mean():>7.3f} {a[:, 1].mean():>8.3f} {a[:, 2].mean():>7.3f} "
          f"{a[:, 3].mean():>7.4f} {a[:, 4].mean():>6.3f}   ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
