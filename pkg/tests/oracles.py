"""Slow, independent reference computations used to check the fast paths."""
import itertools

import numpy as np


def naive_matmul_tt(z):
    """Z^T Z with explicit loops."""
    n, k = len(z), len(z[0])
    out = [[0] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            s = 0
            for i in range(n):
                s += int(z[i][a]) * int(z[i][b])
            out[a][b] = s
    return np.array(out)


def dense_ca(z):
    """CA via eigendecomposition of S^T S; returns eigenvalues and principal
    coordinates of rows and columns (signs unnormalized)."""
    p = np.asarray(z, float) / np.sum(z)
    r, c = p.sum(1), p.sum(0)
    s = (p - np.outer(r, c)) / np.sqrt(np.outer(r, c))
    lam, v = np.linalg.eigh(s.T @ s)
    order = np.argsort(lam)[::-1]
    lam, v = lam[order], v[:, order]
    keep = lam > 1e-14 * max(lam[0], 1e-300)
    lam, v = lam[keep], v[:, keep]
    cols = v * np.sqrt(lam) / np.sqrt(c)[:, None]
    rows = (s @ v) / np.sqrt(r)[:, None]
    return lam, rows, cols


def chi2_profile_distance(b, j, l):
    b = np.asarray(b, float)
    prof = b / b.sum(1, keepdims=True)
    mass = b.sum(0) / b.sum()
    return float(np.sum((prof[j] - prof[l]) ** 2 / mass))


def linear_scan_bmu(codevectors, x):
    best, best_d = None, None
    for u, m in enumerate(codevectors):
        d = 0.0
        for a, b in zip(x, m):
            d += (a - b) * (a - b)
        if best_d is None or d < best_d:
            best, best_d = u, d
    return best


def ess(points):
    pts = np.asarray(points, float)
    return float(((pts - pts.mean(0)) ** 2).sum())


def brute_ward(vectors):
    """Unconstrained Ward by explicit inertia increase over all pairs.

    Returns the list of partitions (as frozensets of unit sets) from n
    clusters down to one.
    """
    x = np.asarray(vectors, float)
    clusters = [frozenset([i]) for i in range(len(x))]
    parts = [frozenset(clusters)]
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(range(len(clusters)), 2):
            ca, cb = clusters[a], clusters[b]
            inc = ess(x[sorted(ca | cb)]) - ess(x[sorted(ca)]) - ess(x[sorted(cb)])
            if best is None or inc < best[0]:
                best = (inc, a, b)
        _, a, b = best
        merged = clusters[a] | clusters[b]
        clusters = [c for i, c in enumerate(clusters) if i not in (a, b)] + [merged]
        parts.append(frozenset(clusters))
    return parts


def partition_of(labels):
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), set()).add(i)
    return frozenset(frozenset(g) for g in groups.values())


def random_indicator(rng, n, q):
    r = rng.integers(0, 2, size=(n, q))
    z = np.empty((n, 2 * q), dtype=int)
    z[:, 0::2] = 1 - r
    z[:, 1::2] = r
    return z
