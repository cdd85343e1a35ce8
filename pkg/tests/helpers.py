"""Shared test utilities: brute-force oracles and instance generators."""

from itertools import combinations

import numpy as np

from wl1ball import ProblemInstance


def brute_force_weighted_simplex(y, w, a):
    """Solve the weighted-simplex projection by enumerating every support.

    For each nonempty candidate support S, the threshold would be
    (sum_S w y - a) / (sum_S w^2); the candidate is consistent when the
    thresholded vector is positive exactly on S.  Only usable for tiny d.
    Returns (x, lam).
    """
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    d = y.size
    assert d <= 16, "enumeration oracle is exponential"
    z = y / w
    best = None
    for r in range(1, d + 1):
        for support in combinations(range(d), r):
            s = list(support)
            lam = (np.sum(w[s] * y[s]) - a) / np.sum(w[s] ** 2)
            x = np.maximum(y - w * lam, 0.0)
            pos = set(np.flatnonzero(z > lam + 1e-15).tolist())
            if pos == set(s) and abs(np.sum(w * x) - a) <= 1e-9 * max(a, 1.0):
                best = (x, lam)
    assert best is not None, "no consistent support found"
    return best


def random_instance(rng, d=None, dist="mixed", tie_prone=False):
    """Draw one random problem instance for cross-checking."""
    if d is None:
        d = int(rng.integers(1, 400))
    kind = dist
    if dist == "mixed":
        kind = rng.choice(["uniform", "gauss1", "gauss3"])
    if kind == "uniform":
        y = rng.random(d)
    elif kind == "gauss1":
        y = rng.normal(0.0, 0.1, d)
    else:
        y = rng.normal(0.0, 1e-3, d)
    if tie_prone:
        # Dyadic values and power-of-two weights make the ratios exactly
        # representable, so ties are exact.
        z = rng.integers(-8, 9, d) / 8.0
        w = 2.0 ** rng.integers(-2, 3, d)
        y = z * w
    else:
        w = rng.random(d) + 1e-9
    a = float(10 ** rng.uniform(-2, 2))
    return ProblemInstance(y, w, a)
