"""Slow, independent reference computations used only by the tests."""

import itertools

import numpy as np


def simplex_grid(J, resolution):
    """All points of the (J-1)-simplex with coordinates on a ``resolution`` lattice."""
    n = int(round(1 / resolution))
    if J == 1:
        return np.ones((1, 1))
    if J == 2:
        a = np.arange(n + 1) / n
        return np.column_stack([a, 1 - a])
    if J == 3:
        i, j = np.triu_indices(n + 1)
        # i <= j: a = i/n, b = (j - i)/n, c = 1 - j/n
        return np.column_stack([i / n, (j - i) / n, 1 - j / n])
    raise ValueError("grid oracle only handles J <= 3")


def hull_distance_grid(A, z, resolution=1e-3):
    """min over lattice points r of ||A r - z||^2."""
    A = np.asarray(A, dtype=float)
    z = np.asarray(z, dtype=float)
    P = simplex_grid(A.shape[1], resolution)
    recon = P @ A.T  # points x N
    return float(np.min(np.sum((recon - z) ** 2, axis=1)))


def greedy_pairs_reference(A, B):
    """Greedy matching re-done with plain Python loops over every (j, k).

    Agreement is counted element by element; the first strictly larger value
    in (j, k) scan order wins, which is the lexicographic tie rule.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    N, J = A.shape
    K = B.shape[1]
    rho = [[sum(1 for i in range(N) if A[i, j] == B[i, k]) / N for k in range(K)] for j in range(J)]
    used_j, used_k, pairs = set(), set(), []
    while len(pairs) < min(J, K):
        best = None
        for j in range(J):
            if j in used_j:
                continue
            for k in range(K):
                if k in used_k:
                    continue
                if best is None or rho[j][k] > best[2]:
                    best = (j, k, rho[j][k])
        pairs.append(best)
        used_j.add(best[0])
        used_k.add(best[1])
    return pairs


def optimal_l0_distance(A, B):
    """Exhaustive minimum of the one-to-one 0/1 reconstruction error over all partial matchings of size min(J, K)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    J, K = A.shape[1], B.shape[1]
    best = np.inf
    if J >= K:
        for js in itertools.permutations(range(J), K):
            err = sum(np.sum((A[:, j] - B[:, k]) ** 2) for k, j in enumerate(js))
            best = min(best, err)
    else:
        for ks in itertools.permutations(range(K), J):
            err = sum(np.sum((A[:, j] - B[:, k]) ** 2) for j, k in enumerate(ks))
            err += sum(np.sum(B[:, k] ** 2) for k in range(K) if k not in ks)
            best = min(best, err)
    return best / K


def isotonic_minmax(y):
    """Nondecreasing least-squares fit via the max-min formula
    ``f_i = max_{a<=i} min_{b>=i} mean(y[a..b])``."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    out = np.empty(n)
    for i in range(n):
        out[i] = max(min(y[a : b + 1].mean() for b in range(i, n)) for a in range(i + 1))
    return out
