"""Brute-force shortest vectors for small integer lattices, used as an LLL oracle."""
import itertools

import numpy as np


def coefficient_bounds(basis, radius2):
    """Per-row coefficient bound for lattice vectors of squared length <= radius2.

    A vector ``v = c B`` has ``c = v B^T (B B^T)^-1``, so ``|c_i|`` is at most
    ``|v|`` times the norm of column ``i`` of ``B^T (B B^T)^-1``.
    """
    B = np.array(basis, dtype=float)
    dual = B.T @ np.linalg.inv(B @ B.T)
    r = np.sqrt(radius2)
    return [int(np.floor(r * np.linalg.norm(dual[:, i]) + 1e-6)) + 1 for i in range(len(basis))]


def shortest_norm2(basis, radius2):
    """Squared length of the shortest nonzero vector, searching within ``radius2``."""
    bounds = coefficient_bounds(basis, radius2)
    best = None
    rows = [list(map(int, r)) for r in basis]
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if not any(c):
            continue
        v = [sum(ci * row[k] for ci, row in zip(c, rows)) for k in range(len(rows[0]))]
        n2 = sum(x * x for x in v)
        if best is None or n2 < best:
            best = n2
    return best


def random_lattice(rng, dim):
    """A random nonsingular ``dim x dim`` integer basis, skewed by a unimodular mix."""
    while True:
        B = rng.integers(-40, 41, size=(dim, dim))
        if round(abs(np.linalg.det(B))) != 0:
            break
    U = np.eye(dim, dtype=np.int64)
    for _ in range(3):
        i, j = rng.choice(dim, 2, replace=False) if dim > 1 else (0, 0)
        if i != j:
            U[i] += int(rng.integers(-6, 7)) * U[j]
    return (U @ B).tolist()
