"""Built-in named point sets."""

from __future__ import annotations

import numpy as np

from .cube import all_vertices

# edges of K_4 in the coordinate order used by cut_polytope_k4
K4_EDGES = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def cube(d: int = 3) -> np.ndarray:
    return all_vertices(d)


def cut_polytope_k4() -> np.ndarray:
    """The 8 cut vectors of K_4: coordinate uv is 1 iff the cut separates u and v."""
    rows = []
    for mask in range(8):
        side = {1: 0, 2: (mask >> 0) & 1, 3: (mask >> 1) & 1, 4: (mask >> 2) & 1}
        rows.append([int(side[u] != side[v]) for u, v in K4_EDGES])
    return np.array(rows, dtype=np.uint8)


def simplex(d: int) -> np.ndarray:
    """0 and the unit vectors of R^d."""
    return np.vstack([np.zeros((1, d), dtype=np.uint8), np.eye(d, dtype=np.uint8)])


NAMED = {
    "cube": lambda: cube(3),
    "cut-k4": cut_polytope_k4,
    "simplex": lambda: simplex(3),
}


def named(name: str) -> np.ndarray:
    try:
        return NAMED[name]()
    except KeyError:
        raise ValueError(f"unknown instance {name!r}; choose from {sorted(NAMED)}") from None
