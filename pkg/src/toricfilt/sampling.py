"""Deterministic random instance generators for self-tests and the test
suite.  All functions take an explicit random.Random so runs are reproducible
from a seed."""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .bundles import CocharBundleData, GroupSpec
from .fans import Fan
from .filtrations import FiltrationData, RayFiltration
from .lattice import solve_integer
from .linalg import QMatrix, span_canonical


def p1_fan() -> Fan:
    return Fan.make(1, [[1], [-1]], [[0], [1]])


def p2_fan() -> Fan:
    return Fan.make(2, [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [0, 2]])


def square_cone_fan() -> Fan:
    """Single non-simplicial maximal cone over the unit square at height one."""
    return Fan.make(
        3,
        [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]],
        [[0, 1, 2, 3]],
    )


def random_invertible_matrix(rng: random.Random, n: int,
                             lo: int = -2, hi: int = 2) -> QMatrix:
    while True:
        rows = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        m = QMatrix.from_rows(rows)
        if m.det() != 0:
            return m


def random_chars(rng: random.Random, n: int, rank: int,
                 lo: int = -3, hi: int = 3) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(rng.randint(lo, hi) for _ in range(rank)) for _ in range(n))


def random_bundle(rng: random.Random, fan: Fan, n: int,
                  char_lo: int = -3, char_hi: int = 3,
                  frame_lo: int = -2, frame_hi: int = 2) -> CocharBundleData:
    """GL(n) data with independent random frames and characters per cone."""
    frames = [random_invertible_matrix(rng, n, frame_lo, frame_hi)
              for _ in fan.maximal_cones]
    chars = [random_chars(rng, n, fan.rank, char_lo, char_hi)
             for _ in fan.maximal_cones]
    return CocharBundleData.make(GroupSpec("GL", n), fan, frames, chars)


def random_split_bundle(rng: random.Random, fan: Fan, n: int,
                        level_lo: int = -3, level_hi: int = 3,
                        frame: Optional[QMatrix] = None) -> CocharBundleData:
    """GL(n) data built from per-ray integer levels with a common frame: the
    k-th frame column carries level `levels[ray][k]` on each ray, and each
    cone's characters solve the corresponding integral systems.  On smooth
    fans the systems are always solvable, and the result glues (it is an
    equivariant sum of line bundles)."""
    if frame is None:
        frame = random_invertible_matrix(rng, n)
    levels = [
        [rng.randint(level_lo, level_hi) for _ in range(n)] for _ in fan.rays
    ]
    chars: List[Tuple[Tuple[int, ...], ...]] = []
    for idx in fan.maximal_cones:
        rows = [fan.rays[i] for i in idx]
        cone_chars = []
        for k in range(n):
            target = [levels[i][k] for i in idx]
            u = solve_integer(rows, target)
            if u is None:
                raise ValueError("level system not integrally solvable; use a smooth fan")
            cone_chars.append(u)
        chars.append(tuple(cone_chars))
    frames = [frame for _ in fan.maximal_cones]
    return CocharBundleData.make(GroupSpec("GL", n), fan, frames, chars)


def random_subspace(rng: random.Random, ambient: int, dim: int):
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(ambient)] for _ in range(dim)]
        s = span_canonical(rows, ambient) if rows else span_canonical([], ambient)
        if s.dim == dim:
            return s


def random_ray_filtration(rng: random.Random, dim: int,
                          index_lo: int = -2, index_hi: int = 2) -> RayFiltration:
    """Random full decreasing chain built from a random flag."""
    flag_matrix = random_invertible_matrix(rng, dim, -3, 3)
    dims = sorted(rng.sample(range(1, dim + 1), rng.randint(1, dim)), reverse=True)
    if dims[0] != dim:
        dims = [dim] + dims
    indices = sorted(rng.sample(range(index_lo, index_hi + 1), len(dims)))
    jumps = []
    for i, d in zip(indices, dims):
        jumps.append((i, span_canonical(flag_matrix.entries[:d], dim)))
    return RayFiltration.make(dim, jumps)


def random_filtration_data(rng: random.Random, fan: Fan, dim: int,
                           index_lo: int = -2, index_hi: int = 2) -> FiltrationData:
    return FiltrationData.make(
        fan, dim,
        [random_ray_filtration(rng, dim, index_lo, index_hi) for _ in fan.rays],
    )
