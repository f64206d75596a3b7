"""Equivariant reduction of structure group for two concrete subgroups of
GL(n): SL(n) and the diagonal torus.

The SL criterion is decided on the given presentation: every cone's
characters must sum to zero (this makes the determinant of each homomorphism
the trivial character), and frames are rescaled into SL by dividing one
column by the determinant.  The verdict NO-IN-PRESENTATION deliberately does
not claim non-reducibility in any other presentation.

Torus reduction searches for a splitting of the associated filtration data
into rank-one summands.  The candidate line universe is the set of
one-dimensional intersections of pairs of filtration subspaces together with
all frame columns; exhaustivity is claimed only within that universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from .bundles import CocharBundleData, GroupSpec, associated_klyachko, check_gluing
from .errors import PreconditionError
from .filtrations import FiltrationData
from .lattice import primitive_vector, solve_integer
from .linalg import (
    Eliminator,
    QMatrix,
    Subspace,
    intersect,
    span_canonical,
    sum_all,
)

SL_REDUCES = "REDUCES"
SL_NO = "NO-IN-PRESENTATION"
TORUS_REDUCES = "REDUCES"
TORUS_NONE = "NONE-FOUND"


@dataclass(frozen=True)
class SlReductionResult:
    verdict: str
    sl_presentation: Optional[CocharBundleData] = None
    failing_cone: Optional[int] = None
    character_sum: Optional[Tuple[int, ...]] = None


def check_sl_reduction(data: CocharBundleData) -> SlReductionResult:
    if data.group.kind != "GL":
        raise PreconditionError("SL reduction is decided for GL bundles")
    rank = data.fan.rank
    for k, cone_chars in enumerate(data.chars):
        total = tuple(sum(u[j] for u in cone_chars) for j in range(rank))
        if any(x != 0 for x in total):
            return SlReductionResult(SL_NO, failing_cone=k, character_sum=total)
    # rescale the first column of each frame by 1/det to land in SL; a
    # diagonal factor commutes with the character diagonal, so the presented
    # homomorphisms are unchanged
    frames = []
    for f in data.frames:
        d = f.det()
        rows = [
            tuple((x / d if j == 0 else x) for j, x in enumerate(row))
            for row in f.entries
        ]
        frames.append(QMatrix.from_rows(rows))
    sl_data = CocharBundleData.make(
        GroupSpec("SL", data.group.n), data.fan, frames, data.chars
    )
    return SlReductionResult(SL_REDUCES, sl_presentation=sl_data)


@dataclass(frozen=True)
class TorusReductionResult:
    verdict: str
    lines: Optional[Tuple[Tuple[int, ...], ...]] = None
    line_levels: Optional[Tuple[Tuple[int, ...], ...]] = None  # per line, per ray
    universe_size: int = 0


def _line_candidates(data: CocharBundleData, kly: FiltrationData) -> List[Subspace]:
    n = data.group.n
    values: List[Subspace] = []
    for f in kly.filtrations:
        for _, s in f.jumps:
            values.append(s)
    lines: Dict[tuple, Subspace] = {}

    def keep(s: Subspace):
        if s.dim == 1:
            lines.setdefault(s.basis, s)

    for a, b in itertools.combinations_with_replacement(values, 2):
        keep(intersect(a, b))
    for frame in data.frames:
        for c in range(n):
            keep(span_canonical([frame.col(c)], n))
    return [lines[k] for k in sorted(lines)]


def _line_level(line: Subspace, chain) -> Optional[int]:
    v = line.basis[0]
    best = None
    for i, s in chain.jumps:
        if s.contains(v):
            best = i
        else:
            break
    return best


def check_torus_reduction(data: CocharBundleData) -> TorusReductionResult:
    """Search for n lines splitting the associated filtration data into valid
    rank-one summands.  A splitting must reproduce every chain exactly and
    each line's per-ray levels must admit an integral character on every
    maximal cone (rank-one compatibility)."""
    if data.group.kind != "GL":
        raise PreconditionError("torus reduction is decided for GL bundles")
    if not check_gluing(data).glues:
        raise PreconditionError("bundle data does not glue; reduction undefined")
    kly = associated_klyachko(data)
    n = data.group.n
    fan = data.fan
    candidates = _line_candidates(data, kly)

    levels: List[Optional[Tuple[int, ...]]] = []
    usable: List[int] = []
    for ci, line in enumerate(candidates):
        per_ray = []
        ok = True
        for f in kly.filtrations:
            lv = _line_level(line, f)
            if lv is None:
                ok = False
                break
            per_ray.append(lv)
        if not ok:
            levels.append(None)
            continue
        # rank-one compatibility: integral character on every maximal cone
        for idx in fan.maximal_cones:
            rows = [fan.rays[i] for i in idx]
            target = [per_ray[i] for i in idx]
            if solve_integer(rows, target) is None:
                ok = False
                break
        levels.append(tuple(per_ray) if ok else None)
        if ok:
            usable.append(ci)

    for combo in itertools.combinations(usable, n):
        elim = Eliminator(n)
        if not all(elim.add(candidates[c].basis[0]) for c in combo):
            continue
        if not _splitting_reconstructs(kly, [candidates[c] for c in combo],
                                       [levels[c] for c in combo]):
            continue
        lines = tuple(
            primitive_line(candidates[c]) for c in combo
        )
        return TorusReductionResult(
            TORUS_REDUCES,
            lines=lines,
            line_levels=tuple(levels[c] for c in combo),
            universe_size=len(candidates),
        )
    return TorusReductionResult(TORUS_NONE, universe_size=len(candidates))


def primitive_line(line: Subspace) -> Tuple[int, ...]:
    v = line.basis[0]
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    return primitive_vector([int(x * denom) for x in v])


def _splitting_reconstructs(kly: FiltrationData, lines: List[Subspace],
                            levels: List[Tuple[int, ...]]) -> bool:
    n = kly.dim
    for ray_idx, chain in enumerate(kly.filtrations):
        probe = sorted(set(chain.jump_indices()) | {lv[ray_idx] for lv in levels})
        probe.append(max(probe) + 1)
        for i in probe:
            expected = chain.value(i)
            got = sum_all(
                [line for line, lv in zip(lines, levels) if lv[ray_idx] >= i], n
            )
            if expected != got:
                return False
    return True
