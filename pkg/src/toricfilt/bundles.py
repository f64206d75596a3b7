"""Equivariant principal-bundle data: one torus homomorphism into the group
per maximal cone, presented in diagonalized form as an invertible frame plus
a tuple of characters.  Transitions are exact Laurent-monomial matrices; the
gluing check is entrywise regularity of both transition directions on each
overlap cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, PreconditionError
from .fans import Fan, cone_intersection, dual_membership
from .filtrations import FiltrationData, RayFiltration
from .compatibility import ConeDecomposition
from .linalg import QMatrix, span_canonical

IntVec = Tuple[int, ...]

GROUP_KINDS = ("GL", "SL", "DT")


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "GL" | "SL" | "DT" (diagonal torus)
    n: int

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise InputError(f"unknown group kind {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError("matrix size must be a positive integer")

    def contains(self, m: QMatrix) -> bool:
        if m.nrows != self.n or m.ncols != self.n:
            return False
        if self.kind == "GL":
            return m.det() != 0
        if self.kind == "SL":
            return m.det() == 1
        # diagonal torus: diagonal with nonzero diagonal entries
        for i in range(self.n):
            for j in range(self.n):
                entry = m.entries[i][j]
                if i == j and entry == 0:
                    return False
                if i != j and entry != 0:
                    return False
        return True


@dataclass(frozen=True)
class CocharBundleData:
    """Frame + character presentation of the per-maximal-cone homomorphisms.
    `frames[k]` and `chars[k]` belong to fan.maximal_cones[k]; chars[k] is an
    n-tuple of integer character vectors of length fan.rank."""

    group: GroupSpec
    fan: Fan
    frames: Tuple[QMatrix, ...]
    chars: Tuple[Tuple[IntVec, ...], ...]

    @staticmethod
    def make(group: GroupSpec, fan: Fan,
             frames: Sequence[QMatrix],
             chars: Sequence[Sequence[Sequence[int]]]) -> "CocharBundleData":
        if len(frames) != len(fan.maximal_cones) or len(chars) != len(fan.maximal_cones):
            raise InputError("need exactly one frame and one character tuple per maximal cone")
        frames_t = tuple(frames)
        chars_t = []
        for cone_chars in chars:
            if len(cone_chars) != group.n:
                raise InputError("character tuple length must equal the matrix size")
            rows = []
            for u in cone_chars:
                row = tuple(u)
                if len(row) != fan.rank or not all(
                    isinstance(x, int) and not isinstance(x, bool) for x in row
                ):
                    raise InputError("characters must be integer vectors of length rank")
                rows.append(row)
            chars_t.append(tuple(rows))
        for f in frames_t:
            if f.nrows != group.n or f.ncols != group.n:
                raise InputError("frame has wrong shape")
        return CocharBundleData(group, fan, frames_t, tuple(chars_t))


@dataclass(frozen=True)
class BundleValidationReport:
    valid: bool
    issues: Tuple[dict, ...]


def validate_bundle(data: CocharBundleData) -> BundleValidationReport:
    """Frames invertible and inside the group; for SL the characters of each
    cone must sum to zero (forced by det of the homomorphism); for the
    diagonal torus the frame must itself be diagonal."""
    issues: List[dict] = []
    for k, (frame, cone_chars) in enumerate(zip(data.frames, data.chars)):
        if not frame.is_invertible():
            issues.append({"kind": "singular_frame", "cone": k})
            continue
        if not data.group.contains(frame):
            issues.append({"kind": "frame_not_in_group", "cone": k})
        if data.group.kind == "SL":
            total = tuple(sum(u[j] for u in cone_chars) for j in range(data.fan.rank))
            if any(x != 0 for x in total):
                issues.append({"kind": "character_sum_nonzero", "cone": k,
                               "sum": list(total)})
    return BundleValidationReport(not issues, tuple(issues))


class LaurentMatrix:
    """Square matrix whose entries are finite sums of Laurent monomials in the
    torus characters: dict mapping exponent vector -> nonzero coefficient."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: Sequence[Sequence[Dict[IntVec, Fraction]]]):
        self.n = n
        self.entries = tuple(
            tuple({e: c for e, c in cell.items() if c != 0} for cell in row)
            for row in entries
        )

    @staticmethod
    def identity(n: int, rank: int) -> "LaurentMatrix":
        zero_exp = tuple([0] * rank)
        return LaurentMatrix(
            n,
            [[{zero_exp: Fraction(1)} if i == j else {} for j in range(n)]
             for i in range(n)],
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentMatrix) and self.n == other.n \
            and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, tuple(tuple(frozenset(c.items()) for c in row)
                                   for row in self.entries)))

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.n != other.n:
            raise ValueError("Laurent matrix sizes differ")
        n = self.n
        out = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for k in range(n):
                left = self.entries[i][k]
                if not left:
                    continue
                for j in range(n):
                    right = other.entries[k][j]
                    if not right:
                        continue
                    cell = out[i][j]
                    for e1, c1 in left.items():
                        for e2, c2 in right.items():
                            e = tuple(a + b for a, b in zip(e1, e2))
                            c = cell.get(e, Fraction(0)) + c1 * c2
                            if c == 0:
                                cell.pop(e, None)
                            else:
                                cell[e] = c
        return LaurentMatrix(n, out)

    def exponents(self):
        """All stored exponents with their entry positions, row major."""
        for i in range(self.n):
            for j in range(self.n):
                for e in sorted(self.entries[i][j]):
                    yield (i, j), e


def transition(data: CocharBundleData, s: int, t: int) -> LaurentMatrix:
    """Symbolic expansion of the transition between two maximal-cone charts:
    the homomorphism of chart s composed with the inverse of chart t, in the
    global fiber coordinates.  Entry (i, j) collects exponents drawn from the
    pairwise character differences of the two cones."""
    ncones = len(data.fan.maximal_cones)
    if not (0 <= s < ncones and 0 <= t < ncones):
        raise InputError("unknown maximal cone index")
    n = data.group.n
    g_s, g_t = data.frames[s], data.frames[t]
    middle = g_s.inverse() @ g_t
    g_t_inv = g_t.inverse()
    u_s, u_t = data.chars[s], data.chars[t]
    out = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cell: Dict[IntVec, Fraction] = {}
            for k in range(n):
                a = g_s.entries[i][k]
                if a == 0:
                    continue
                for l in range(n):
                    coeff = a * middle.entries[k][l] * g_t_inv.entries[l][j]
                    if coeff == 0:
                        continue
                    e = tuple(x - y for x, y in zip(u_s[k], u_t[l]))
                    c = cell.get(e, Fraction(0)) + coeff
                    if c == 0:
                        cell.pop(e, None)
                    else:
                        cell[e] = c
            out[i][j] = cell
    return LaurentMatrix(n, out)


@dataclass(frozen=True)
class GluingReport:
    glues: bool
    witness: Optional[dict] = None  # pair, entry, exponent, violated ray


def check_gluing(data: CocharBundleData) -> GluingReport:
    """Every stored exponent of both transition directions must be regular on
    the overlap cone of each pair of maximal cones.  Reports the first
    failure in deterministic order (pairs by index, entries row major,
    exponents sorted).  Requires all maximal cones top-dimensional, the
    standing assumption of the per-cone trivialization picture."""
    fan = data.fan
    cones = [fan.maximal_cone(k) for k in range(len(fan.maximal_cones))]
    for k, cone in enumerate(cones):
        if cone.dim != fan.rank:
            raise PreconditionError(
                f"maximal cone {k} is not top-dimensional; gluing undefined"
            )
    for s, t in itertools.combinations(range(len(cones)), 2):
        overlap = cone_intersection(cones[s], cones[t])
        for a, b in ((s, t), (t, s)):
            lm = transition(data, a, b)
            for (i, j), e in lm.exponents():
                if not dual_membership(e, overlap):
                    bad_ray = next(
                        g for g in overlap.generators
                        if sum(x * y for x, y in zip(e, g)) < 0
                    )
                    return GluingReport(False, {
                        "pair": [s, t],
                        "direction": [a, b],
                        "entry": [i, j],
                        "exponent": list(e),
                        "ray": list(bad_ray),
                    })
    return GluingReport(True)


def cocycle_check(data: CocharBundleData) -> bool:
    """transition(s,t) @ transition(t,u) == transition(s,u) for all triples.
    An algebraic identity; exercises collection and product code."""
    ncones = len(data.fan.maximal_cones)
    trans = {
        (s, t): transition(data, s, t)
        for s in range(ncones) for t in range(ncones)
    }
    for s in range(ncones):
        for t in range(ncones):
            for u in range(ncones):
                if trans[(s, t)] @ trans[(t, u)] != trans[(s, u)]:
                    return False
    return True


class RayConsistencyError(ValueError):
    """Two maximal cones sharing a ray induce different chains on it."""

    def __init__(self, cone_a: int, cone_b: int, ray: int, index: int):
        super().__init__(
            f"cones {cone_a} and {cone_b} induce different chains on ray {ray} "
            f"at index {index}"
        )
        self.witness = {"cones": [cone_a, cone_b], "ray": ray, "index": index}


def _chain_from_cone(data: CocharBundleData, k: int, ray_idx: int) -> RayFiltration:
    n = data.group.n
    ray = data.fan.rays[ray_idx]
    frame = data.frames[k]
    levels = [sum(c * g for c, g in zip(u, ray)) for u in data.chars[k]]
    pairs = []
    for v in sorted(set(levels)):
        cols = [frame.col(c) for c in range(n) if levels[c] >= v]
        pairs.append((v, span_canonical(cols, n)))
    return RayFiltration.make(n, pairs)


def associated_klyachko(data: CocharBundleData) -> FiltrationData:
    """Filtration data of the associated standard-representation bundle: on a
    ray of a maximal cone the chain at i is the span of the frame columns
    whose character pairs at least i against the ray.  Raises
    RayConsistencyError when two cones sharing a ray disagree; this is the
    same obstruction check_gluing detects."""
    fan = data.fan
    n = data.group.n
    chains: Dict[int, Tuple[int, RayFiltration]] = {}
    for k, idx in enumerate(fan.maximal_cones):
        for ray_idx in idx:
            chain = _chain_from_cone(data, k, ray_idx)
            if ray_idx not in chains:
                chains[ray_idx] = (k, chain)
            else:
                first_cone, existing = chains[ray_idx]
                if existing != chain:
                    probe = sorted(
                        set(existing.jump_indices()) | set(chain.jump_indices())
                    )
                    probe.append(max(probe) + 1)
                    bad = next(
                        i for i in probe if existing.value(i) != chain.value(i)
                    )
                    raise RayConsistencyError(first_cone, k, ray_idx, bad)
    missing = [i for i in range(len(fan.rays)) if i not in chains]
    if missing:
        raise InputError(f"ray {missing[0]} lies in no maximal cone")
    return FiltrationData.make(
        fan, n, [chains[i][1] for i in range(len(fan.rays))]
    )


def canonical_cone_decomposition(data: CocharBundleData, k: int) -> ConeDecomposition:
    """The decomposition induced by the frame columns of cone k, graded by the
    character classes of its quotient lattice."""
    fan = data.fan
    idx = fan.maximal_cones[k]
    cone = fan.maximal_cone(k)
    quotient = cone.quotient()
    n = data.group.n
    groups: Dict[IntVec, List[int]] = {}
    reps: Dict[IntVec, IntVec] = {}
    for c, u in enumerate(data.chars[k]):
        rep = quotient.canonical_representative(u)
        key = quotient.class_index(rep)
        groups.setdefault(key, []).append(c)
        reps[key] = rep
    pieces = tuple(sorted(
        (reps[key], span_canonical([data.frames[k].col(c) for c in cols], n))
        for key, cols in groups.items()
    ))
    return ConeDecomposition(tuple(idx), pieces)


def determinant_data(data: CocharBundleData) -> CocharBundleData:
    """GL(1) data of the determinant: characters add up, frames map to det."""
    if data.group.kind != "GL":
        raise PreconditionError("determinant data requires a GL bundle")
    frames = []
    chars = []
    for k in range(len(data.fan.maximal_cones)):
        frames.append(QMatrix.from_rows([[data.frames[k].det()]]))
        chars.append([tuple(
            sum(u[j] for u in data.chars[k]) for j in range(data.fan.rank)
        )])
    return CocharBundleData.make(GroupSpec("GL", 1), data.fan, frames, chars)
