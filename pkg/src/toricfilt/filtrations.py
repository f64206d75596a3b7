"""Per-ray filtration data on a fan and its tensor/dual/sum calculus.

A ray filtration is a full decreasing chain of subspaces of Q^r stored
sparsely by its jumps: pairs (i, S) with strictly increasing indices and
strictly decreasing subspaces.  The chain value at j is the subspace of the
first jump at or after j, the zero space above the last jump, and Q^r at or
below the first jump (fullness forces the first stored subspace to be Q^r).
Constructors normalize (sort, drop zero-dimensional jumps, merge equal
consecutive values keeping the later index) so the representation, and hence
the serialized form, is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import InputError
from .fans import Fan
from .linalg import (
    QMatrix,
    Subspace,
    annihilator,
    span_canonical,
    sum_all,
    tensor_product,
)


@dataclass(frozen=True)
class RayFiltration:
    dim: int
    jumps: Tuple[Tuple[int, Subspace], ...]

    @staticmethod
    def make(dim: int, jumps: Sequence[Tuple[int, Subspace]]) -> "RayFiltration":
        cleaned = []
        seen = set()
        for i, s in jumps:
            if not isinstance(i, int) or isinstance(i, bool):
                raise InputError("jump indices must be integers")
            if s.ambient != dim:
                raise InputError("jump subspace has wrong ambient dimension")
            if i in seen:
                raise InputError(f"duplicate jump index {i}")
            seen.add(i)
            if s.dim > 0:
                cleaned.append((i, s))
        cleaned.sort(key=lambda p: p[0])
        merged: List[Tuple[int, Subspace]] = []
        for i, s in cleaned:
            if merged and merged[-1][1] == s:
                merged[-1] = (i, s)  # equal consecutive values: keep later index
            else:
                merged.append((i, s))
        return RayFiltration(dim, tuple(merged))

    @staticmethod
    def trivial(dim: int) -> "RayFiltration":
        if dim == 0:
            return RayFiltration(0, ())
        return RayFiltration.make(dim, [(0, Subspace.full(dim))])

    def value(self, i: int) -> Subspace:
        for j, s in self.jumps:
            if j >= i:
                return s
        return Subspace.zero(self.dim)

    def jump_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.jumps)

    def level_of(self, v: Sequence) -> int:
        """Largest i with v in the chain at i; requires a nonzero member vector."""
        best = None
        for j, s in self.jumps:
            if s.contains(v):
                best = j
            else:
                break
        if best is None:
            raise ValueError("vector does not belong to the filtration's full space")
        return best

    def issues(self) -> List[dict]:
        out: List[dict] = []
        if self.dim > 0:
            if not self.jumps:
                out.append({"kind": "not_full", "detail": "no jumps, chain is identically zero"})
            elif self.jumps[0][1].dim != self.dim:
                out.append({"kind": "not_full",
                            "detail": "first jump subspace is a proper subspace"})
        for (i1, s1), (i2, s2) in zip(self.jumps, self.jumps[1:]):
            if not s1.contains_subspace(s2):
                out.append({"kind": "not_nested", "indices": [i1, i2]})
            elif s1.dim <= s2.dim:
                out.append({"kind": "not_strictly_decreasing", "indices": [i1, i2]})
        return out


@dataclass(frozen=True)
class FiltrationData:
    """One full decreasing filtration of Q^dim per fan ray."""

    fan: Fan
    dim: int
    filtrations: Tuple[RayFiltration, ...]

    @staticmethod
    def make(fan: Fan, dim: int, filtrations: Sequence[RayFiltration]) -> "FiltrationData":
        if not isinstance(dim, int) or dim < 0:
            raise InputError("fiber dimension must be a nonnegative integer")
        if len(filtrations) != len(fan.rays):
            raise InputError("need exactly one filtration per fan ray")
        for f in filtrations:
            if f.dim != dim:
                raise InputError("ray filtration ambient dimension mismatch")
        return FiltrationData(fan, dim, tuple(filtrations))

    @staticmethod
    def trivial(fan: Fan, dim: int) -> "FiltrationData":
        return FiltrationData.make(
            fan, dim, [RayFiltration.trivial(dim) for _ in fan.rays]
        )

    def ray(self, idx: int) -> RayFiltration:
        return self.filtrations[idx]


@dataclass(frozen=True)
class FiltrationValidationReport:
    valid: bool
    issues: Tuple[dict, ...]


def validate(data: FiltrationData) -> FiltrationValidationReport:
    """Monotone decreasing chains, fullness, and ambient agreement per ray."""
    issues: List[dict] = []
    for idx, f in enumerate(data.filtrations):
        if f.dim != data.dim:
            issues.append({"kind": "ambient_mismatch", "ray": idx})
            continue
        for item in f.issues():
            issues.append({"ray": idx, **item})
    return FiltrationValidationReport(not issues, tuple(issues))


def _require_same_fan(a: FiltrationData, b: FiltrationData) -> None:
    if a.fan != b.fan:
        raise InputError("operands live on different fans")


def tensor(a: FiltrationData, b: FiltrationData) -> FiltrationData:
    """Tensor product: the chain at j is the sum over p+q = j of the tensor
    products of the operand chains, evaluated on the finite jump grids.  The
    ambient Q^(ra*rb) uses the lexicographic e_i⊗f_j basis ordering."""
    _require_same_fan(a, b)
    dim = a.dim * b.dim
    rays: List[RayFiltration] = []
    for fa, fb in zip(a.filtrations, b.filtrations):
        ja, jb = fa.jump_indices(), fb.jump_indices()
        if not ja or not jb:
            rays.append(RayFiltration.make(dim, []))
            continue
        candidates = sorted({p + q for p in ja for q in jb})
        pairs = []
        for j in candidates:
            terms = [tensor_product(fa.value(p), fb.value(j - p)) for p in ja]
            pairs.append((j, sum_all(terms, dim)))
        rays.append(RayFiltration.make(dim, pairs))
    return FiltrationData.make(a.fan, dim, rays)


def dual(a: FiltrationData) -> FiltrationData:
    """Dual convention: the dual chain at i is the annihilator of the primal
    chain at 1 - i.  This makes duality an involution and negates the jump of
    rank-one data."""
    rays: List[RayFiltration] = []
    for f in a.filtrations:
        m = len(f.jumps)
        pairs = []
        for k in range(m):
            i_k = f.jumps[k][0]
            after = f.jumps[k + 1][1] if k + 1 < m else Subspace.zero(a.dim)
            pairs.append((-i_k, annihilator(after)))
        rays.append(RayFiltration.make(a.dim, pairs))
    return FiltrationData.make(a.fan, a.dim, rays)


def _block_embed(s: Subspace, offset: int, total: int) -> List[Tuple]:
    rows = []
    for r in s.basis:
        row = [0] * total
        for j, x in enumerate(r):
            row[offset + j] = x
        rows.append(tuple(row))
    return rows


def direct_sum(a: FiltrationData, b: FiltrationData) -> FiltrationData:
    """Blockwise direct sum on Q^(ra+rb): the chain at i is the block sum of
    the operand chains at i."""
    _require_same_fan(a, b)
    dim = a.dim + b.dim
    rays: List[RayFiltration] = []
    for fa, fb in zip(a.filtrations, b.filtrations):
        candidates = sorted(set(fa.jump_indices()) | set(fb.jump_indices()))
        pairs = []
        for i in candidates:
            rows = _block_embed(fa.value(i), 0, dim) + _block_embed(fb.value(i), a.dim, dim)
            pairs.append((i, span_canonical(rows, dim)))
        rays.append(RayFiltration.make(dim, pairs))
    return FiltrationData.make(a.fan, dim, rays)


def morphism_failure(phi: QMatrix, a: FiltrationData, b: FiltrationData) -> Optional[dict]:
    """First (ray, index) where phi fails to map a chain of `a` into the
    matching chain of `b`, or None.  `phi` is a (dim b) x (dim a) matrix
    acting on column vectors."""
    _require_same_fan(a, b)
    if phi.nrows != b.dim or phi.ncols != a.dim:
        raise InputError("morphism matrix shape does not match the operands")
    for ray_idx, (fa, fb) in enumerate(zip(a.filtrations, b.filtrations)):
        for i in sorted(set(fa.jump_indices()) | set(fb.jump_indices())):
            image_rows = [phi.apply_to_row(v) for v in fa.value(i).basis]
            image = span_canonical(image_rows, b.dim)
            if not fb.value(i).contains_subspace(image):
                return {"ray": ray_idx, "index": i}
    return None


def check_morphism(phi: QMatrix, a: FiltrationData, b: FiltrationData) -> bool:
    return morphism_failure(phi, a, b) is None


def change_basis(data: FiltrationData, m: QMatrix) -> FiltrationData:
    """Rewrite all subspaces in new coordinates: a fiber vector v becomes
    v @ m (row convention).  `m` must be invertible of size dim."""
    if m.nrows != data.dim or m.ncols != data.dim or not m.is_invertible():
        raise InputError("basis change must be an invertible dim x dim matrix")
    rays = []
    for f in data.filtrations:
        pairs = []
        for i, s in f.jumps:
            rows = [tuple(x for x in (QMatrix((v,), data.dim) @ m).entries[0]) for v in s.basis]
            pairs.append((i, span_canonical(rows, data.dim)))
        rays.append(RayFiltration.make(data.dim, pairs))
    return FiltrationData.make(data.fan, data.dim, rays)
