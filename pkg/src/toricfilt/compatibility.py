"""Per-cone compatibility of filtration data, with certificates.

Compatibility of the ray chains of a cone means: the fiber decomposes into
pieces graded by character classes of the cone's quotient lattice such that
every ray chain is the sum of the pieces whose character pairs at least the
chain index against that ray (the reconstruction equation).

The decision procedure is three-valued:

1. Certificate path.  Over the finite grid of jump tuples t, form the
   intersections W(t) of the ray chains and carve out graded pieces as
   deterministic complements of the part covered by strictly dominating
   tuples, processing tuples along a fixed linear extension of componentwise
   dominance.  If the pieces span directly, each nonzero piece's tuple is
   realized by an integral character, and the reconstruction equation
   re-verifies exactly, the decomposition is returned as a certificate.
   Certificates are always re-verified, never assumed.

2. Refutation path.  A nonzero graded piece whose tuple admits no integral
   character, or a distributivity failure A∩(B+C) != (A∩B)+(A∩C) in the
   subspace lattice generated by the chains, is returned as a witness.
   (Both are sound: an actual grading forces integral characters on every
   realized tuple and makes the generated lattice distributive.)

3. Fallback.  Below the dimension cap an exhaustive search over adapted
   decompositions acts as oracle; above the cap the checker answers
   "inconclusive" rather than guess.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError
from .fans import Cone, CharQuotient
from .filtrations import FiltrationData
from .linalg import (
    Eliminator,
    Subspace,
    complement_in,
    intersect,
    intersect_all,
    span_canonical,
    subspace_sum,
    sum_all,
    tensor_product,
)
from .lattice import solve_integer

VERDICT_CERTIFICATE = "certificate"
VERDICT_REFUTATION = "refutation"
VERDICT_INCONCLUSIVE = "inconclusive"

_LATTICE_SIZE_CAP = 48
_LATTICE_SCAN_CAP = 16


@dataclass(frozen=True)
class ConeDecomposition:
    """Certificate: graded pieces (character representative, subspace),
    sorted by character.  Characters are canonical representatives of their
    classes modulo the cone's perpendicular lattice."""

    ray_indices: Tuple[int, ...]
    pieces: Tuple[Tuple[Tuple[int, ...], Subspace], ...]


@dataclass(frozen=True)
class Refutation:
    kind: str      # "integrality" | "distributivity" | "exhausted"
    detail: dict


@dataclass(frozen=True)
class ConeCompatibility:
    ray_indices: Tuple[int, ...]
    verdict: str
    certificate: Optional[ConeDecomposition] = None
    refutation: Optional[Refutation] = None


def _sorted_cone_rays(data: FiltrationData, ray_indices: Sequence[int]) -> Tuple[int, ...]:
    idx = tuple(sorted(ray_indices))
    if len(set(idx)) != len(idx):
        raise InputError("repeated ray index in cone")
    if not all(0 <= i < len(data.fan.rays) for i in idx):
        raise InputError("cone not in fan: unknown ray index")
    return idx


def _cone_of(data: FiltrationData, idx: Tuple[int, ...]) -> Cone:
    cone = data.fan.cone(idx)
    if idx and set(cone.generators) != {data.fan.rays[i] for i in idx}:
        raise InputError("cone not in fan: listed rays are not its extreme rays")
    return cone


def _grid(data: FiltrationData, idx: Tuple[int, ...]):
    filts = [data.ray(i) for i in idx]
    for i, f in zip(idx, filts):
        if data.dim > 0 and not f.jumps:
            raise InputError(f"ray {i} carries no jumps; data is not a full filtration")
    tuples = list(itertools.product(*[f.jump_indices() for f in filts]))
    tuples.sort(key=lambda t: (-sum(t), t))  # linear extension of dominance
    return filts, tuples


def verify_cone_decomposition(data: FiltrationData,
                              ray_indices: Sequence[int],
                              dec: ConeDecomposition) -> Optional[str]:
    """Exact re-verification of a certificate; returns a reason on failure."""
    idx = _sorted_cone_rays(data, ray_indices)
    cone = _cone_of(data, idx)
    quotient = cone.quotient()
    r = data.dim

    total = 0
    for char, piece in dec.pieces:
        if piece.ambient != r or piece.dim == 0:
            return "certificate contains an empty or mismatched piece"
        if len(char) != data.fan.rank:
            return "character has wrong length"
        total += piece.dim
    if total != r:
        return "piece dimensions do not add up to the fiber dimension"
    if sum_all([p for _, p in dec.pieces], r).dim != r:
        return "pieces do not span the fiber"
    classes = [quotient.class_index(char) for char, _ in dec.pieces]
    if len(set(classes)) != len(classes):
        return "character classes are not pairwise distinct"

    for k, ray_idx in enumerate(idx):
        ray = data.fan.rays[ray_idx]
        chain = data.ray(ray_idx)
        pairings = [sum(c * g for c, g in zip(char, ray)) for char, _ in dec.pieces]
        candidates = sorted(set(chain.jump_indices()) | set(pairings))
        if candidates:
            candidates.append(max(candidates) + 1)
        for i in candidates:
            expected = chain.value(i)
            got = sum_all(
                [piece for (char, piece), p in zip(dec.pieces, pairings) if p >= i], r
            )
            if expected != got:
                return f"reconstruction fails on ray {ray_idx} at index {i}"
    return None


def _greedy_pieces(data: FiltrationData, idx: Tuple[int, ...]):
    filts, tuples = _grid(data, idx)
    r = data.dim
    w: Dict[Tuple[int, ...], Subspace] = {}
    for t in tuples:
        w[t] = intersect_all(
            [f.value(ti) for f, ti in zip(filts, t)], r
        ) if t else Subspace.full(r)
    # covered(t) = sum of W over the strict up-set of t; every strictly
    # dominating tuple lies above an immediate successor, so the sums
    # decompose over successors and memoize along the linear extension
    next_value = [
        {a: b for a, b in zip(f.jump_indices(), f.jump_indices()[1:])}
        for f in filts
    ]
    covered: Dict[Tuple[int, ...], Subspace] = {}
    pieces: Dict[Tuple[int, ...], Subspace] = {}
    for t in tuples:
        rows = []
        for k in range(len(t)):
            up = next_value[k].get(t[k])
            if up is None:
                continue
            s = t[:k] + (up,) + t[k + 1:]
            rows.extend(covered[s].basis)
            rows.extend(w[s].basis)
        above = span_canonical(rows, r)
        covered[t] = above
        pieces[t] = complement_in(intersect(above, w[t]), w[t])
    return filts, tuples, w, pieces


def _integral_character(data: FiltrationData, idx: Tuple[int, ...],
                        t: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    if not idx:
        return tuple([0] * data.fan.rank)
    rows = [data.fan.rays[i] for i in idx]
    return solve_integer(rows, list(t))


def _distributivity_witness(generators: List[Subspace], ambient: int) -> Optional[dict]:
    elems: List[Subspace] = []
    seen = set()
    for s in sorted(set(generators), key=lambda s: (s.dim, s.basis)):
        if s.basis not in seen:
            seen.add(s.basis)
            elems.append(s)
    # bounded closure under + and ∩, each unordered pair processed once; the
    # full closure can be infinite for four or more generators, so this is
    # refutation evidence only
    i = 1
    while i < len(elems) and len(elems) < _LATTICE_SIZE_CAP:
        for j in range(i):
            for c in (subspace_sum(elems[i], elems[j]), intersect(elems[i], elems[j])):
                if c.basis not in seen:
                    seen.add(c.basis)
                    elems.append(c)
                    if len(elems) >= _LATTICE_SIZE_CAP:
                        break
            if len(elems) >= _LATTICE_SIZE_CAP:
                break
        i += 1
    scan = elems[:_LATTICE_SCAN_CAP]
    n = len(scan)
    # subspace lattices are modular, so any triple with two comparable
    # members satisfies distributivity automatically; only fully
    # incomparable triples can witness a failure
    le = [[i != j and scan[j].contains_subspace(scan[i]) for j in range(n)]
          for i in range(n)]

    def comparable(i, j):
        return le[i][j] or le[j][i]

    sums: Dict[Tuple[int, int], Subspace] = {}
    inters: Dict[Tuple[int, int], Subspace] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if not comparable(i, j):
                sums[(i, j)] = subspace_sum(scan[i], scan[j])
                inters[(i, j)] = intersect(scan[i], scan[j])

    def pair(table, i, j):
        return table[(i, j) if i < j else (j, i)]

    for b in range(n):
        for c in range(b + 1, n):
            if comparable(b, c):
                continue
            bc = sums[(b, c)]
            for a in range(n):
                if a in (b, c) or comparable(a, b) or comparable(a, c):
                    continue
                lhs = intersect(scan[a], bc)
                rhs = subspace_sum(pair(inters, a, b), pair(inters, a, c))
                if lhs != rhs:
                    return {
                        "a": scan[a], "b": scan[b], "c": scan[c],
                        "lhs": lhs, "rhs": rhs,
                    }
    return None


def exhaustive_adapted_search(data: FiltrationData,
                              ray_indices: Sequence[int]) -> Optional[ConeDecomposition]:
    """Oracle: exhaustive backtracking search for a decomposition adapted to
    all ray chains of the cone, drawing candidate vectors from the canonical
    bases of the grid intersections.  Independent of the greedy/complement
    construction; any result is re-verified before being returned."""
    idx = _sorted_cone_rays(data, ray_indices)
    cone = _cone_of(data, idx)
    quotient = cone.quotient()
    filts, tuples = _grid(data, idx)
    r = data.dim
    if r == 0:
        return ConeDecomposition(idx, ())

    w = {
        t: intersect_all([f.value(ti) for f, ti in zip(filts, t)], r) if t else Subspace.full(r)
        for t in tuples
    }

    def clone(elim: Eliminator) -> Eliminator:
        fresh = Eliminator(r)
        fresh.rows = list(elim.rows)
        return fresh

    def extend(pos: int, elim: Eliminator, chosen: List[Tuple[Tuple[int, ...], tuple]]):
        if pos == len(tuples):
            return chosen if elim.rank == r else None
        t = tuples[pos]
        rows = w[t].basis
        probe = clone(elim)
        deficiency = sum(1 for row in rows if probe.add(row))
        if deficiency == 0:
            return extend(pos + 1, elim, chosen)
        for subset in itertools.combinations(rows, deficiency):
            trial = clone(elim)
            if not all(trial.add(v) for v in subset):
                continue
            result = extend(pos + 1, trial, chosen + [(t, v) for v in subset])
            if result is not None:
                return result
        return None

    found = extend(0, Eliminator(r), [])
    if found is None:
        return None

    groups: Dict[Tuple[int, ...], List[tuple]] = {}
    for _, v in found:
        exact = tuple(f.level_of(v) for f in filts)
        groups.setdefault(exact, []).append(v)
    pieces = []
    for t in sorted(groups):
        char = _integral_character(data, idx, t)
        if char is None:
            return None
        rep = quotient.canonical_representative(char)
        pieces.append((rep, span_canonical(groups[t], r)))
    pieces.sort(key=lambda p: p[0])
    dec = ConeDecomposition(idx, tuple(pieces))
    if verify_cone_decomposition(data, idx, dec) is not None:
        return None
    return dec


def cone_compatibility(data: FiltrationData,
                       ray_indices: Sequence[int],
                       exhaustive_dim_cap: int = 4) -> ConeCompatibility:
    """Three-valued compatibility check for one cone; see module docstring."""
    idx = _sorted_cone_rays(data, ray_indices)
    cone = _cone_of(data, idx)
    quotient = cone.quotient()
    r = data.dim

    filts, tuples, w, pieces = _greedy_pieces(data, idx)

    integrality_failures: List[Tuple[int, ...]] = []
    chars: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    for t in tuples:
        if pieces[t].dim == 0:
            continue
        char = _integral_character(data, idx, t)
        if char is None:
            integrality_failures.append(t)
        else:
            chars[t] = char

    total = sum(p.dim for p in pieces.values())
    spanning = total == r and sum_all(list(pieces.values()), r).dim == r

    if spanning and not integrality_failures:
        cert_pieces = sorted(
            (quotient.canonical_representative(chars[t]), pieces[t])
            for t in tuples if pieces[t].dim > 0
        )
        dec = ConeDecomposition(idx, tuple(cert_pieces))
        if verify_cone_decomposition(data, idx, dec) is None:
            return ConeCompatibility(idx, VERDICT_CERTIFICATE, certificate=dec)

    generators = [f.value(i) for f in filts for i in f.jump_indices()]
    witness = _distributivity_witness(generators, r)
    if witness is not None:
        return ConeCompatibility(
            idx, VERDICT_REFUTATION,
            refutation=Refutation(
                "distributivity",
                {
                    "a": witness["a"].basis, "b": witness["b"].basis,
                    "c": witness["c"].basis,
                    "lhs": witness["lhs"].basis, "rhs": witness["rhs"].basis,
                },
            ),
        )

    if integrality_failures:
        t = integrality_failures[0]
        return ConeCompatibility(
            idx, VERDICT_REFUTATION,
            refutation=Refutation(
                "integrality",
                {"tuple": list(t), "rays": list(idx),
                 "piece_dim": pieces[t].dim},
            ),
        )

    if r <= exhaustive_dim_cap:
        dec = exhaustive_adapted_search(data, idx)
        if dec is not None:
            return ConeCompatibility(idx, VERDICT_CERTIFICATE, certificate=dec)
        return ConeCompatibility(
            idx, VERDICT_REFUTATION,
            refutation=Refutation(
                "exhausted",
                {"rays": list(idx),
                 "note": "exhaustive search over adapted decompositions found none"},
            ),
        )

    return ConeCompatibility(idx, VERDICT_INCONCLUSIVE)


@dataclass(frozen=True)
class GlobalCompatibilityReport:
    verdict: str  # "compatible" | "incompatible" | "inconclusive"
    cones: Tuple[ConeCompatibility, ...]

    def certificate_for(self, k: int) -> Optional[ConeDecomposition]:
        return self.cones[k].certificate


def global_compatibility(data: FiltrationData,
                         exhaustive_dim_cap: int = 4) -> GlobalCompatibilityReport:
    """Run the per-cone check on every maximal cone (sub-cone decompositions
    are induced by maximal ones, so maximal cones suffice)."""
    results = [
        cone_compatibility(data, idx, exhaustive_dim_cap)
        for idx in data.fan.maximal_cones
    ]
    if any(c.verdict == VERDICT_REFUTATION for c in results):
        verdict = "incompatible"
    elif any(c.verdict == VERDICT_INCONCLUSIVE for c in results):
        verdict = "inconclusive"
    else:
        verdict = "compatible"
    return GlobalCompatibilityReport(verdict, tuple(results))


def tensor_certificate(cert_a: ConeDecomposition,
                       cert_b: ConeDecomposition,
                       quotient: CharQuotient) -> ConeDecomposition:
    """Merge two certificates on the same cone into one for the tensor product:
    pieces are tensor products of pieces, graded by the sum of the characters."""
    if cert_a.ray_indices != cert_b.ray_indices:
        raise InputError("certificates belong to different cones")
    merged: Dict[Tuple[int, ...], List[Subspace]] = {}
    reps: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    for char_a, piece_a in cert_a.pieces:
        for char_b, piece_b in cert_b.pieces:
            s = tuple(x + y for x, y in zip(char_a, char_b))
            rep = quotient.canonical_representative(s)
            key = quotient.class_index(rep)
            merged.setdefault(key, []).append(tensor_product(piece_a, piece_b))
            reps[key] = rep
    ambient = (
        (cert_a.pieces[0][1].ambient if cert_a.pieces else 0)
        * (cert_b.pieces[0][1].ambient if cert_b.pieces else 0)
    )
    pieces = tuple(
        sorted((reps[key], sum_all(parts, ambient)) for key, parts in merged.items())
    )
    return ConeDecomposition(cert_a.ray_indices, pieces)
