"""Integer lattice computations: Smith and Hermite normal forms, integral
linear solving, primitive vectors.

Everything here works on plain tuples/lists of Python ints (arbitrary
precision).  Sizes are desk scale (rank <= 6, a few dozen rows), so the
classical elimination algorithms are used directly.
"""

from __future__ import annotations

from math import gcd
from typing import List, Optional, Sequence, Tuple

IntVector = Tuple[int, ...]
IntMatrix = Tuple[IntVector, ...]


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive_vector(v: Sequence[int]) -> IntVector:
    """Divide out the gcd of the entries, keeping direction.  Zero is rejected."""
    g = content(v)
    if g == 0:
        raise ValueError("the zero vector has no primitive representative")
    return tuple(x // g for x in v)


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D diagonal with
    nonnegative entries satisfying d_1 | d_2 | ...  A may be any shape."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # move a minimal-magnitude nonzero entry of the trailing block to (t, t)
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    add_row(i, t, -q)
                    if d[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    add_col(j, t, -q)
                    if d[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            # pivot must divide every entry of the trailing block
            culprit = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % d[t][t] != 0:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(t, culprit, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    freeze = lambda rows: tuple(tuple(r) for r in rows)
    return freeze(u), freeze(d), freeze(v)


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[IntVector]:
    """One integral solution x of A x = b, or None.  Free coordinates are set
    to zero, which makes the returned solution deterministic."""
    m = len(a)
    n = len(a[0]) if m else 0
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    if m == 0:
        return tuple([0] * n)
    u, d, v = smith_normal_form(a)
    c = [sum(u[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    r = min(m, n)
    for i in range(m):
        di = d[i][i] if i < r else 0
        if di != 0:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
        elif c[i] != 0:
            return None
    return tuple(sum(v[i][k] * y[k] for k in range(n)) for i in range(n))


def integer_kernel_basis(a: Sequence[Sequence[int]]) -> IntMatrix:
    """Z-basis of {x in Z^n : A x = 0}.  The result spans the saturated kernel
    lattice, so the quotient Z^n / ker is torsion free."""
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    _, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(m, n)) if d[i][i] != 0)
    return tuple(tuple(v[i][k] for i in range(n)) for k in range(rank, n))


def hermite_normal_form(rows: Sequence[Sequence[int]], n: Optional[int] = None) -> IntMatrix:
    """Canonical row-style Hermite normal form of the lattice spanned by the
    rows: positive pivots, entries above each pivot reduced into [0, pivot)."""
    work = [list(map(int, r)) for r in rows]
    if n is None:
        if not work:
            raise ValueError("column count required for an empty row set")
        n = len(work[0])
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        # euclid out every other nonzero entry in this column below r
        again = True
        while again:
            again = False
            for i in range(r + 1, len(work)):
                if work[i][c] != 0:
                    q = work[i][c] // work[r][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                    if work[i][c] != 0:
                        work[r], work[i] = work[i], work[r]
                        again = True
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q != 0:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r])
