"""Monomial fast path: Newton polyhedra, exact clipped volumes, lattice counts.

Everything here is exact rational arithmetic: facet normals are primitive
integer vectors, vertices are Fraction points, volumes are Fractions.  The
clipped-volume pipeline follows halfspace -> vertex enumeration (feasible
n-subsets) -> star triangulation from the vertex centroid -> determinant sums.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

DIMENSION_CAP = 6

Vector = Tuple[Fraction, ...]


# -- exact linear algebra helpers ----------------------------------------

def _rref(rows: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1, 1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _matrix_rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors if any(vec)]
    if not rows:
        return 0
    _, pivots = _rref(rows)
    return len(pivots)


def _affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return _matrix_rank([[Fraction(a) - Fraction(b) for a, b in zip(pt, base)] for pt in points[1:]])


def _nullspace_line(rows: List[List[Fraction]], ncols: int) -> Optional[List[Fraction]]:
    """The kernel vector when the kernel is exactly one-dimensional."""
    rref, pivots = _rref([list(r) for r in rows]) if rows else ([], [])
    if ncols - len(pivots) != 1:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    vec = [Fraction(0)] * ncols
    vec[free] = Fraction(1)
    for row, pc in zip(rref, pivots):
        vec[pc] = -row[free]
    return vec


def _solve_square(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = _rref(aug)
    if len(pivots) != n or n in pivots:
        return None
    sol = [Fraction(0)] * n
    for row, pc in zip(rref, pivots):
        sol[pc] = row[-1]
    return sol


def _det_abs(rows: List[List[Fraction]]) -> Fraction:
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
        det *= rows[c][c]
        inv = Fraction(1, 1) / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return abs(det)


def _primitive(vec: Sequence[Fraction]) -> Optional[Tuple[int, ...]]:
    denom = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * denom) for v in vec]
    g = math.gcd(*(abs(i) for i in ints))
    if g == 0:
        return None
    return tuple(i // g for i in ints)


# -- Newton polyhedron ----------------------------------------------------

@dataclass(frozen=True)
class NewtonPolyhedron:
    """conv(generator exponents) + the nonnegative orthant, by facets.

    facets are (normal, offset) with nonnegative integer normals meaning
    <normal, u> >= offset; the n coordinate halfspaces u_i >= 0 are implied
    and not stored.  Generators are kept for tightness certification.
    """

    nvars: int
    facets: Tuple[Tuple[Tuple[int, ...], int], ...]
    generators: Tuple[Tuple[int, ...], ...]


def newton_polyhedron(exponents: Sequence[Sequence[int]]) -> NewtonPolyhedron:
    """Irredundant facet description of conv(exponents) + orthant.

    Candidate hyperplanes pass through k generator points and are parallel to
    n - k coordinate axes; a candidate survives if its normal is nonnegative,
    every generator lies on the correct side, and its tight set spans an
    (n-1)-dimensional face.
    """
    points = sorted({tuple(int(u) for u in pt) for pt in exponents})
    if not points:
        raise ValueError("need at least one exponent vector")
    n = len(points[0])
    for pt in points:
        if len(pt) != n:
            raise ValueError("exponent vectors of mixed dimension")
        if any(u < 0 for u in pt):
            raise ValueError("exponents must be nonnegative")

    facets: Dict[Tuple[Tuple[int, ...], int], None] = {}
    axes = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    for k in range(1, min(n, len(points)) + 1):
        for T in itertools.combinations(points, k):
            for D in itertools.combinations(range(n), n - k):
                rows = [[Fraction(u) for u in pt] + [Fraction(-1)] for pt in T]
                for i in D:
                    rows.append([Fraction(1 if j == i else 0) for j in range(n)] + [Fraction(0)])
                kernel = _nullspace_line(rows, n + 1)
                if kernel is None:
                    continue
                prim = _primitive(kernel)
                if prim is None:
                    continue
                a, c = prim[:n], prim[n]
                if all(x <= 0 for x in a):
                    a, c = tuple(-x for x in a), -c
                if c <= 0 or any(x < 0 for x in a):
                    continue
                if any(sum(x * u for x, u in zip(a, pt)) < c for pt in points):
                    continue
                tight_pts = [pt for pt in points if sum(x * u for x, u in zip(a, pt)) == c]
                tight_dirs = [axes[i] for i in range(n) if a[i] == 0]
                base = tight_pts[0]
                spanning = [
                    [u - b for u, b in zip(pt, base)] for pt in tight_pts[1:]
                ] + [list(d) for d in tight_dirs]
                if _matrix_rank(spanning) == n - 1:
                    facets[(a, c)] = None
    return NewtonPolyhedron(n, tuple(sorted(facets)), tuple(points))


# -- clipping and volume ---------------------------------------------------

@dataclass(frozen=True)
class ClippedPolytope:
    """t*P intersected with the unit cube: halfspaces, vertices, triangulation."""

    nvars: int
    halfspaces: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]
    vertices: Tuple[Vector, ...]
    simplices: Tuple[Tuple[Vector, ...], ...]

    def volume(self) -> Fraction:
        n = self.nvars
        total = Fraction(0)
        for simplex in self.simplices:
            base = simplex[0]
            rows = [[v - b for v, b in zip(pt, base)] for pt in simplex[1:]]
            total += _det_abs(rows)
        return total / math.factorial(n)


def clip(P: NewtonPolyhedron, t) -> ClippedPolytope:
    """Vertices and star triangulation of t*P cut to [0,1]^n."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    n = P.nvars
    if n > DIMENSION_CAP:
        raise ValueError(f"dimension {n} exceeds the cap {DIMENSION_CAP}")
    halfspaces: List[Tuple[Tuple[Fraction, ...], Fraction]] = []
    for a, c in P.facets:
        halfspaces.append((tuple(Fraction(x) for x in a), t * c))
    for i in range(n):
        e = tuple(Fraction(1 if j == i else 0) for j in range(n))
        halfspaces.append((e, Fraction(0)))
        halfspaces.append((tuple(-x for x in e), Fraction(-1)))

    vertices: List[Vector] = []
    seen = set()
    for combo in itertools.combinations(range(len(halfspaces)), n):
        rows = [list(halfspaces[i][0]) for i in combo]
        rhs = [halfspaces[i][1] for i in combo]
        pt = _solve_square(rows, rhs)
        if pt is None:
            continue
        key = tuple(pt)
        if key in seen:
            continue
        if all(sum(a * u for a, u in zip(hs[0], pt)) >= hs[1] for hs in halfspaces):
            seen.add(key)
            vertices.append(key)
    vertices.sort()

    if len(vertices) <= n or _affine_rank(vertices) < n:
        return ClippedPolytope(n, tuple(halfspaces), tuple(vertices), ())

    simplices = _star_triangulation(vertices, halfspaces, n)
    return ClippedPolytope(n, tuple(halfspaces), tuple(vertices), tuple(simplices))


def _star_triangulation(
    vertices: Sequence[Vector],
    halfspaces: Sequence[Tuple[Tuple[Fraction, ...], Fraction]],
    dim: int,
) -> List[Tuple[Vector, ...]]:
    """Cone from the face centroid over recursively triangulated subfaces."""

    def centroid(pts: Sequence[Vector]) -> Vector:
        k = len(pts)
        return tuple(sum(col) / k for col in zip(*pts))

    def recurse(face: List[Vector], tight: frozenset, d: int) -> List[Tuple[Vector, ...]]:
        if d == 1:
            lo = min(face)
            hi = max(face)
            return [(lo, hi)] if lo != hi else []
        c = centroid(face)
        out: List[Tuple[Vector, ...]] = []
        done = set()
        for idx, (normal, offset) in enumerate(halfspaces):
            if idx in tight:
                continue
            sub = [v for v in face if sum(a * u for a, u in zip(normal, v)) == offset]
            if len(sub) < d or len(sub) == len(face):
                continue
            key = frozenset(sub)
            if key in done:
                continue
            done.add(key)
            if _affine_rank(sub) != d - 1:
                continue
            for simplex in recurse(sub, tight | {idx}, d - 1):
                out.append((c,) + simplex)
        return out

    return recurse(list(vertices), frozenset(), dim)


def clip_and_volume(P: NewtonPolyhedron, t) -> Fraction:
    """Exact volume of t*P cut to the unit cube; degenerate cuts give 0."""
    return clip(P, t).volume()


def lattice_count(P: NewtonPolyhedron, t, q: int) -> int:
    """Number of integer points of t*q*P inside [0, q]^n.

    Facet thresholds are exact rational, cleared to integer ceilings; the
    coordinate recursion prunes once the best possible completion fails a
    facet.
    """
    if q < 1:
        raise ValueError("q must be positive")
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    n = P.nvars
    thresholds = [(a, math.ceil(t * q * c)) for a, c in P.facets]
    # largest possible remaining contribution per facet and coordinate depth
    suffix = []
    for a, _ in thresholds:
        row = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            row[i] = row[i + 1] + a[i] * q
        suffix.append(row)

    def count(depth: int, partial: List[int]) -> int:
        if depth == n:
            return 1
        total = 0
        for u in range(q + 1):
            ok = True
            for f, (a, need) in enumerate(thresholds):
                acc = partial[f] + a[depth] * u
                if acc + suffix[f][depth + 1] < need:
                    ok = False
                    break
            if ok:
                total += count(depth + 1, [partial[f] + thresholds[f][0][depth] * u for f in range(len(thresholds))])
        return total

    return count(0, [0] * len(thresholds))


def closure_membership(u: Sequence[int], exponents: Sequence[Sequence[int]], lam) -> bool:
    """Whether u lies in lam * P, facet by facet; u must be nonnegative."""
    u = tuple(int(x) for x in u)
    if any(x < 0 for x in u):
        raise ValueError("u must be nonnegative")
    lam = Fraction(lam)
    P = newton_polyhedron(exponents)
    if len(u) != P.nvars:
        raise ValueError("dimension mismatch")
    return all(sum(a * x for a, x in zip(normal, u)) >= lam * c for normal, c in P.facets)


def monomial_signature(exponents: Sequence[Sequence[int]], t) -> Fraction:
    """Exact splitting density of a monomial-ideal pair at exponent t."""
    return clip_and_volume(newton_polyhedron(exponents), t)
