"""Exact rational convex polytopes.

Everything here is integer or ``Fraction`` arithmetic.  Facets are stored as
``(normal, offset)`` with primitive integer ``normal`` and the convention

    <normal, x> >= -offset,

and the affine hull (when lower-dimensional) as equations
``<normal, x> + offset == 0``.  Equation rows are kept in reduced row echelon
form and facet normals are supported on the non-pivot columns, which makes the
H-representation canonical.

Hulls use the double description method (Motzkin's incremental algorithm with
the combinatorial adjacency test).  Cost grows with the number of
intermediate rays; feeding likely extreme points first keeps that small for the
lattice-point clouds used here (a few thousand points, dimension up to ~12).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import ceil, floor, gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from .rootdata import WordIndexing
from .rootdata import word_indexing as _word_indexing

__all__ = [
    "RationalPolytope",
    "FiberedBoxFamily",
    "FiberFailure",
    "ParapolytopeVerdict",
    "ReflexiveReport",
    "AffineProjection",
    "EmptyPolytopeError",
    "UnboundedError",
    "convex_hull",
    "lattice_points",
    "minkowski_sum",
    "dilate",
    "affine_map",
    "is_lattice_polytope",
    "is_reflexive",
    "reflexive_report",
    "project_to_affine_hull",
    "extract_fibers",
    "check_parapolytope",
    "normal_fan_equal",
    "hull_equals",
    "box_points",
    "box_corner_candidates",
    "NZPolytope",
    "nz_polytope",
]

QVec = tuple[Fraction, ...]


class EmptyPolytopeError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


# ---------------------------------------------------------------- linear algebra


def _frac_vec(v: Iterable) -> QVec:
    return tuple(Fraction(x) for x in v)


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    return tuple(v) if g in (0, 1) else tuple(x // g for x in v)


def _integral_row(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return _primitive([int(Fraction(x) * den) for x in v])


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = next((k for k in range(r, len(mat)) if mat[k][col] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][col]
        mat[r] = [x / pv for x in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][col] != 0:
                f = mat[k][col]
                mat[k] = [x - f * y for x, y in zip(mat[k], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(_rref(rows, ncols)[1])


def _nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    red, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------- double description


def _extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : <row, y> >= 0 for all rows}``."""
    # Greedy basis of independent rows, respecting the caller's order.
    basis: list[int] = []
    echelon: list[list[Fraction]] = []
    piv_cols: list[int] = []
    for r, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for e, pc in zip(echelon, piv_cols):
            if v[pc]:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, e)]
        pc = next((c for c in range(dim) if v[c]), None)
        if pc is None:
            continue
        pv = v[pc]
        v = [x / pv for x in v]
        for k, e in enumerate(echelon):
            if e[pc]:
                f = e[pc]
                echelon[k] = [x - f * y for x, y in zip(e, v)]
        echelon.append(v)
        piv_cols.append(pc)
        basis.append(r)
        if len(basis) == dim:
            break
    if len(basis) < dim:
        raise UnboundedError("constraint matrix is rank deficient: cone is not pointed")

    # Columns of the inverse of the basis matrix are the initial rays.
    bmat = [[Fraction(x) for x in rows[r]] for r in basis]
    aug = [row + [Fraction(int(i == j)) for j in range(dim)] for i, row in enumerate(bmat)]
    red, _ = _rref(aug, dim)
    inv = [row[dim:] for row in red]
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []
    for j in range(dim):
        col = _integral_row([inv[i][j] for i in range(dim)])
        rays.append(col)
        masks.append(sum(1 << basis[k] for k in range(dim) if k != j))

    in_basis = set(basis)
    need = dim - 2
    for r, row in enumerate(rows):
        if r in in_basis:
            continue
        vals = [_dot(row, v) for v in rays]
        if all(x >= 0 for x in vals):
            bit = 1 << r
            masks = [m | bit if x == 0 else m for m, x in zip(masks, vals)]
            continue
        pos = [k for k, x in enumerate(vals) if x > 0]
        neg = [k for k, x in enumerate(vals) if x < 0]
        zer = [k for k, x in enumerate(vals) if x == 0]
        new_rays: list[tuple[int, ...]] = []
        new_masks: list[int] = []
        for p in pos:
            mp = masks[p]
            for q in neg:
                common = mp & masks[q]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for t, mt in enumerate(masks):
                    if t != p and t != q and mt & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                w = _primitive([vp * b - vq * a for a, b in zip(rays[p], rays[q])])
                new_rays.append(w)
                new_masks.append(common | (1 << r))
        bit = 1 << r
        rays = [rays[k] for k in pos] + [rays[k] for k in zer] + new_rays
        masks = [masks[k] for k in pos] + [masks[k] | bit for k in zer] + new_masks
    return rays


# ---------------------------------------------------------------- polytope type


@dataclass(frozen=True)
class RationalPolytope:
    """A bounded polytope with canonical V- and H-representations."""

    dim_ambient: int
    vertices: tuple[QVec, ...]
    facets: tuple[tuple[tuple[int, ...], Fraction], ...]
    equations: tuple[tuple[tuple[int, ...], Fraction], ...] = ()
    _vertex_set: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_vertex_set", frozenset(self.vertices))

    @property
    def dim(self) -> int:
        return self.dim_ambient - len(self.equations)

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def halfspaces(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Facets plus each equation as a pair of opposite halfspaces."""
        out = list(self.facets)
        for n, off in self.equations:
            out.append((n, off))
            out.append((tuple(-x for x in n), -off))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.dim_ambient == other.dim_ambient and self._vertex_set == other._vertex_set

    def __hash__(self) -> int:
        return hash((self.dim_ambient, self._vertex_set))

    @property
    def integer_constraints(self) -> tuple[tuple[tuple[int, ...], int, bool], ...]:
        """``(row, rhs, is_equation)`` with ``<row, x> >= rhs`` (or ``==``), all integers."""
        cached = self.__dict__.get("_int_cons")
        if cached is None:
            out = []
            for group, is_eq in ((self.equations, True), (self.facets, False)):
                for n, off in group:
                    off = Fraction(off)
                    out.append((tuple(x * off.denominator for x in n), -off.numerator, is_eq))
            cached = tuple(out)
            object.__setattr__(self, "_int_cons", cached)
        return cached

    def contains(self, x: Sequence) -> bool:
        for row, rhs, is_eq in self.integer_constraints:
            v = sum(a * b for a, b in zip(row, x))
            if v < rhs or (is_eq and v != rhs):
                return False
        return True

    def is_interior(self, x: Sequence) -> bool:
        """Relative interior membership."""
        for n, off in self.equations:
            if _dot(n, x) + off != 0:
                return False
        return all(_dot(n, x) > -off for n, off in self.facets)

    def tight_facets(self, x: Sequence) -> frozenset[int]:
        return frozenset(k for k, (n, off) in enumerate(self.facets) if _dot(n, x) == -off)

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "RationalPolytope":
        return convex_hull(points)

    @classmethod
    def from_inequalities(
        cls,
        inequalities: Iterable[tuple[Sequence, object]],
        equations: Iterable[tuple[Sequence, object]] = (),
        dim_ambient: int | None = None,
    ) -> "RationalPolytope":
        """Vertices of ``{x : <n, x> >= -off, <e, x> + off_e == 0}`` (must be bounded)."""
        ineqs = [(_frac_vec(n), Fraction(off)) for n, off in inequalities]
        eqs = [(_frac_vec(n), Fraction(off)) for n, off in equations]
        if dim_ambient is None:
            sample = ineqs or eqs
            if not sample:
                raise ValueError("no constraints and no ambient dimension")
            dim_ambient = len(sample[0][0])
        d = dim_ambient
        rows = []
        for n, off in ineqs:
            rows.append(_integral_row((off,) + n))
        for n, off in eqs:
            row = _integral_row((off,) + n)
            rows.append(row)
            rows.append(tuple(-x for x in row))
        rows.append((1,) + (0,) * d)
        rows = [r for r in rows if any(r)]
        try:
            rays = _extreme_rays(rows, d + 1)
        except UnboundedError:
            raise UnboundedError("inequality system does not define a bounded polytope") from None
        verts = []
        for ray in rays:
            if ray[0] == 0:
                raise UnboundedError("inequality system is unbounded")
            verts.append(tuple(Fraction(x, ray[0]) for x in ray[1:]))
        if not verts:
            raise EmptyPolytopeError("inequality system is infeasible")
        return convex_hull(verts)

    def to_dict(self) -> dict:
        def q(x: Fraction) -> str:
            return str(Fraction(x))

        facets = sorted(self.facets)
        return {
            "ambient_dim": self.dim_ambient,
            "vertices": [[q(x) for x in v] for v in sorted(self.vertices)],
            "facets": [{"normal": list(n), "offset": q(off)} for n, off in facets],
            "equations": [{"normal": list(n), "offset": q(off)} for n, off in self.equations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "RationalPolytope":
        return convex_hull([[Fraction(x) for x in v] for v in doc["vertices"]])


# ---------------------------------------------------------------- hulls


def _candidate_order(pts: list[tuple[int, ...]], seed: int = 0) -> list[int]:
    """Indices with probable extreme points first (argmax along axes and random directions)."""
    if not pts:
        return []
    d = len(pts[0])
    rng = random.Random(seed)
    first: dict[int, None] = {}
    dirs = [tuple(int(j == a) * s for j in range(d)) for a in range(d) for s in (1, -1)]
    dirs += [tuple(rng.randint(-7, 7) for _ in range(d)) for _ in range(4 * d + 8)]
    for u in dirs:
        best = max(range(len(pts)), key=lambda k: _dot(u, pts[k]))
        first[best] = None
    rest = [k for k in range(len(pts)) if k not in first]
    return list(first) + rest


def convex_hull(points: Iterable[Sequence]) -> RationalPolytope:
    pts_q = list(dict.fromkeys(_frac_vec(p) for p in points))
    if not pts_q:
        raise EmptyPolytopeError("convex hull of an empty set")
    n = len(pts_q[0])
    if any(len(p) != n for p in pts_q):
        raise ValueError("points of mixed dimension")
    den = reduce(lcm, (x.denominator for p in pts_q for x in p), 1)
    pts = [tuple(int(x * den) for x in p) for p in pts_q]

    # Affine hull: equations in reduced echelon form with primitive integer rows.
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    null = _nullspace(diffs, n) if diffs else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    eq_red, eq_piv = _rref(null, n) if null else ([], [])
    equations = []
    for row in eq_red:
        normal = _integral_row(row)
        equations.append((normal, Fraction(-_dot(normal, p0), den)))
    free = [c for c in range(n) if c not in eq_piv]
    r = len(free)

    if r == 0:
        return RationalPolytope(n, (pts_q[0],), (), tuple(equations))

    proj = [tuple(p[c] for c in free) for p in pts]
    order = _candidate_order(proj)
    rows = [(1,) + proj[k] for k in order]
    rays = _extreme_rays(rows, r + 1)

    facets = []
    for ray in rays:
        a = ray[1:]
        g = reduce(gcd, a, 0)
        assert g > 0, "degenerate facet normal"
        normal = [0] * n
        for c, x in zip(free, a):
            normal[c] = x // g
        facets.append((tuple(normal), Fraction(ray[0], g * den)))
    facets.sort()

    # A point is a vertex iff the normals of its tight facets have full rank.
    verts = []
    for p, pq in zip(proj, pts_q):
        tight = [ray[1:] for ray in rays if ray[0] + _dot(ray[1:], p) == 0]
        if len(tight) >= r and _rank(tight, r) == r:
            verts.append(pq)
    verts.sort()
    return RationalPolytope(n, tuple(verts), tuple(facets), tuple(equations))


def hull_equals(points: Iterable[Sequence], poly: RationalPolytope) -> bool:
    """``Conv(points) == poly`` without computing the hull of ``points``."""
    pts = {tuple(p) for p in points}  # ints and integral Fractions hash alike
    if not poly._vertex_set <= pts:
        return False
    if len(pts) >= _BULK:
        fast = _contains_all_int(poly, pts)
        if fast is not None:
            return fast
    return all(poly.contains(p) for p in pts)


_BULK = 2000


def _contains_all_int(poly: RationalPolytope, pts: set[tuple]) -> bool | None:
    """Vectorised containment for integer points; None when int64 could overflow."""
    if not all(type(x) is int for p in pts for x in p):
        return None
    cons = poly.integer_constraints
    arr = np.array(sorted(pts), dtype=object)
    big = max((abs(int(x)) for x in arr.flat), default=0)
    width = max((abs(c) for row, rhs, _ in cons for c in (*row, rhs)), default=0)
    if big * width * (poly.dim_ambient + 1) >= 2**62:
        return None
    arr = arr.astype(np.int64)
    rows = np.array([row for row, _, _ in cons], dtype=np.int64).reshape(len(cons), poly.dim_ambient)
    rhs = np.array([r for _, r, _ in cons], dtype=np.int64)
    eq = np.array([e for _, _, e in cons], dtype=bool)
    vals = arr @ rows.T
    ok = (vals >= rhs) & (~eq | (vals == rhs))
    return bool(ok.all())


def affine_map(poly: RationalPolytope, sign: int = 1, shift: Sequence | None = None) -> RationalPolytope:
    """``sign * poly + shift`` with ``sign`` in {+1, -1}."""
    assert sign in (1, -1)
    t = _frac_vec(shift) if shift is not None else (Fraction(0),) * poly.dim_ambient
    return convex_hull(tuple(sign * x + s for x, s in zip(v, t)) for v in poly.vertices)


def minkowski_sum(p: RationalPolytope, q: RationalPolytope) -> RationalPolytope:
    if p.dim_ambient != q.dim_ambient:
        raise ValueError("Minkowski sum of polytopes in different ambient spaces")
    return convex_hull(tuple(x + y for x, y in zip(u, v)) for u in p.vertices for v in q.vertices)


def dilate(poly: RationalPolytope, c) -> RationalPolytope:
    c = Fraction(c)
    if c < 0:
        raise ValueError("dilation factor must be nonnegative")
    if c == 0:
        return convex_hull([(0,) * poly.dim_ambient])
    return RationalPolytope(
        poly.dim_ambient,
        tuple(tuple(c * x for x in v) for v in poly.vertices),
        tuple((n, c * off) for n, off in poly.facets),
        tuple((n, c * off) for n, off in poly.equations),
    )


def is_lattice_polytope(poly: RationalPolytope) -> bool:
    return all(x.denominator == 1 for v in poly.vertices for x in v)


# ---------------------------------------------------------------- lattice points


def lattice_points(poly: RationalPolytope) -> frozenset[tuple[int, ...]]:
    """All integer points of ``poly`` by a pruned scan of the vertex bounding box."""
    n = poly.dim_ambient
    lo = [ceil(min(v[j] for v in poly.vertices)) for j in range(n)]
    hi = [floor(max(v[j] for v in poly.vertices)) for j in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        return frozenset()
    cons = []
    for normal, off in poly.halfspaces:
        den = off.denominator
        row = [x * den for x in normal]
        rhs = -off.numerator  # <row, x> >= rhs
        suffix = [0] * (n + 1)
        for j in range(n - 1, -1, -1):
            suffix[j] = suffix[j + 1] + max(row[j] * lo[j], row[j] * hi[j])
        cons.append((row, rhs, suffix))

    out: list[tuple[int, ...]] = []
    x = [0] * n
    partial = [0] * len(cons)

    def rec(j: int) -> None:
        if j == n:
            out.append(tuple(x))
            return
        for val in range(lo[j], hi[j] + 1):
            ok = True
            for k, (row, rhs, suffix) in enumerate(cons):
                if partial[k] + row[j] * val + suffix[j + 1] < rhs:
                    ok = False
                    break
            if not ok:
                continue
            x[j] = val
            for k, (row, _, _) in enumerate(cons):
                partial[k] += row[j] * val
            rec(j + 1)
            for k, (row, _, _) in enumerate(cons):
                partial[k] -= row[j] * val

    rec(0)
    return frozenset(out)


# ---------------------------------------------------------------- reflexive / projection


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class AffineProjection:
    """Lattice isomorphism from ``aff(P) ∩ Z^N`` onto ``Z^r``.

    ``coords(x) = (U^{-1} (x - base))[k:]`` where ``E U = [H | 0]`` for the
    equation matrix ``E`` and unimodular ``U``.
    """

    base: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    u_inv: tuple[tuple[int, ...], ...]
    k: int
    polytope: RationalPolytope

    def coords(self, x: Sequence) -> QVec:
        d = [Fraction(a) - b for a, b in zip(x, self.base)]
        return tuple(_dot(self.u_inv[i], d) for i in range(self.k, len(self.base)))

    def lift(self, y: Sequence) -> QVec:
        n = len(self.base)
        full = [Fraction(0)] * self.k + [Fraction(v) for v in y]
        return tuple(self.base[i] + _dot(self.u[i], full) for i in range(n))


def _column_echelon(eqs: Sequence[Sequence[int]], n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Unimodular ``U`` (and inverse) with ``E U`` lower-triangular, zero past column ``k``."""
    m = [list(r) for r in eqs]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    ui = [[int(i == j) for j in range(n)] for i in range(n)]
    for r in range(len(m)):
        c = r
        for j in range(c + 1, n):
            a, b = m[r][c], m[r][j]
            if b == 0:
                continue
            g, x, y = _xgcd(a, b)
            s, t = a // g, b // g
            # columns (c, j) <- (x col_c + y col_j, -t col_c + s col_j)
            for mat in (m, u):
                for row in mat:
                    cc, cj = row[c], row[j]
                    row[c], row[j] = x * cc + y * cj, -t * cc + s * cj
            # inverse: rows (c, j) <- (s row_c + t row_j, -y row_c + x row_j)
            rc, rj = ui[c], ui[j]
            ui[c] = [s * p + t * q for p, q in zip(rc, rj)]
            ui[j] = [-y * p + x * q for p, q in zip(rc, rj)]
        if m[r][c] == 0:
            raise ValueError("equation rows are linearly dependent")
    return u, ui


def project_to_affine_hull(poly: RationalPolytope) -> AffineProjection:
    """Full-dimensional lattice-equivalent copy of ``poly`` (needs a lattice point in its hull)."""
    n = poly.dim_ambient
    base = next((v for v in poly.vertices if all(x.denominator == 1 for x in v)), None)
    if base is None:
        pts = lattice_points(poly)
        if not pts:
            raise ValueError("affine hull contains no lattice point of the polytope")
        base = min(pts)
    base_i = tuple(int(x) for x in base)
    eqs = [list(e) for e, _ in poly.equations]
    k = len(eqs)
    u, ui = _column_echelon(eqs, n) if eqs else (
        [[int(i == j) for j in range(n)] for i in range(n)],
        [[int(i == j) for j in range(n)] for i in range(n)],
    )
    proto = AffineProjection(base_i, tuple(map(tuple, u)), tuple(map(tuple, ui)), k, poly)
    image = convex_hull(proto.coords(v) for v in poly.vertices)
    return AffineProjection(base_i, proto.u, proto.u_inv, k, image)


@dataclass(frozen=True)
class ReflexiveReport:
    reflexive: bool
    reason: str
    interior_points: tuple[tuple[int, ...], ...] = ()


def reflexive_report(poly: RationalPolytope) -> ReflexiveReport:
    if not poly.is_full_dimensional:
        raise ValueError("reflexivity needs a full-dimensional polytope; project first")
    if not is_lattice_polytope(poly):
        raise ValueError("not a lattice polytope")
    interior = sorted(p for p in lattice_points(poly) if poly.is_interior(p))
    if len(interior) != 1:
        return ReflexiveReport(False, f"{len(interior)} interior lattice points", tuple(interior))
    p = interior[0]
    for normal, off in poly.facets:
        if _dot(normal, p) + off != 1:
            return ReflexiveReport(False, f"facet {normal} at lattice distance {_dot(normal, p) + off}", (p,))
    return ReflexiveReport(True, "ok", (p,))


def is_reflexive(poly: RationalPolytope) -> bool:
    return reflexive_report(poly).reflexive


def normal_fan_equal(p: RationalPolytope, q: RationalPolytope) -> bool:
    """Same facet normals and the same normal-cone generators at every vertex."""
    if p.dim_ambient != q.dim_ambient:
        raise ValueError("dimension mismatch")
    if {e for e, _ in p.equations} != {e for e, _ in q.equations}:
        return False

    def fan(poly: RationalPolytope) -> frozenset:
        cones = set()
        for v in poly.vertices:
            cones.add(frozenset(poly.facets[k][0] for k in poly.tight_facets(v)))
        return frozenset(cones)

    if {n for n, _ in p.facets} != {n for n, _ in q.facets}:
        return False
    return fan(p) == fan(q)


# ---------------------------------------------------------------- fibers


def _norm_step(step):
    step = Fraction(step)
    return int(step) if step.denominator == 1 else step


def box_points(mu: Sequence, nu: Sequence, step=1) -> Iterable[tuple]:
    step = _norm_step(step)
    ranges = []
    for a, b in zip(mu, nu):
        span = b - a
        assert span >= 0 and span % step == 0
        ranges.append([a + t * step for t in range(int(span // step) + 1)])
    return product(*ranges)


@dataclass(frozen=True)
class FiberedBoxFamily:
    """Fibers along color ``i``: base point (off-color coordinates) -> box ``(mu, nu)``."""

    color: int
    fibers: Mapping[tuple, tuple[tuple, tuple]]
    step: int | Fraction = 1

    def __bool__(self) -> bool:
        return True

    def points(self, indexing: WordIndexing) -> set[tuple]:
        out = set()
        for c, (mu, nu) in self.fibers.items():
            for blk in box_points(mu, nu, self.step):
                out.add(indexing.assemble(self.color, c, blk))
        return out


@dataclass(frozen=True)
class FiberFailure:
    """Fibers that are not full boxes; ``witnesses`` maps base point -> sorted color blocks."""

    color: int
    witnesses: Mapping[tuple, tuple[tuple, ...]]
    step: int | Fraction = 1

    def __bool__(self) -> bool:
        return False

    @property
    def first(self) -> tuple:
        return next(iter(self.witnesses))


def extract_fibers(
    points: Iterable[Sequence], indexing: WordIndexing, i: int, step=1
) -> FiberedBoxFamily | FiberFailure:
    """Slice a finite point set along color ``i`` and test each slice for being a lattice box."""
    step = _norm_step(step)
    groups: dict[tuple, set[tuple]] = {}
    for a in points:
        groups.setdefault(indexing.complement(a, i), set()).add(indexing.color_block(a, i))
    fibers = {}
    bad = {}
    for c in sorted(groups):
        blocks = groups[c]
        d = len(next(iter(blocks)))
        mu = tuple(min(b[l] for b in blocks) for l in range(d))
        nu = tuple(max(b[l] for b in blocks) for l in range(d))
        size = 1
        on_grid = True
        for lo, hi in zip(mu, nu):
            on_grid &= (hi - lo) % step == 0
            size *= int((hi - lo) // step) + 1
        if on_grid and size == len(blocks):
            on_grid = all((x - lo) % step == 0 for b in blocks for x, lo in zip(b, mu))
        if on_grid and size == len(blocks):
            fibers[c] = (mu, nu)
        else:
            bad[c] = tuple(sorted(blocks))
    if bad:
        return FiberFailure(i, bad, step)
    return FiberedBoxFamily(i, fibers, step)


def box_corner_candidates(points: Iterable[Sequence], indexing: WordIndexing, step=1) -> set[tuple]:
    """Points that are box corners along every color whose fibers are all boxes.

    Every vertex of the hull survives: a vertex of a union of boxes stacked
    over the base is a corner of its own box.
    """
    pts = {tuple(p) for p in points}
    for i in range(1, len(indexing.d) + 1):
        if not indexing.d[i - 1]:
            continue
        fam = extract_fibers(pts, indexing, i, step)
        if not fam:
            continue
        keep = set()
        for a in pts:
            mu, nu = fam.fibers[indexing.complement(a, i)]
            if all(x == lo or x == hi for x, lo, hi in zip(indexing.color_block(a, i), mu, nu)):
                keep.add(a)
        pts = keep
    return pts


@dataclass(frozen=True)
class ParapolytopeVerdict:
    """``passed`` means every lattice fiber was a box at each scale tried (evidence, not proof)."""

    passed: bool
    scales_checked: tuple[int, ...]
    scales_without_points: tuple[int, ...] = ()
    failure_scale: int | None = None
    failure: FiberFailure | None = None

    def witness_fibers(self) -> list[tuple[Fraction, ...]]:
        """Failing base points rescaled back to the original polytope."""
        if self.failure is None:
            return []
        m = self.failure_scale
        return [tuple(Fraction(x, m) for x in c) for c in self.failure.witnesses]


def check_parapolytope(poly: RationalPolytope, indexing: WordIndexing, max_scale: int = 4) -> ParapolytopeVerdict:
    checked, empty = [], []
    for m in range(1, max_scale + 1):
        pts = lattice_points(dilate(poly, m))
        if not pts:
            empty.append(m)
            continue
        checked.append(m)
        for i in range(1, len(indexing.d) + 1):
            if indexing.d[i - 1] == 0:
                continue
            res = extract_fibers(pts, indexing, i)
            if not res:
                return ParapolytopeVerdict(False, tuple(checked), tuple(empty), m, res)
    return ParapolytopeVerdict(True, tuple(checked), tuple(empty))


# ---------------------------------------------------------------- NZ polytopes from crystals


@dataclass(frozen=True)
class NZPolytope:
    """``polytope`` is ``Conv(Psi(B(lam)))``; ``stabilized`` certifies it against larger multiples.

    When the hulls disagree ``polytope`` is the largest ``(1/m) Conv(Psi(B(m lam)))``
    computed and ``status`` is ``approximation``.
    """

    polytope: RationalPolytope
    stabilized: bool
    multiples_checked: tuple[int, ...]
    lattice_points: frozenset[tuple[int, ...]]

    @property
    def status(self) -> str:
        return "stabilized" if self.stabilized else "approximation"


def nz_polytope(datum, word: Sequence[int], lam: Sequence[int], stabilization_m: int = 2, cap: int | None = None) -> NZPolytope:
    from .crystal import DEFAULT_CAP, generate_crystal

    word, lam = tuple(word), tuple(lam)
    cap = DEFAULT_CAP if cap is None else cap
    if stabilization_m < 1:
        raise ValueError("stabilization_m must be >= 1")
    base_pts = generate_crystal(datum, word, lam, cap=cap).elements
    idx = _word_indexing(word, datum.rank)
    p1 = convex_hull(box_corner_candidates(base_pts, idx))
    best, stable = p1, True
    for m in range(2, stabilization_m + 1):
        pts = generate_crystal(datum, word, tuple(m * x for x in lam), cap=cap).elements
        if not hull_equals(pts, dilate(p1, m)):
            stable = False
            best = dilate(convex_hull(box_corner_candidates(pts, idx)), Fraction(1, m))
    return NZPolytope(best, stable, tuple(range(1, stabilization_m + 1)), frozenset(base_pts))
