"""Convex-geometric Demazure operators on parapolytopes and the operator chain.

A chain state is a finite point set in ``a + step * Z^N``.  Every operator
``D^(k)`` slices the set along color ``i_k``, checks each slice is a full box
``c + Pi(mu, nu)`` on that lattice, and stretches coordinate ``m_k`` of each box
up to

    nu'_{m_k} = nu_{m_k} + l_i(c) - sum_l (mu_l + nu_l).

If some ``nu' < nu`` the result is the signed combination
``-I_{c + Pi(mu', nu)} + I_P + I_{P'}`` on that fiber and the chain stops.

Internally points are stored as integers after multiplying by a common
denominator; all formulas are linear so nothing changes but the speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

from .crystal import CrystalGraph, extremal_vector, generate_crystal, opposite_demazure
from .polytope import (
    FiberedBoxFamily,
    FiberFailure,
    RationalPolytope,
    affine_map,
    box_corner_candidates,
    convex_hull,
    dilate,
    extract_fibers,
    hull_equals,
)
from .rootdata import RootDatum, WordIndexing, word_indexing

__all__ = [
    "LambdaData",
    "lambda_hat",
    "lambda_data",
    "l_i",
    "L_k",
    "crystal_fiber_box",
    "VirtualTerm",
    "StepRecord",
    "FiberStep",
    "DemazureResult",
    "NotConstantError",
    "ResolutionError",
    "apply_demazure",
    "demazure_chain",
    "intermediate_identity_check",
]


class NotConstantError(ValueError):
    """The coordinate a_k is not constant on the input, so D^(k) is undefined."""


class ResolutionError(ValueError):
    """An expansion length is not a multiple of the lattice step."""


# ---------------------------------------------------------------- lambda data


def lambda_hat(datum: RootDatum, word: Sequence[int], lam: Sequence) -> tuple[Fraction, ...]:
    """Coefficients with ``lambda = sum_i lambda_hat_i d_i alpha_i``."""
    n = datum.rank
    d = word_indexing(tuple(word), n).d
    # lambda = C y, y = simple-root coordinates.
    aug = [[Fraction(datum.cartan[i][j]) for j in range(n)] + [Fraction(lam[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    y = [aug[i][n] for i in range(n)]
    assert all(d_i > 0 for d_i in d), "every color must occur in the word"
    return tuple(y[i] / d[i] for i in range(n))


@dataclass(frozen=True)
class LambdaData:
    lam: tuple[int, ...]
    lambda_hat: tuple[Fraction, ...]
    x_vector: tuple[int, ...]
    a_lambda: tuple[Fraction, ...]
    hat_vector: tuple[Fraction, ...]  # (lambda_hat_{i_1}, ..., lambda_hat_{i_N})


def lambda_data(datum: RootDatum, word: Sequence[int], lam: Sequence[int]) -> LambdaData:
    word = tuple(word)
    lh = lambda_hat(datum, word, lam)
    d = word_indexing(word, datum.rank).d
    # lambda = sum lambda_hat_i d_i alpha_i, checked in fundamental-weight coordinates
    recon = [sum(lh[j] * d[j] * datum.cartan[i][j] for j in range(datum.rank)) for i in range(datum.rank)]
    assert recon == [Fraction(x) for x in lam], "lambda_hat does not reproduce lambda"
    x = extremal_vector(datum, word, tuple(lam))
    hat_vec = tuple(lh[i - 1] for i in word)
    a_lam = tuple(-Fraction(xk) + h for xk, h in zip(x, hat_vec))
    return LambdaData(tuple(lam), lh, x, a_lam, hat_vec)


def l_i(indexing: WordIndexing, cartan, a: Sequence, i: int):
    """``-sum_{j != i} c_{i,j} (a^(j)_1 + ... + a^(j)_{d_j})``."""
    row = cartan[i - 1]
    return -sum(row[letter - 1] * x for letter, x in zip(indexing.word, a) if letter != i)


def _l_from_complement(indexing: WordIndexing, cartan, c: Sequence, i: int):
    row = cartan[i - 1]
    others = indexing.other_positions[i - 1]
    return -sum(row[indexing.word[p - 1] - 1] * x for p, x in zip(others, c))


# ---------------------------------------------------------------- crystal-side quantities


def crystal_fiber_box(graph: CrystalGraph, k: int, c: tuple, color: int) -> tuple[tuple, tuple]:
    """Box ``(mu, nu)`` of ``Psi(B^{w_{>=k}}(lambda))`` over base point ``c`` along ``color``."""
    idx = graph.indexing
    blocks = [idx.color_block(a, color) for a in opposite_demazure(graph, k) if idx.complement(a, color) == c]
    if not blocks:
        raise ValueError(f"fiber over {c} misses the opposite Demazure set at k={k}")
    d = len(blocks[0])
    mu = tuple(min(b[l] for b in blocks) for l in range(d))
    nu = tuple(max(b[l] for b in blocks) for l in range(d))
    return mu, nu


def L_k(graph: CrystalGraph, k: int, c: tuple) -> int:
    """``-<lambda, h_{i_k}> + sum (mu_l + nu_l) + sum_{i_s != i_k} c_{i_k, i_s} c_s``."""
    i = graph.word[k - 1]
    idx = graph.indexing
    mu, nu = crystal_fiber_box(graph, k, c, i)
    row = graph.datum.cartan[i - 1]
    cross = sum(row[graph.word[p - 1] - 1] * x for p, x in zip(idx.other_positions[i - 1], c))
    value = -graph.lam[i - 1] + sum(mu) + sum(nu) + cross
    assert value >= 0, f"L_{k}({c}) = {value} < 0"
    return value


# ---------------------------------------------------------------- the operator


@dataclass(frozen=True)
class VirtualTerm:
    """``sign * I_{c + Pi(mu, nu)}`` on one fiber."""

    sign: int
    c: tuple
    mu: tuple
    nu: tuple


@dataclass(frozen=True)
class FiberStep:
    c: tuple
    mu: tuple
    nu: tuple
    expansion: object  # nu' - nu at coordinate m_k


@dataclass(frozen=True)
class ApplyResult:
    ok: bool
    family: FiberedBoxFamily | None
    fibers: tuple[FiberStep, ...]
    virtual_terms: tuple[VirtualTerm, ...] = ()
    witness: FiberStep | None = None


def apply_demazure(family: FiberedBoxFamily, k: int, indexing: WordIndexing, cartan) -> ApplyResult:
    """One operator ``D^(k)`` on a box family sliced along color ``i_k``."""
    i = indexing.word[k - 1]
    if family.color != i:
        raise ValueError(f"family is sliced along color {family.color}, step {k} needs {i}")
    m = indexing.m_of[k - 1] - 1
    step = family.step
    new_fibers = {}
    records = []
    terms: list[VirtualTerm] = []
    witness = None
    for c, (mu, nu) in family.fibers.items():
        if mu[m] != nu[m]:
            raise NotConstantError(f"coordinate a_{k} is not constant on the fiber over {c}")
        nu_new = nu[m] + _l_from_complement(indexing, cartan, c, i) - sum(mu) - sum(nu)
        expansion = nu_new - nu[m]
        records.append(FiberStep(c, mu, nu, expansion))
        if expansion >= 0:
            if expansion % step != 0:
                raise ResolutionError(f"step {k}: expansion {expansion} at {c} is off the lattice of step {step}")
            nu2 = nu[:m] + (nu_new,) + nu[m + 1 :]
            new_fibers[c] = (mu, nu2)
            terms.append(VirtualTerm(1, c, mu, nu2))
        else:
            mu2 = mu[:m] + (nu_new,) + mu[m + 1 :]
            facet_mu = mu2
            facet_nu = nu[:m] + (nu_new,) + nu[m + 1 :]
            terms += [
                VirtualTerm(-1, c, mu2, nu),
                VirtualTerm(1, c, mu, nu),
                VirtualTerm(1, c, facet_mu, facet_nu),
            ]
            if witness is None:
                witness = records[-1]
    if witness is not None:
        return ApplyResult(False, None, tuple(records), tuple(terms), witness)
    return ApplyResult(True, FiberedBoxFamily(i, new_fibers, step), tuple(records))


# ---------------------------------------------------------------- the chain


@dataclass(frozen=True)
class StepRecord:
    k: int
    color: int
    fibers_processed: int
    min_L: Fraction | None
    num_points: int  # after the step; for a step that fails, the count it started from
    fibers: tuple[FiberStep, ...] = field(repr=False, default=())


@dataclass
class DemazureResult:
    """Outcome of a chain: ``kind`` is ``polytope``, ``virtual`` or ``not_parapolytope``."""

    kind: str
    steps_completed: int
    trace: list[StepRecord]
    scale: int
    scaled_points: frozenset[tuple[int, ...]]
    failed_step: int | None = None
    witness: object = None
    virtual_terms: tuple[VirtualTerm, ...] = ()
    intermediates: list[frozenset[tuple[int, ...]]] = field(default_factory=list, repr=False)
    step: int = 1  # lattice spacing in scaled units
    word: tuple[int, ...] = ()
    _hull: RationalPolytope | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.kind == "polytope"

    def unscale(self, pts) -> set[tuple[Fraction, ...]]:
        s = self.scale
        return {tuple(Fraction(x, s) for x in p) for p in pts}

    @property
    def points(self) -> set[tuple[Fraction, ...]]:
        return self.unscale(self.scaled_points)

    def intermediate_points(self, l: int) -> set[tuple[Fraction, ...]]:
        """Point set after ``l`` operators (``l = 0`` is the starting point)."""
        return self.unscale(self.intermediates[l])

    def _hull_of(self, scaled) -> RationalPolytope:
        idx = word_indexing(self.word)
        cands = box_corner_candidates(scaled, idx, self.step)
        return convex_hull(self.unscale(cands))

    @property
    def polytope(self) -> RationalPolytope:
        if self._hull is None:
            self._hull = self._hull_of(self.scaled_points)
        return self._hull

    def intermediate_polytope(self, l: int) -> RationalPolytope:
        return self._hull_of(self.intermediates[l])

    def equals_polytope(self, poly: RationalPolytope, l: int | None = None) -> bool:
        """Exact test that the hull of the (intermediate) point set is ``poly``."""
        pts = self.scaled_points if l is None else self.intermediates[l]
        return hull_equals(pts, dilate(poly, self.scale))

    def witness_unscaled(self):
        """Witness with base points and boxes divided by the internal scale."""
        s = self.scale
        if isinstance(self.witness, FiberFailure):
            return {
                tuple(Fraction(x, s) for x in c): [tuple(Fraction(x, s) for x in b) for b in blocks]
                for c, blocks in self.witness.witnesses.items()
            }
        if isinstance(self.witness, FiberStep):
            w = self.witness
            q = lambda t: tuple(Fraction(x, s) for x in t)  # noqa: E731
            return FiberStep(q(w.c), q(w.mu), q(w.nu), Fraction(w.expansion, s))
        return self.witness


def demazure_chain(
    datum: RootDatum,
    word: Sequence[int],
    lam: Sequence[int] | None = None,
    start: Sequence | None = None,
    step=1,
    steps: int | None = None,
    graph: CrystalGraph | None = None,
    check_all_colors: bool = True,
) -> DemazureResult:
    """Apply ``D^(1)``, ``D^(2)``, ... to a point.

    The starting point is ``a_lambda`` unless ``start`` is given.  With a crystal
    ``graph`` for ``lambda`` every fiber is checked against the crystal side:
    the expansion must equal ``L_k(c) >= 0`` and the new box must be the box of
    the next opposite Demazure set.
    """
    word = tuple(word)
    idx = word_indexing(word, datum.rank)
    n_pos = len(word)
    if start is None:
        if lam is None:
            raise ValueError("need lambda or a starting point")
        ld = lambda_data(datum, word, lam)
        start = ld.a_lambda
    start_q = tuple(Fraction(x) for x in start)
    step_q = Fraction(step)
    scale = reduce(lcm, [x.denominator for x in start_q] + [step_q.denominator], 1)
    s_int = int(step_q * scale)
    points: frozenset[tuple[int, ...]] = frozenset({tuple(int(x * scale) for x in start_q)})
    last = n_pos if steps is None else steps

    crystal_side = None
    if graph is not None:
        ld = lambda_data(datum, word, graph.lam)
        hat = tuple(h * scale for h in ld.hat_vector)
        crystal_side = (graph, ld, hat)

    trace: list[StepRecord] = []
    inter = [points]
    for k in range(1, last + 1):
        i = word[k - 1]
        colors = range(1, datum.rank + 1) if check_all_colors else (i,)
        family = None
        for j in colors:
            res = extract_fibers(points, idx, j, s_int)
            if not res:
                return DemazureResult(
                    "not_parapolytope", k - 1, trace, scale, points, k, res, intermediates=inter, step=s_int, word=word
                )
            if j == i:
                family = res
        if len({p[k - 1] for p in points}) != 1:
            raise NotConstantError(f"step {k}: coordinate a_{k} is not constant")
        out = apply_demazure(family, k, idx, datum.cartan)
        exps = [Fraction(f.expansion, scale) for f in out.fibers]
        rec = StepRecord(k, i, len(out.fibers), min(exps) if exps else None, len(points), out.fibers)
        if not out.ok:
            trace.append(rec)
            return DemazureResult(
                "virtual", k - 1, trace, scale, points, k, out.witness, out.virtual_terms,
                intermediates=inter, step=s_int, word=word,
            )
        points = frozenset(out.family.points(idx))
        if crystal_side is not None:
            _check_step_against_crystal(k, out, crystal_side, idx, scale)
        trace.append(StepRecord(k, i, len(out.fibers), rec.min_L, len(points), out.fibers))
        inter.append(points)
    return DemazureResult("polytope", last, trace, scale, points, intermediates=inter, step=s_int, word=word)


def _check_step_against_crystal(k: int, out: ApplyResult, crystal_side, idx: WordIndexing, scale: int) -> None:
    graph, ld, hat = crystal_side
    i = graph.word[k - 1]
    m = idx.m_of[k - 1] - 1
    hat_c = idx.complement(hat, i)
    hat_blk = idx.color_block(hat, i)
    xk = ld.x_vector[k - 1]
    for f in out.fibers:
        # chain point a <-> crystal point hat - a (in scaled units)
        cc = tuple(Fraction(h - x, scale) for h, x in zip(hat_c, f.c))
        assert all(x.denominator == 1 for x in cc), f"step {k}: fiber {cc} is not integral"
        cc = tuple(int(x) for x in cc)
        L = L_k(graph, k, cc)
        assert Fraction(f.expansion, scale) == L, f"step {k}: expansion {f.expansion}/{scale} != L_k = {L}"
        mu_next, nu_next = crystal_fiber_box(graph, k + 1, cc, i)
        assert mu_next[m] == xk - L and nu_next[m] == xk, f"step {k}: box recursion fails at {cc}"
        new_mu, new_nu = out.family.fibers[f.c]
        mapped_mu = tuple(Fraction(h - x, scale) for h, x in zip(hat_blk, new_nu))
        mapped_nu = tuple(Fraction(h - x, scale) for h, x in zip(hat_blk, new_mu))
        assert mapped_mu == mu_next and mapped_nu == nu_next, f"step {k}: expanded box differs at {cc}"


def intermediate_identity_check(
    datum: RootDatum, word: Sequence[int], lam: Sequence[int], l: int, chain: DemazureResult | None = None
) -> bool:
    """After ``l`` steps the chain equals ``-Conv(Psi(B^{w_{>=l+1}}(lambda))) + hat vector``."""
    word, lam = tuple(word), tuple(lam)
    if chain is None:
        chain = demazure_chain(datum, word, lam, steps=l)
    if chain.steps_completed < l:
        return False
    graph = generate_crystal(datum, word, lam)
    ld = lambda_data(datum, word, lam)
    opp = opposite_demazure(graph, l + 1)
    expected_pts = {tuple(h - x for h, x in zip(ld.hat_vector, a)) for a in opp}
    got = chain.intermediate_points(l)
    target = affine_map(convex_hull(opp), -1, ld.hat_vector)
    return got == expected_pts and hull_equals(got, target)

