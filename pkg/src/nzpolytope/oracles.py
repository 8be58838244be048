"""Independent inequality descriptions of Nakashima-Zelevinsky polytopes.

These are transcriptions of known closed-form systems, used only to
cross-check the polytopes built from crystals:

* type A with the word (1, 2, 1, 3, 2, 1, ..., n, ..., 1): a Gelfand-Zetlin
  pattern after a translation;
* types B, C, D with the word (n, n-1, ..., 1) repeated: explicit lists of
  chain inequalities plus families indexed by decreasing sequences.

Coordinate convention.  The published systems write ``a_j^(i)`` with ``j``
counting the occurrences of color ``i`` from the *right* end of the word.  In
module-wide position order that variable lives at

    position = positions[i - 1][d_i - j]

(1-based positions as in ``WordIndexing``).  ``_Vars`` implements exactly this
permutation; the fundamental-weight tests pin it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .polytope import RationalPolytope, lattice_points
from .rootdata import RootDatum, root_datum, word_indexing

__all__ = [
    "Constraint",
    "InequalitySystem",
    "GZSystem",
    "NonParapolytopeScenario",
    "gz_word",
    "gz_system",
    "hoshino_word",
    "hoshino_system",
    "counterexample_scenario",
]

Form = dict[int, Fraction]  # 0-based coordinate -> coefficient


@dataclass(frozen=True)
class Constraint:
    """``<coeffs, x> + const >= 0`` (or ``== 0`` when ``equation``)."""

    coeffs: tuple[Fraction, ...]
    const: Fraction
    tag: str
    equation: bool = False

    def value(self, x: Sequence) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x) if c), Fraction(0)) + self.const

    def holds(self, x: Sequence) -> bool:
        v = self.value(x)
        return v == 0 if self.equation else v >= 0


@dataclass
class InequalitySystem:
    dim: int
    constraints: list[Constraint] = field(default_factory=list)
    label: str = ""

    def add(self, form: Form, const, tag: str, equation: bool = False) -> None:
        coeffs = [Fraction(0)] * self.dim
        for p, c in form.items():
            coeffs[p] += c
        if not any(coeffs):
            # constant constraint; it must hold or the system is empty
            if (Fraction(const) != 0) if equation else (Fraction(const) < 0):
                raise ValueError(f"inconsistent constant constraint [{tag}]")
            return
        self.constraints.append(Constraint(tuple(coeffs), Fraction(const), tag, equation))

    def add_chain(self, forms: Sequence[Form], tag: str) -> None:
        """``forms[0] >= forms[1] >= ...``."""
        for hi, lo in zip(forms, forms[1:]):
            self.add(_sub(hi, lo), 0, tag)

    def contains(self, x: Sequence) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def polytope(self) -> RationalPolytope:
        ineqs = [(c.coeffs, c.const) for c in self.constraints if not c.equation]
        eqs = [(c.coeffs, c.const) for c in self.constraints if c.equation]
        return RationalPolytope.from_inequalities(ineqs, eqs, self.dim)

    def lattice_points(self) -> frozenset[tuple[int, ...]]:
        return lattice_points(self.polytope())

    def tags(self) -> list[str]:
        return sorted({c.tag for c in self.constraints})

    def to_dict(self) -> dict:
        """Same layout as the polytope JSON H-rep (``<normal, x> >= -offset``)."""
        rows = []
        for c in self.constraints:
            rows.append({
                "normal": [str(x) for x in c.coeffs],
                "offset": str(c.const),
                "equation": c.equation,
                "tag": c.tag,
            })
        return {"ambient_dim": self.dim, "label": self.label, "constraints": rows}


def _sub(f: Form, g: Form) -> Form:
    out = dict(f)
    for p, c in g.items():
        out[p] = out.get(p, Fraction(0)) - c
    return out


def _scale(f: Form, c) -> Form:
    return {p: Fraction(c) * v for p, v in f.items()}


def _add(*forms: Form) -> Form:
    out: Form = {}
    for f in forms:
        for p, c in f.items():
            out[p] = out.get(p, Fraction(0)) + c
    return out


class _Vars:
    """``a(i, j)`` as a linear form; out-of-range indices give the zero form."""

    def __init__(self, word: Sequence[int], rank: int) -> None:
        self.idx = word_indexing(tuple(word), rank)
        self.rank = rank

    def position(self, i: int, j: int) -> int | None:
        if not 1 <= i <= self.rank:
            return None
        pos = self.idx.positions[i - 1]
        if not 1 <= j <= len(pos):
            return None
        return pos[len(pos) - j] - 1

    def __call__(self, i: int, j: int) -> Form:
        p = self.position(i, j)
        return {} if p is None else {p: Fraction(1)}


# ---------------------------------------------------------------- type A


def gz_word(n: int) -> tuple[int, ...]:
    return tuple(x for r in range(1, n + 1) for x in range(r, 0, -1))


@dataclass
class GZSystem:
    """Interlacing system on shifted coordinates ``y = a + translation``."""

    system: InequalitySystem
    translation: tuple[int, ...]
    top_row: tuple[int, ...]

    def translate(self, a: Sequence) -> tuple:
        return tuple(x + t for x, t in zip(a, self.translation))

    def untranslate(self, y: Sequence) -> tuple:
        return tuple(x - t for x, t in zip(y, self.translation))


def _check_lambda(lam: Sequence[int], rank: int) -> tuple[int, ...]:
    lam = tuple(int(x) for x in lam)
    if len(lam) != rank or any(x < 0 for x in lam):
        raise ValueError(f"lambda must be a dominant weight of rank {rank}, got {lam}")
    return lam


def gz_system(n: int, lam: Sequence[int], word: Sequence[int] | None = None) -> GZSystem:
    """Gelfand-Zetlin pattern with top row ``(lam_{>=1}, ..., lam_{>=n}, 0)``.

    Row ``r`` entry ``j`` is ``y = a_j^(r) + lam_{>=j+r}``; consecutive rows
    interlace.  ``translation`` maps the NZ polytope onto the pattern polytope.
    """
    if n < 1:
        raise ValueError("rank must be >= 1")
    if word is not None and tuple(word) != gz_word(n):
        raise ValueError(f"the Gelfand-Zetlin system needs the word {gz_word(n)}")
    lam = _check_lambda(lam, n)
    tail = [sum(lam[k - 1:]) for k in range(1, n + 2)]  # tail[k-1] = lam_{>=k}, lam_{>=n+1} = 0
    var = _Vars(gz_word(n), n)
    N = n * (n + 1) // 2
    sysm = InequalitySystem(N, label=f"GZ A{n} lambda={lam}")

    def y(r: int, j: int) -> tuple[Form, int]:
        if r == 0:
            return {}, tail[j - 1]
        return var(r, j), 0

    for r in range(1, n + 1):
        for j in range(1, n - r + 2):
            f, c = y(r, j)
            up_f, up_c = y(r - 1, j)
            dn_f, dn_c = y(r - 1, j + 1)
            sysm.add(_sub(up_f, f), up_c - c, f"interlace row {r} entry {j}: upper-left")
            sysm.add(_sub(f, dn_f), c - dn_c, f"interlace row {r} entry {j}: upper-right")

    shift = [0] * N
    for i in range(1, n + 1):
        for j in range(1, n - i + 2):
            shift[var.position(i, j)] = tail[i + j - 1]
    return GZSystem(sysm, tuple(shift), tuple(tail))


# ---------------------------------------------------------------- types B, C, D


def hoshino_word(lie_type: str, n: int) -> tuple[int, ...]:
    reps = n - 1 if lie_type.upper() == "D" else n
    return tuple(range(n, 0, -1)) * reps


def _decreasing(top: int, bottom: int, length: int) -> Iterable[tuple[int, ...]]:
    """Strictly decreasing sequences of the given length in ``[bottom, top]``."""
    for c in combinations(range(top, bottom - 1, -1), length):
        yield c


def hoshino_system(lie_type: str, n: int, lam: Sequence[int], word: Sequence[int] | None = None) -> InequalitySystem:
    """Inequalities cutting out the NZ polytope for the word ``(n, ..., 1)^r``.

    Every family of the closed form is emitted, including the ones indexed by
    strictly decreasing sequences (exponential in ``n``).
    """
    t = lie_type.upper()
    if t not in ("B", "C", "D"):
        raise ValueError(f"no closed-form system for type {lie_type}")
    if n < (4 if t == "D" else 2):
        raise ValueError(f"rank {n} too small for type {t}")
    expected = hoshino_word(t, n)
    if word is not None and tuple(word) != expected:
        raise ValueError(f"this system needs the word {expected}")
    lam = _check_lambda(lam, n)
    a = _Vars(expected, n)
    S = InequalitySystem(len(expected), label=f"{t}{n} lambda={lam}")
    for p in range(S.dim):
        S.add({p: Fraction(1)}, 0, "nonnegativity")
    if t == "D":
        _type_d(S, a, n, lam)
    else:
        _type_bc(S, a, n, lam, Fraction(2) if t == "B" else Fraction(1), t == "C")
    return S


def _type_bc(S: InequalitySystem, a: _Vars, n: int, lam: tuple[int, ...], c: Fraction, long_last: bool) -> None:
    two = 2 if long_last else 1
    for i in range(2, n):
        S.add_chain([a(i - s, 1 + s) for s in range(i)], f"diagonal chain from a_1^({i})")
    for j in range(1, n):
        chain = [_scale(a(n, j), two)] + [a(n - s, j + s) for s in range(1, n - j + 1)]
        S.add_chain(chain, f"diagonal chain from a_{j}^({n})")
    for j in range(2, n + 1):
        chain = [a(i, j) for i in range(n - j + 1, n)] + [_scale(a(n, j), two)]
        S.add_chain(chain, f"column chain at subscript {j}")
    _lambda_small(S, a, n - 1, lam)

    def term(mu: int, k: int) -> Form:
        s = mu + k - 1
        return _sub(a(n - mu + 1, s), a(n - mu, s))

    for l in range(1, n + 1):
        for head in _decreasing(n, 2, l - 1):
            seq = head + (1,)
            f = _add(a(n, l), _scale(a(n - 1, l), -c), *(_scale(term(m, k), c) for k, m in enumerate(head, 1)))
            S.add(_scale(f, -1), lam[n - 1], f"lambda_{n} bound, sequence {seq}")
        for seq in _decreasing(n, 2, l):
            f = _add(_scale(a(n, l), -1), *(_scale(term(m, k), c) for k, m in enumerate(seq, 1)))
            S.add(_scale(f, -1), lam[n - 1], f"lambda_{n} bound, sequence {seq} (no 1)")


def _lambda_small(S: InequalitySystem, a: _Vars, top: int, lam: tuple[int, ...]) -> None:
    for i in range(1, top + 1):
        for j in range(1, i + 1):
            f = _sub(a(i - j + 1, j), a(i - j, j))
            S.add(_scale(f, -1), lam[i - 1], f"lambda_{i} bound at subscript {j}")


def _type_d(S: InequalitySystem, a: _Vars, n: int, lam: tuple[int, ...]) -> None:
    for i in range(2, n - 1):
        S.add_chain([a(i - s, 1 + s) for s in range(i)], f"diagonal chain from a_1^({i})")
    for j in range(1, n - 1):
        chain = [_add(a(n - 1, j), a(n, j))] + [a(n - 1 - s, j + s) for s in range(1, n - j)]
        S.add_chain(chain, f"diagonal chain from a_{j}^({n - 1}) + a_{j}^({n})")
    for j in range(2, n):
        chain = [a(i, j) for i in range(n - j, n - 1)] + [_add(a(n - 1, j), a(n, j))]
        S.add_chain(chain, f"column chain at subscript {j}")
    for first in (n - 1, n):
        other = n if first == n - 1 else n - 1
        S.add_chain([a(first if s % 2 else other, s) for s in range(1, n)], f"alternating chain from a_1^({first})")
    _lambda_small(S, a, n - 2, lam)
    S.add(_scale(_sub(a(n - 1, 1), a(n - 2, 1)), -1), lam[n - 2], f"lambda_{n - 1} bound at subscript 1")
    S.add(_scale(_sub(a(n, 1), a(n - 2, 1)), -1), lam[n - 1], f"lambda_{n} bound at subscript 1")

    def total(seq: tuple[int, ...]) -> Form:
        return _add(*(_sub(a(n - m, m + k - 1), a(n - m - 1, m + k - 1)) for k, m in enumerate(seq, 1)))

    # odd-length sequences, then even-length; each max{...} splits into two rows
    for length in range(1, n):
        for seq in _decreasing(n - 1, 2, length):
            s = total(seq)
            if length % 2 == 1:
                q = (length + 1) // 2
                pairs = ((n - 1, n), (n, n - 1))
                for lam_idx, sup in pairs:
                    opts = [_scale(a(sup, 2 * q - 1), -1), _sub(a(sup, 2 * q), a(n - 2, 2 * q))]
                    for o, f in enumerate(opts):
                        S.add(_scale(_add(f, s), -1), lam[lam_idx - 1], f"lambda_{lam_idx} bound, odd sequence {seq} ({o})")
            else:
                q = length // 2
                pairs = ((n - 1, n - 1), (n, n))
                for lam_idx, sup in pairs:
                    opts = [_scale(a(sup, 2 * q), -1), _sub(a(sup, 2 * q + 1), a(n - 2, 2 * q + 1))]
                    for o, f in enumerate(opts):
                        S.add(_scale(_add(f, s), -1), lam[lam_idx - 1], f"lambda_{lam_idx} bound, even sequence {seq} ({o})")


# ---------------------------------------------------------------- non-parapolytope example


@dataclass(frozen=True)
class NonParapolytopeScenario:
    """A chain start in A3 whose fourth operator output is not a parapolytope.

    Constraint data are written in color-block coordinates
    ``(a^(1)_1, a^(1)_2, a^(2)_1, a^(2)_2, a^(2)_3, a^(3)_1)`` (left-to-right
    occurrence count) and converted to position order by the helpers.
    """

    datum: RootDatum
    word: tuple[int, ...]
    a_low_blocks: tuple[Fraction, ...]
    step: Fraction
    ok_steps: int
    failing_step: int
    failing_color: int
    step4_equations: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    step4_inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    witness_blocks: tuple[Fraction, ...]
    fiber_inequalities: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    fiber_equations: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    @property
    def indexing(self):
        return word_indexing(self.word, self.datum.rank)

    def to_positions(self, blocks: Sequence) -> tuple:
        return self.indexing.from_color_blocks(blocks)

    @property
    def a_low(self) -> tuple[Fraction, ...]:
        return self.to_positions(self.a_low_blocks)

    @property
    def witness_complement(self) -> tuple[Fraction, ...]:
        """Base point of the bad fiber as a color-``failing_color`` complement."""
        return self.indexing.complement(self.to_positions(self.witness_blocks), self.failing_color)

    def step4_polytope(self) -> RationalPolytope:
        conv = lambda rows: [(self.to_positions(n), off) for n, off in rows]  # noqa: E731
        return RationalPolytope.from_inequalities(conv(self.step4_inequalities), conv(self.step4_equations), 6)

    def fiber_polytope(self) -> RationalPolytope:
        """The bad fiber in the coordinates ``(a^(2)_1, a^(2)_2, a^(2)_3)``."""
        return RationalPolytope.from_inequalities(self.fiber_inequalities, self.fiber_equations, 3)


def _row(*coeffs) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in coeffs)


def counterexample_scenario() -> NonParapolytopeScenario:
    F = Fraction
    # each row: (normal, offset) meaning <normal, x> + offset >= 0, x in color blocks
    # order: a11 a12 a21 a22 a23 a31
    eqs = (
        (_row(0, 1, 0, 0, 0, 0), F(1, 4)),  # a12 = -1/4
        (_row(0, 0, 0, 0, 1, 0), F(4, 3)),  # a23 = -4/3
    )
    ineqs = (
        (_row(0, 0, 1, 0, 0, 0), F(1, 3)),  # a21 >= -1/3
        (_row(0, 0, -1, 0, 0, 0), F(2, 3)),  # a21 <= 2/3
        (_row(1, 0, 0, 0, 0, 0), F(5, 4)),  # a11 >= -5/4
        (_row(-1, 0, 1, 0, 0, 0), F(1, 12)),  # a11 <= a21 + 1/12
        (_row(0, 0, 0, 1, 0, 0), F(1, 3)),  # a22 >= -1/3
        (_row(1, 0, 0, -1, 0, 0), F(11, 12)),  # a22 <= a11 + 11/12
        (_row(0, 0, 0, -1, 0, 0), F(2, 3)),  # a22 <= 2/3
        (_row(0, 0, 0, 0, 0, 1), F(3, 2)),  # a31 >= -3/2
        (_row(0, 0, 1, 1, 0, -1), F(1, 6)),  # a31 <= a21 + a22 + 1/6
    )
    fiber_ineqs = (
        (_row(1, 0, 0), F(1, 3)),
        (_row(-1, 0, 0), F(2, 3)),
        (_row(1, 1, 0), F(-1, 3)),  # a22 >= 1/3 - a21
        (_row(0, -1, 0), F(2, 3)),
    )
    fiber_eqs = ((_row(0, 0, 1), F(4, 3)),)
    return NonParapolytopeScenario(
        datum=root_datum("A", 3),
        word=(2, 1, 2, 3, 2, 1),
        a_low_blocks=tuple(-x for x in (F(5, 4), F(1, 4), F(1, 3), F(1, 3), F(4, 3), F(3, 2))),
        step=F(1, 12),
        ok_steps=3,
        failing_step=5,
        failing_color=2,
        step4_equations=eqs,
        step4_inequalities=ineqs,
        witness_blocks=(F(-1, 4), F(-1, 4), F(0), F(0), F(0), F(1, 2)),
        fiber_inequalities=fiber_ineqs,
        fiber_equations=fiber_eqs,
    )
