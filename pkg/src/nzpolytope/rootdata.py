"""Finite-type root data, Weyl group action on weights, and reduced words.

Cartan convention: ``cartan[i][j] = <alpha_j, h_i>`` (row index = coroot).
With this convention the simple root ``alpha_j`` written in the basis of
fundamental weights is column ``j`` of the Cartan matrix, and the
simple reflection acts on fundamental-weight coordinates by
``s_i(mu) = mu - mu[i] * cartan[:, i]``.

Node labels follow Bourbaki:

* ``B_n``: ``alpha_n`` short, ``C_n``: ``alpha_n`` long,
* ``D_n``: nodes ``n-1`` and ``n`` are the two short legs of the fork,
* ``G_2``: ``alpha_1`` short (``cartan = [[2, -3], [-1, 2]]``); pass
  ``g2_long_first=True`` for the opposite labelling.

All indices are 1-based in the public API (letters of words, colors),
0-based internally in tuples.
"""

from __future__ import annotations

import re
from operator import itemgetter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

__all__ = [
    "RootDatum",
    "WordIndexing",
    "cartan_matrix",
    "root_datum",
    "parse_type",
    "parse_int_list",
    "is_reduced_word",
    "is_longest_word",
    "weyl_act",
    "word_indexing",
    "positive_roots",
    "weyl_dimension",
    "fundamental_weight",
    "rho",
]

SUPPORTED_TYPES = "ABCDEFG"


def cartan_matrix(lie_type: str, rank: int, g2_long_first: bool = False) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix ``c[i][j] = <alpha_j, h_i>`` for a finite Dynkin type."""
    lie_type = lie_type.upper()
    n = rank
    if lie_type not in SUPPORTED_TYPES or n < 1:
        raise ValueError(f"unsupported type {lie_type}{rank}")
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2

    def link(i: int, j: int) -> None:
        c[i][j] = c[j][i] = -1

    if lie_type == "A":
        for i in range(n - 1):
            link(i, i + 1)
    elif lie_type in "BC":
        if n < 2:
            raise ValueError(f"unsupported type {lie_type}{rank}")
        for i in range(n - 2):
            link(i, i + 1)
        # B: alpha_n short so <alpha_{n-1}, h_n> = -2; C is the transpose.
        if lie_type == "B":
            c[n - 2][n - 1], c[n - 1][n - 2] = -1, -2
        else:
            c[n - 2][n - 1], c[n - 1][n - 2] = -2, -1
    elif lie_type == "D":
        if n < 3:
            raise ValueError(f"unsupported type D{rank}")
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif lie_type == "E":
        if n not in (6, 7, 8):
            raise ValueError(f"unsupported type E{rank}")
        # Bourbaki: 1-3-4-5-6(-7-8), with 2 attached to 4.
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif lie_type == "F":
        if n != 4:
            raise ValueError(f"unsupported type F{rank}")
        link(0, 1)
        link(2, 3)
        # alpha_3, alpha_4 short
        c[1][2], c[2][1] = -1, -2
    elif lie_type == "G":
        if n != 2:
            raise ValueError(f"unsupported type G{rank}")
        c[0][1], c[1][0] = -3, -1
        if g2_long_first:
            c[0][1], c[1][0] = -1, -3
    return tuple(tuple(row) for row in c)


_NUM_POSITIVE = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


@dataclass(frozen=True)
class RootDatum:
    lie_type: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    num_positive_roots: int

    def __post_init__(self) -> None:
        c, n = self.cartan, self.rank
        assert len(c) == n and all(len(row) == n for row in c)
        for i in range(n):
            assert c[i][i] == 2
            for j in range(n):
                if i != j:
                    assert c[i][j] <= 0
                    assert (c[i][j] == 0) == (c[j][i] == 0)

    @property
    def name(self) -> str:
        return f"{self.lie_type}{self.rank}"

    def simple_root(self, j: int) -> tuple[int, ...]:
        """alpha_j (1-based) in fundamental-weight coordinates."""
        return tuple(self.cartan[i][j - 1] for i in range(self.rank))

    @cached_property
    def symmetrizer(self) -> tuple[Fraction, ...]:
        """Positive ``s`` with ``s_i c_ij = s_j c_ji``; ``(alpha_i, alpha_i) = 2 s_i``."""
        n = self.rank
        s: list[Fraction | None] = [None] * n
        for start in range(n):
            if s[start] is not None:
                continue
            s[start] = Fraction(1)
            stack = [start]
            while stack:
                i = stack.pop()
                for j in range(n):
                    if j != i and self.cartan[i][j] != 0 and s[j] is None:
                        s[j] = s[i] * self.cartan[i][j] / self.cartan[j][i]
                        stack.append(j)
        return tuple(s)  # type: ignore[arg-type]


def root_datum(lie_type: str, rank: int, g2_long_first: bool = False) -> RootDatum:
    lie_type = lie_type.upper()
    cartan = cartan_matrix(lie_type, rank, g2_long_first=g2_long_first)
    return RootDatum(lie_type, rank, cartan, _NUM_POSITIVE[lie_type](rank))


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


def parse_type(text: str, g2_long_first: bool = False) -> RootDatum:
    """Parse a descriptor such as ``"A2"``, ``"C3"``, ``"G2"``."""
    m = _TYPE_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse Lie type {text!r}")
    return root_datum(m.group(1), int(m.group(2)), g2_long_first=g2_long_first)


def parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))


def _reflect_root(datum: RootDatum, i: int, beta: list[int]) -> None:
    """In-place s_i on a root given in simple-root coordinates (i 0-based)."""
    beta[i] -= sum(datum.cartan[i][j] * beta[j] for j in range(datum.rank))


def is_reduced_word(datum: RootDatum, word: tuple[int, ...]) -> bool:
    """A word is reduced iff each letter's root, pulled back through the prefix, stays positive."""
    n = datum.rank
    if any(not 1 <= letter <= n for letter in word):
        raise ValueError(f"letters of {word} out of range 1..{n}")
    for t, letter in enumerate(word):
        beta = [0] * n
        beta[letter - 1] = 1
        for prev in reversed(word[:t]):
            _reflect_root(datum, prev - 1, beta)
        if any(x < 0 for x in beta):
            return False
    return True


def is_longest_word(datum: RootDatum, word: tuple[int, ...]) -> bool:
    return len(word) == datum.num_positive_roots and is_reduced_word(datum, word)


def weyl_act(datum: RootDatum, word_suffix: tuple[int, ...], lam) -> tuple:
    """Apply ``s_{w_1} s_{w_2} ... s_{w_r}`` to ``lam`` (rightmost letter acts first)."""
    mu = list(lam)
    for letter in reversed(word_suffix):
        i = letter - 1
        k = mu[i]
        if k:
            for r in range(datum.rank):
                mu[r] -= k * datum.cartan[r][i]
    return tuple(mu)


@dataclass(frozen=True)
class WordIndexing:
    """Color bookkeeping of a word: counts, per-color positions, rank within color.

    ``positions[i - 1]`` lists the 1-based positions of color ``i``;
    ``m_of[k - 1]`` is the rank (1-based) of position ``k`` among its color.
    """

    word: tuple[int, ...]
    d: tuple[int, ...]
    positions: tuple[tuple[int, ...], ...]
    m_of: tuple[int, ...]
    other_positions: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self) -> None:
        def getter(pos: tuple[int, ...]):
            if len(pos) == 1:
                j = pos[0] - 1
                return lambda v: (v[j],)
            if not pos:
                return lambda v: ()
            return itemgetter(*(p - 1 for p in pos))

        n = len(self.d)
        blocks = tuple(getter(self.positions[i]) for i in range(n))
        comps = tuple(getter(self.other_positions[i]) for i in range(n))
        assemblers = []
        for i in range(n):
            order = self.other_positions[i] + self.positions[i]
            inv = [0] * len(order)
            for j, p in enumerate(order):
                inv[p - 1] = j
            assemblers.append(getter(tuple(j + 1 for j in inv)))
        object.__setattr__(self, "_blocks", blocks)
        object.__setattr__(self, "_comps", comps)
        object.__setattr__(self, "_assemblers", tuple(assemblers))

    @property
    def length(self) -> int:
        return len(self.word)

    def color_block(self, vec, i: int) -> tuple:
        """The color-``i`` coordinates ``(a^(i)_1, ..., a^(i)_{d_i})``."""
        return self._blocks[i - 1](vec)

    def complement(self, vec, i: int) -> tuple:
        """Coordinates of ``vec`` at positions not of color ``i`` (in position order)."""
        return self._comps[i - 1](vec)

    def to_color_blocks(self, vec) -> tuple:
        """Reorder a position-ordered vector into ``(a^(1)..., a^(2)..., ...)``."""
        return tuple(x for i in range(1, len(self.d) + 1) for x in self.color_block(vec, i))

    def from_color_blocks(self, blocks) -> tuple:
        out = [None] * self.length
        it = iter(blocks)
        for pos in self.positions:
            for p in pos:
                out[p - 1] = next(it)
        return tuple(out)

    def assemble(self, i: int, c, block) -> tuple:
        """Inverse of (complement, color_block) for color ``i``."""
        return self._assemblers[i - 1](tuple(c) + tuple(block))


def word_indexing(word: tuple[int, ...], rank: int | None = None) -> WordIndexing:
    n = rank if rank is not None else max(word, default=0)
    positions: list[list[int]] = [[] for _ in range(n)]
    m_of = []
    for k, letter in enumerate(word, start=1):
        positions[letter - 1].append(k)
        m_of.append(len(positions[letter - 1]))
    others = tuple(
        tuple(k for k, letter in enumerate(word, start=1) if letter != i) for i in range(1, n + 1)
    )
    return WordIndexing(
        word=tuple(word),
        d=tuple(len(p) for p in positions),
        positions=tuple(tuple(p) for p in positions),
        m_of=tuple(m_of),
        other_positions=others,
    )


def positive_roots(datum: RootDatum) -> list[tuple[int, ...]]:
    """Positive roots in simple-root coordinates, by closure under simple reflections."""
    n = datum.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                b = list(beta)
                _reflect_root(datum, i, b)
                t = tuple(b)
                if all(x >= 0 for x in t) and any(t) and t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda r: (sum(r), r))


def weyl_dimension(datum: RootDatum, lam) -> int:
    """dim V(lam) by the Weyl dimension formula in exact arithmetic."""
    s = datum.symmetrizer
    num = Fraction(1)
    for root in positive_roots(datum):
        # (varpi_i, alpha_j) = delta_ij s_j, so rescaling each alpha cancels in the ratio
        pair_rho = sum(root[j] * s[j] for j in range(datum.rank))
        pair_lam = sum(root[j] * s[j] * lam[j] for j in range(datum.rank))
        num *= (pair_lam + pair_rho) / pair_rho
    assert num.denominator == 1
    return int(num)


def fundamental_weight(datum: RootDatum, i: int) -> tuple[int, ...]:
    return tuple(int(j == i - 1) for j in range(datum.rank))


def rho(datum: RootDatum) -> tuple[int, ...]:
    return (1,) * datum.rank

