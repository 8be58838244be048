"""Highest-weight crystals realised inside Z^N through the Kashiwara embedding.

An element of ``B(lambda)`` is stored as the integer tuple ``a = (a_1, ..., a_N)``
attached to a reduced word ``(i_1, ..., i_N)`` for the longest Weyl element.
Coordinate ``a_m`` carries color ``i_m``.  The full crystal element is
``(..., 0, 0, a_1, ..., a_N) (x) r_lambda``; positions to the left of ``a_1`` are
an all-zero buffer that must never be touched.

With positions counted left to right, the sigma function is

    sigma_m(a) = a_m + sum_{p < m} c[i_m][i_p] a_p,

``f_i`` raises the coordinate at the right-most maximiser of ``sigma`` over
color-``i`` positions and ``e_i`` lowers the left-most one.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .rootdata import RootDatum, WordIndexing, is_longest_word, weyl_act, weyl_dimension, word_indexing

__all__ = [
    "EmbeddedCrystal",
    "CrystalGraph",
    "CrystalCapExceeded",
    "Sl2String",
    "generate_crystal",
    "extremal_element",
    "extremal_vector",
    "opposite_demazure",
    "opposite_demazure_by_raising",
    "demazure_crystal",
    "i_strings",
    "color_fibers",
    "string_fiber_iso_check",
    "character",
    "char_demazure",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 200_000

Vec = tuple[int, ...]


class CrystalCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EmbeddedCrystal:
    """Crystal operations on ``Z^N (x) r_lambda`` for a fixed word and weight."""

    datum: RootDatum
    word: tuple[int, ...]
    lam: tuple[int, ...]
    buffer_colors: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.lam) != self.datum.rank:
            raise ValueError(f"weight {self.lam} has wrong length for {self.datum.name}")
        n = self.datum.rank
        # Buffer colors continue the word to the left, cycling so neighbours differ.
        colors: list[int] = []
        prev = self.word[0] if self.word else 1
        for _ in range(2 * n):
            prev = prev % n + 1
            colors.append(prev)
        object.__setattr__(self, "buffer_colors", tuple(colors))

    @property
    def length(self) -> int:
        return len(self.word)

    def sigmas(self, a: Vec, i: int) -> list[tuple[int, int]]:
        """``(position, sigma)`` for every color-``i`` position, left to right (1-based positions)."""
        c = self.datum.cartan
        row = c[i - 1]
        out = []
        acc = 0  # sum_{p < m} c[i][i_p] a_p
        for m, (letter, x) in enumerate(zip(self.word, a), start=1):
            if letter == i:
                out.append((m, x + acc))
            acc += row[letter - 1] * x
        return out

    def sigma_k(self, a: Vec, k: int) -> int:
        """sigma at embedding position ``k``; buffer positions ``N < k <= N + 2n`` give 0."""
        n_pos = self.length
        if not 1 <= k <= n_pos + len(self.buffer_colors):
            raise IndexError(f"position {k} out of range 1..{n_pos + len(self.buffer_colors)}")
        if k > n_pos:
            return 0
        i = self.word[k - 1]
        for m, s in self.sigmas(a, i):
            if m == k:
                return s
        raise AssertionError("unreachable")

    def weight_pairing(self, a: Vec, i: int) -> int:
        """``<wt(a), h_i>`` for the bare ``Z^N`` factor (no ``r_lambda``)."""
        row = self.datum.cartan[i - 1]
        return -sum(row[letter - 1] * x for letter, x in zip(self.word, a) if x)

    def _eps_a(self, a: Vec, i: int) -> int:
        return max(0, max(s for _, s in self.sigmas(a, i)))

    def epsilon(self, a: Vec, i: int) -> int:
        w = self.weight_pairing(a, i)
        return max(self._eps_a(a, i), -self.lam[i - 1] - w)

    def phi(self, a: Vec, i: int) -> int:
        w = self.weight_pairing(a, i)
        return max(0, self._eps_a(a, i) + w + self.lam[i - 1])

    def weight(self, a: Vec) -> tuple[int, ...]:
        """``lambda - sum_m a_m alpha_{i_m}`` in fundamental-weight coordinates."""
        c = self.datum.cartan
        mu = list(self.lam)
        for letter, x in zip(self.word, a):
            if x:
                for r in range(len(mu)):
                    mu[r] -= x * c[r][letter - 1]
        return tuple(mu)

    def f_tilde(self, a: Vec, i: int) -> Vec | None:
        sig = self.sigmas(a, i)
        top = max(s for _, s in sig)
        eps_a = max(0, top)
        if eps_a + self.weight_pairing(a, i) + self.lam[i - 1] <= 0:
            return None  # the operator would hit r_lambda
        # Buffer sigmas are all 0; a real position wins ties since it sits further right.
        assert top >= 0, f"f_{i} would leave the word range at {a}"
        m = max(p for p, s in sig if s == top)
        out = list(a)
        out[m - 1] += 1
        return tuple(out)

    def e_tilde(self, a: Vec, i: int) -> Vec | None:
        sig = self.sigmas(a, i)
        top = max(s for _, s in sig)
        eps_a = max(0, top)
        if eps_a + self.weight_pairing(a, i) < -self.lam[i - 1]:
            return None  # acts on r_lambda, which has no e-successor
        if top <= 0:
            return None
        m = min(p for p, s in sig if s == top)
        out = list(a)
        out[m - 1] -= 1
        return tuple(out)


@dataclass(frozen=True)
class CrystalGraph:
    datum: RootDatum
    word: tuple[int, ...]
    lam: tuple[int, ...]
    elements: tuple[Vec, ...]
    edges: Mapping[tuple[Vec, int], Vec]
    highest: Vec
    lowest: Vec

    @property
    def ops(self) -> EmbeddedCrystal:
        return EmbeddedCrystal(self.datum, self.word, self.lam)

    @property
    def indexing(self) -> WordIndexing:
        return word_indexing(self.word, self.datum.rank)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, a: object) -> bool:
        return a in self.element_set

    @property
    def element_set(self) -> frozenset[Vec]:
        cached = self.__dict__.get("_elset")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_elset", cached)
        return cached

    def f(self, a: Vec, i: int) -> Vec | None:
        return self.edges.get((a, i))

    def e(self, a: Vec, i: int) -> Vec | None:
        rev = self.__dict__.get("_rev")
        if rev is None:
            rev = {(t, i): s for (s, i), t in self.edges.items()}
            object.__setattr__(self, "_rev", rev)
        return rev.get((a, i))

    def to_json(self) -> str:
        index = {a: n for n, a in enumerate(self.elements)}
        edges = sorted((index[s], i, index[t]) for (s, i), t in self.edges.items())
        doc = {
            "word": list(self.word),
            "lambda": list(self.lam),
            "elements": [list(a) for a in self.elements],
            "edges": [{"from": s, "color": i, "to": t} for s, i, t in edges],
        }
        return json.dumps(doc, indent=1)


def _check_inputs(datum: RootDatum, word: tuple[int, ...], lam: tuple[int, ...]) -> None:
    if len(lam) != datum.rank:
        raise ValueError(f"weight {lam} has wrong length for {datum.name}")
    if any(x < 0 for x in lam):
        raise ValueError(f"weight {lam} is not dominant")
    if not is_longest_word(datum, word):
        raise ValueError(f"{word} is not a reduced word for the longest element of {datum.name}")


def generate_crystal(
    datum: RootDatum, word: tuple[int, ...], lam: tuple[int, ...], cap: int = DEFAULT_CAP
) -> CrystalGraph:
    """Breadth-first closure of the highest element under all lowering operators."""
    word, lam = tuple(word), tuple(lam)
    _check_inputs(datum, word, lam)
    estimate = weyl_dimension(datum, lam)
    if estimate > cap:
        raise CrystalCapExceeded(f"dim V({lam}) = {estimate} exceeds cap {cap}")
    return _generate(datum, word, lam)


@lru_cache(maxsize=256)
def _generate(datum: RootDatum, word: tuple[int, ...], lam: tuple[int, ...]) -> CrystalGraph:
    ops = EmbeddedCrystal(datum, word, lam)
    n = datum.rank
    top: Vec = (0,) * len(word)
    seen = {top}
    edges: dict[tuple[Vec, int], Vec] = {}
    queue = deque([top])
    while queue:
        a = queue.popleft()
        for i in range(1, n + 1):
            b = ops.f_tilde(a, i)
            if b is None:
                continue
            assert min(b) >= 0, f"negative coordinate in {b}"
            edges[(a, i)] = b
            if b not in seen:
                seen.add(b)
                queue.append(b)
    sinks = [a for a in seen if all((a, i) not in edges for i in range(1, n + 1))]
    assert len(sinks) == 1, f"expected a unique lowest element, got {len(sinks)}"
    return CrystalGraph(
        datum=datum,
        word=word,
        lam=lam,
        elements=tuple(sorted(seen)),
        edges=edges,
        highest=top,
        lowest=sinks[0],
    )


def extremal_vector(datum: RootDatum, word: tuple[int, ...], lam: tuple[int, ...]) -> tuple[int, ...]:
    """``(x_1, ..., x_N)`` with ``x_l = -<w_{>=l} lambda, h_{i_l}>``."""
    out = []
    for l in range(1, len(word) + 1):
        mu = weyl_act(datum, word[l - 1 :], lam)
        out.append(-mu[word[l - 1] - 1])
    return tuple(out)


def extremal_element(datum: RootDatum, word: tuple[int, ...], lam: tuple[int, ...], k: int) -> Vec:
    """Image of ``b_{w_{>=k} lambda}``: zeros before position ``k``, then ``x_k, ..., x_N``."""
    n_pos = len(word)
    if not 1 <= k <= n_pos + 1:
        raise ValueError(f"k={k} out of range 1..{n_pos + 1}")
    x = extremal_vector(datum, word, lam)
    return (0,) * (k - 1) + x[k - 1 :]


def opposite_demazure(graph: CrystalGraph, k: int) -> frozenset[Vec]:
    """Elements whose coordinates at positions ``k..N`` equal the extremal ``x``."""
    n_pos = len(graph.word)
    if not 1 <= k <= n_pos + 1:
        raise ValueError(f"k={k} out of range 1..{n_pos + 1}")
    x = extremal_vector(graph.datum, graph.word, graph.lam)
    tail = x[k - 1 :]
    return frozenset(a for a in graph.elements if a[k - 1 :] == tail)


def _saturate(start: Iterable[Vec], colors: Iterable[int], step) -> set[Vec]:
    current = set(start)
    for i in colors:
        grown = set(current)
        for a in current:
            b = step(a, i)
            while b is not None:
                grown.add(b)
                b = step(b, i)
        current = grown
    return current


def opposite_demazure_by_raising(graph: CrystalGraph, k: int) -> frozenset[Vec]:
    """Same set as :func:`opposite_demazure`, built by raising from the lowest element.

    Raising strings are applied for ``i_1``, then ``i_2``, ..., up to ``i_{k-1}``.
    """
    colors = graph.word[: k - 1]
    return frozenset(_saturate([graph.lowest], colors, graph.e))


def demazure_crystal(graph: CrystalGraph, word_prefix: tuple[int, ...]) -> frozenset[Vec]:
    """``{f_{i_1}^{a_1} ... f_{i_r}^{a_r} b_lambda}``: saturate along ``i_r`` first, ``i_1`` last."""
    return frozenset(_saturate([graph.highest], reversed(tuple(word_prefix)), graph.f))


def i_strings(graph: CrystalGraph, i: int) -> list[tuple[Vec, ...]]:
    """All ``i``-strings, each listed from its highest to its lowest element."""
    out = []
    for a in graph.elements:
        if graph.e(a, i) is None:
            s = [a]
            b = graph.f(a, i)
            while b is not None:
                s.append(b)
                b = graph.f(b, i)
            out.append(tuple(s))
    return out


def color_fibers(points: Iterable[Vec], indexing: WordIndexing, i: int) -> dict[tuple, list[Vec]]:
    """Group points by their coordinates off color ``i``."""
    groups: dict[tuple, list[Vec]] = defaultdict(list)
    for a in points:
        groups[indexing.complement(a, i)].append(a)
    return dict(groups)


@dataclass(frozen=True)
class Sl2String:
    """``f^position b_length`` in the ``(length + 1)``-element sl2 crystal."""

    length: int
    position: int

    def __post_init__(self) -> None:
        if not 0 <= self.position <= self.length:
            raise ValueError(f"position {self.position} outside [0, {self.length}]")

    @property
    def epsilon(self) -> int:
        return self.position

    @property
    def phi(self) -> int:
        return self.length - self.position


def _tensor_data(factors: tuple[Sl2String, ...]) -> tuple[int, int]:
    """(epsilon, phi) of a left-associated tensor product."""
    eps, phi = factors[0].epsilon, factors[0].phi
    for s in factors[1:]:
        wt_left = phi - eps
        wt_right = s.phi - s.epsilon
        eps, phi = max(eps, s.epsilon - wt_left), max(s.phi, phi + wt_right)
    return eps, phi


def _tensor_op(factors: tuple[Sl2String, ...], raise_: bool) -> tuple[Sl2String, ...] | None:
    """Apply e (``raise_``) or f to ``((s_1 (x) s_2) (x) ...) (x) s_d`` by the tensor rule."""
    if len(factors) == 1:
        s = factors[0]
        p = s.position - 1 if raise_ else s.position + 1
        return (Sl2String(s.length, p),) if 0 <= p <= s.length else None
    left, right = factors[:-1], factors[-1]
    _, phi_left = _tensor_data(left)
    if raise_:
        on_left = phi_left >= right.epsilon
    else:
        on_left = phi_left > right.epsilon
    if on_left:
        new_left = _tensor_op(left, raise_)
        return None if new_left is None else new_left + (right,)
    new_right = _tensor_op((right,), raise_)
    return None if new_right is None else left + new_right


def string_fiber_iso_check(graph: CrystalGraph, i: int, c: tuple) -> bool:
    """Check that ``eta_i`` intertwines ``e_i``/``f_i`` on the fiber over ``c``."""
    idx = graph.indexing
    fiber = [a for a in graph.elements if idx.complement(a, i) == tuple(c)]
    if not fiber:
        raise ValueError(f"empty fiber over {c}")
    blocks = [idx.color_block(a, i) for a in fiber]
    d = len(blocks[0])
    mu = tuple(min(b[l] for b in blocks) for l in range(d))
    nu = tuple(max(b[l] for b in blocks) for l in range(d))
    box_size = 1
    for lo, hi in zip(mu, nu):
        box_size *= hi - lo + 1
    if box_size != len(set(blocks)):
        raise ValueError(f"fiber over {c} for color {i} is not a box")

    def eta(a: Vec) -> tuple[Sl2String, ...]:
        blk = idx.color_block(a, i)
        return tuple(Sl2String(nu[l] - mu[l], blk[l] - mu[l]) for l in range(d))

    for a in fiber:
        for raise_, op in ((True, graph.e), (False, graph.f)):
            b = op(a, i)
            lhs = None if b is None else eta(b)
            if lhs != _tensor_op(eta(a), raise_):
                return False
    return True


def character(points: Iterable[Vec], ops: EmbeddedCrystal) -> Counter:
    """Formal character ``sum e^{wt(b)}`` as a Counter keyed by weights."""
    return Counter(ops.weight(a) for a in points)


def char_demazure(chi: Mapping[tuple, int], i: int, datum: RootDatum) -> Counter:
    """Divided difference ``(e^mu - e^{s_i mu + alpha_i}) / (1 - e^{alpha_i})`` term by term."""
    alpha = datum.simple_root(i)
    out: Counter = Counter()

    def shift(mu: tuple, t: int) -> tuple:
        return tuple(m + t * a for m, a in zip(mu, alpha))

    for mu, coeff in chi.items():
        if not coeff:
            continue
        n = mu[i - 1]
        # Numerator is e^mu (1 - e^{(1 - n) alpha}); geometric series in e^alpha.
        if n <= 0:
            for t in range(0, 1 - n):
                out[shift(mu, t)] += coeff
        else:
            for t in range(1 - n, 0):
                out[shift(mu, t)] -= coeff
    return Counter({k: v for k, v in out.items() if v})

