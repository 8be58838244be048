"""End-to-end verification scenarios.

Each scenario returns a :class:`VerificationReport`; a check is a named boolean
with a short detail string.  Mathematical failures are reported as failed
checks, never raised.  Input errors (bad word, bad weight) do raise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .crystal import (
    CrystalGraph,
    demazure_crystal,
    generate_crystal,
    i_strings,
    opposite_demazure,
    string_fiber_iso_check,
)
from .demazure import demazure_chain, lambda_data
from .oracles import counterexample_scenario, gz_system, gz_word, hoshino_system, hoshino_word
from .polytope import (
    RationalPolytope,
    affine_map,
    dilate,
    extract_fibers,
    hull_equals,
    is_lattice_polytope,
    minkowski_sum,
    normal_fan_equal,
    nz_polytope,
    project_to_affine_hull,
    reflexive_report,
)
from .rootdata import RootDatum, is_longest_word, root_datum, weyl_dimension

__all__ = [
    "Check",
    "VerificationReport",
    "SUITE_WORDS",
    "SCENARIOS",
    "run_scenario",
    "verify_main_theorem",
    "verify_minkowski",
    "verify_reflexive",
    "verify_counterexample",
    "verify_eta_iso",
    "verify_gz",
    "verify_hoshino",
]

# (type, rank, word) cases used by the default sweeps
SUITE_WORDS: tuple[tuple[str, int, tuple[int, ...]], ...] = (
    ("A", 2, (1, 2, 1)),
    ("A", 3, (1, 2, 1, 3, 2, 1)),
    ("B", 2, (2, 1, 2, 1)),
    ("C", 2, (2, 1, 2, 1)),
    ("G", 2, (1, 2, 1, 2, 1, 2)),
    ("G", 2, (2, 1, 2, 1, 2, 1)),
)


@dataclass
class Check:
    name: str
    passed: bool
    details: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "details": self.details}


@dataclass
class VerificationReport:
    scenario: str
    checks: list[Check] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, details: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), details))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "timings": {k: round(v, 4) for k, v in sorted(self.timings.items())},
        }


def _weights(rank: int, values: Sequence[int]) -> list[tuple[int, ...]]:
    return [tuple(w) for w in product(values, repeat=rank)]


def _case(datum: RootDatum, word: Sequence[int]) -> tuple[int, ...]:
    word = tuple(word)
    if not is_longest_word(datum, word):
        raise ValueError(f"{word} is not a reduced word for the longest element of {datum.name}")
    return word


def _tag(datum: RootDatum, word, lam) -> str:
    return f"{datum.name} {','.join(map(str, word))} lambda={','.join(map(str, lam))}"


# ---------------------------------------------------------------- chain vs crystal


def verify_main_theorem(
    datum: RootDatum,
    word: Sequence[int],
    weights: Sequence[Sequence[int]] | None = None,
    stabilization_m: int = 2,
    report: VerificationReport | None = None,
) -> VerificationReport:
    """Chain from ``a_lambda`` equals ``hat - Delta(lambda)``; Delta is a lattice polytope with ``2 Delta = Delta(2 lambda)``.

    The chain runs with the crystal attached, so every step also asserts
    ``L_k(c) >= 0`` and the box recursion; an assertion failure becomes a
    failed check.
    """
    word = _case(datum, word)
    rep = report or VerificationReport("main-theorem")
    t0 = time.perf_counter()
    for lam in weights if weights is not None else _weights(datum.rank, (0, 1, 2)):
        lam = tuple(lam)
        tag = _tag(datum, word, lam)
        graph = generate_crystal(datum, word, lam)
        rep.add(f"{tag}: |B| = Weyl dimension", len(graph) == weyl_dimension(datum, lam), f"{len(graph)}")
        nz = nz_polytope(datum, word, lam, stabilization_m=stabilization_m)
        delta = nz.polytope
        ld = lambda_data(datum, word, lam)
        try:
            chain = demazure_chain(datum, word, lam, graph=graph)
        except AssertionError as exc:
            rep.add(f"{tag}: inline fiber checks", False, str(exc))
            continue
        rep.add(f"{tag}: inline fiber checks", chain.ok, chain.kind)
        if not chain.ok:
            continue
        expected = {tuple(h - x for h, x in zip(ld.hat_vector, b)) for b in graph.elements}
        rep.add(f"{tag}: chain points = hat - Psi(B)", chain.points == expected)
        target = affine_map(delta, -1, ld.hat_vector)
        rep.add(f"{tag}: chain polytope = hat - Delta", chain.equals_polytope(target))
        rep.add(f"{tag}: Delta stabilized", nz.stabilized, nz.status)
        rep.add(f"{tag}: Delta is a lattice polytope", is_lattice_polytope(delta))
        big = generate_crystal(datum, word, tuple(2 * x for x in lam)).elements
        rep.add(f"{tag}: 2 Delta = Delta(2 lambda)", hull_equals(big, dilate(delta, 2)))
    rep.timings[f"main-theorem {datum.name} {word}"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- Minkowski additivity


def verify_minkowski(
    datum: RootDatum, word: Sequence[int], values: Sequence[int] = (0, 1), report: VerificationReport | None = None
) -> VerificationReport:
    word = _case(datum, word)
    rep = report or VerificationReport("minkowski")
    t0 = time.perf_counter()
    ws = _weights(datum.rank, values)
    pts: dict[tuple, frozenset] = {}
    polys: dict[tuple, RationalPolytope] = {}

    def get(lam: tuple[int, ...]):
        if lam not in pts:
            pts[lam] = generate_crystal(datum, word, lam).element_set
            polys[lam] = nz_polytope(datum, word, lam, stabilization_m=1).polytope
        return pts[lam], polys[lam]

    for lam, mu in product(ws, ws):
        if lam > mu:
            continue
        tot = tuple(x + y for x, y in zip(lam, mu))
        p1, d1 = get(lam)
        p2, d2 = get(mu)
        p3, d3 = get(tot)
        sums = {tuple(x + y for x, y in zip(a, b)) for a in p1 for b in p2}
        tag = f"{datum.name} {','.join(map(str, word))} {lam}+{mu}"
        rep.add(f"{tag}: Psi(B) sumset", sums == set(p3), f"{len(sums)} vs {len(p3)}")
        rep.add(f"{tag}: Delta sum", minkowski_sum(d1, d2) == d3)
    rep.timings[f"minkowski {datum.name} {word}"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- reflexivity and fans


def verify_reflexive(
    datum: RootDatum,
    word: Sequence[int],
    regular: Sequence[Sequence[int]] | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    word = _case(datum, word)
    rep = report or VerificationReport("reflexive")
    t0 = time.perf_counter()
    two_rho = (2,) * datum.rank
    delta = nz_polytope(datum, word, two_rho, stabilization_m=1).polytope
    proj = project_to_affine_hull(delta)
    rr = reflexive_report(proj.polytope)
    tag = _tag(datum, word, two_rho)
    rep.add(f"{tag}: projected Delta(2 rho) reflexive", rr.reflexive, rr.reason)
    if rr.reflexive:
        centre = proj.lift(rr.interior_points[0])
        rep.add(f"{tag}: interior point lifts into Delta", delta.is_interior(centre), str(tuple(map(str, centre))))
    pair = [tuple(x) for x in regular] if regular is not None else [(1,) * datum.rank, (2,) + (1,) * (datum.rank - 1)]
    p, q = (nz_polytope(datum, word, lam, stabilization_m=1).polytope for lam in pair[:2])
    rep.add(f"{datum.name} {','.join(map(str, word))}: normal fans of {pair[0]} and {pair[1]} agree", normal_fan_equal(p, q))
    rep.timings[f"reflexive {datum.name} {word}"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- the non-parapolytope chain


def verify_counterexample(report: VerificationReport | None = None) -> VerificationReport:
    """Reproduce a chain that stops because step four leaves the parapolytopes."""
    sc = counterexample_scenario()
    rep = report or VerificationReport("counterexample")
    t0 = time.perf_counter()
    idx = sc.indexing
    chain = demazure_chain(sc.datum, sc.word, start=sc.a_low, step=sc.step, check_all_colors=False)
    rep.add("chain halts as not a parapolytope", chain.kind == "not_parapolytope", chain.kind)
    rep.add(f"chain fails at step {sc.failing_step}", chain.failed_step == sc.failing_step, str(chain.failed_step))
    rep.add("steps completed = 4", chain.steps_completed == sc.failing_step - 1, str(chain.steps_completed))
    if chain.steps_completed < sc.failing_step - 1:
        return rep
    s_int = chain.step
    for l in range(1, sc.ok_steps + 1):
        pts = chain.intermediates[l]
        ok = all(extract_fibers(pts, idx, j, s_int) for j in range(1, sc.datum.rank + 1))
        rep.add(f"step {l} output has box fibers for every color", ok)
    expected = sc.step4_polytope()
    rep.add("step 4 polytope matches the listed constraints", chain.equals_polytope(expected, sc.failing_step - 1))
    wit = chain.witness
    rep.add("failure is along the failing color", getattr(wit, "color", None) == sc.failing_color)
    c_scaled = tuple(int(x * chain.scale) for x in sc.witness_complement)
    in_witness = wit is not None and c_scaled in wit.witnesses
    rep.add("listed fiber is among the non-box witnesses", in_witness)
    if in_witness:
        blocks = {tuple(Fraction(x, chain.scale) for x in b) for b in wit.witnesses[c_scaled]}
        fiber = sc.fiber_polytope()
        rep.add("listed fiber is the expected triangle", hull_equals(blocks, fiber), f"{len(blocks)} lattice points")
        rep.add("expected triangle is not a box", len(fiber.vertices) == 3)
    rep.timings["counterexample"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- strings and eta


def _string_property(graph: CrystalGraph, rep: VerificationReport, tag: str) -> None:
    n_pos = len(graph.word)
    ok_opp = ok_dem = True
    for i in range(1, graph.datum.rank + 1):
        strings = i_strings(graph, i)
        for k in range(1, n_pos + 2):
            opp = opposite_demazure(graph, k)
            dem = demazure_crystal(graph, graph.word[: k - 1])
            for s in strings:
                hit = [b for b in s if b in opp]
                if hit and len(hit) != len(s) and hit != [s[-1]]:
                    ok_opp = False
                hit = [b for b in s if b in dem]
                if hit and len(hit) != len(s) and hit != [s[0]]:
                    ok_dem = False
    rep.add(f"{tag}: string property, opposite Demazure sets", ok_opp)
    rep.add(f"{tag}: string property, Demazure sets", ok_dem)


def verify_eta_iso(
    cases: Sequence[tuple[RootDatum, Sequence[int], Sequence[int]]] | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    rep = report or VerificationReport("eta-iso")
    t0 = time.perf_counter()
    if cases is None:
        cases = [
            (root_datum("A", 2), (1, 2, 1), (1, 1)),
            (root_datum("C", 2), (2, 1, 2, 1), (1, 1)),
            (root_datum("G", 2), (1, 2, 1, 2, 1, 2), (1, 0)),
        ]
    for datum, word, lam in cases:
        word = _case(datum, word)
        graph = generate_crystal(datum, word, tuple(lam))
        tag = _tag(datum, word, lam)
        _string_property(graph, rep, tag)
        idx = graph.indexing
        ok, count = True, 0
        for i in range(1, datum.rank + 1):
            for c in sorted({idx.complement(a, i) for a in graph.elements}):
                count += 1
                ok &= string_fiber_iso_check(graph, i, c)
        rep.add(f"{tag}: eta commutes with e and f on every fiber", ok, f"{count} fibers")
    rep.timings["eta-iso"] = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------- oracles


def verify_gz(
    ranks: Sequence[int] = (2, 3),
    values: Sequence[int] = (0, 1, 2),
    weights: Sequence[Sequence[int]] | None = None,
    report: VerificationReport | None = None,
) -> VerificationReport:
    rep = report or VerificationReport("gz")
    t0 = time.perf_counter()
    for n in ranks:
        datum = root_datum("A", n)
        word = gz_word(n)
        for lam in weights if weights is not None else _weights(n, values):
            lam = tuple(lam)
            gz = gz_system(n, lam, word)
            delta = nz_polytope(datum, word, lam, stabilization_m=1).polytope
            moved = affine_map(delta, 1, gz.translation)
            rep.add(f"{_tag(datum, word, lam)}: Delta + shift = GZ polytope", moved == gz.system.polytope())
    rep.timings["gz"] = time.perf_counter() - t0
    return rep


def verify_hoshino(
    cases: Sequence[tuple[str, int]] = (("B", 2), ("C", 2), ("C", 3)),
    values: Sequence[int] = (0, 1),
    report: VerificationReport | None = None,
) -> VerificationReport:
    rep = report or VerificationReport("hoshino")
    t0 = time.perf_counter()
    for t, n in cases:
        datum = root_datum(t, n)
        word = hoshino_word(t, n)
        for lam in _weights(n, values):
            system = hoshino_system(t, n, lam, word)
            crystal = generate_crystal(datum, word, lam).element_set
            rep.add(f"{_tag(datum, word, lam)}: lattice points = Psi(B)", system.lattice_points() == crystal)
    rep.timings["hoshino"] = time.perf_counter() - t0
    return rep


def _sweep(fn: Callable[..., VerificationReport], name: str, **kw) -> VerificationReport:
    rep = VerificationReport(name)
    for t, n, word in SUITE_WORDS:
        fn(root_datum(t, n), word, report=rep, **kw)
    return rep


SCENARIOS = ("main-theorem", "minkowski", "reflexive", "counterexample", "eta-iso", "gz", "hoshino")


def run_scenario(
    name: str,
    datum: RootDatum | None = None,
    word: Sequence[int] | None = None,
    weights: Sequence[Sequence[int]] | None = None,
    stabilization_m: int = 2,
) -> VerificationReport:
    """Run one scenario; without ``datum``/``word`` the sweep scenarios cover every suite word."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    if name == "counterexample":
        return verify_counterexample()
    if name == "eta-iso":
        if datum is not None and word is not None:
            lams = weights or [(1,) * datum.rank]
            return verify_eta_iso([(datum, word, lam) for lam in lams])
        return verify_eta_iso()
    if name == "gz":
        if datum is not None:
            if datum.lie_type != "A":
                raise ValueError("the Gelfand-Zetlin scenario needs type A")
            return verify_gz(ranks=(datum.rank,), weights=weights)
        return verify_gz()
    if name == "hoshino":
        if datum is not None:
            return verify_hoshino(cases=((datum.lie_type, datum.rank),))
        return verify_hoshino()
    if (datum is None) != (word is None):
        raise ValueError("give both a type and a word, or neither")
    if name == "main-theorem":
        if datum is None:
            return _sweep(verify_main_theorem, name, stabilization_m=stabilization_m)
        return verify_main_theorem(datum, word, weights, stabilization_m=stabilization_m)
    if name == "minkowski":
        return _sweep(verify_minkowski, name) if datum is None else verify_minkowski(datum, word)
    if datum is None:
        return _sweep(verify_reflexive, name)
    return verify_reflexive(datum, word, weights)

