"""Command-line front end.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad input.
All output is JSON on stdout (or atomically written to ``--out``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .crystal import DEFAULT_CAP, CrystalCapExceeded, generate_crystal
from .demazure import NotConstantError, ResolutionError, demazure_chain, lambda_data
from .oracles import counterexample_scenario, gz_system, gz_word, hoshino_system, hoshino_word
from .polytope import UnboundedError, check_parapolytope, lattice_points, nz_polytope
from .rootdata import RootDatum, is_longest_word, parse_int_list, parse_type, word_indexing
from .verify import SCENARIOS, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _q(x) -> str:
    return str(Fraction(x))


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=False) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _datum(args) -> RootDatum:
    if args.type is None:
        raise UsageError("--type is required")
    return parse_type(args.type, g2_long_first=args.g2_long_first)


def _word(datum: RootDatum, text: str | None) -> tuple[int, ...]:
    if text is None:
        raise UsageError("--word is required")
    word = parse_int_list(text)
    if any(not 1 <= x <= datum.rank for x in word):
        raise UsageError(f"letters of {word} must lie in 1..{datum.rank}")
    if not is_longest_word(datum, word):
        raise UsageError(f"{word} is not a reduced word for the longest element of {datum.name}")
    return word


def _lam(datum: RootDatum, text: str | None) -> tuple[int, ...]:
    if text is None:
        raise UsageError("--lambda is required")
    lam = parse_int_list(text)
    if len(lam) != datum.rank or any(x < 0 for x in lam):
        raise UsageError(f"--lambda must list {datum.rank} nonnegative integers")
    return lam


# ---------------------------------------------------------------- subcommands


def cmd_generate(args) -> int:
    datum = _datum(args)
    word = _word(datum, args.word)
    lam = _lam(datum, args.lam)
    graph = generate_crystal(datum, word, lam, cap=args.cap)
    doc = json.loads(graph.to_json())
    doc["size"] = len(graph)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_polytope(args) -> int:
    datum = _datum(args)
    word = _word(datum, args.word)
    lam = _lam(datum, args.lam)
    res = nz_polytope(datum, word, lam, stabilization_m=args.stabilization_m, cap=args.cap)
    doc = {
        "type": datum.name,
        "word": list(word),
        "lambda": list(lam),
        "status": res.status,
        "multiples_checked": list(res.multiples_checked),
        "num_lattice_points": len(res.lattice_points),
        "polytope": res.polytope.to_dict(),
    }
    if args.max_scale:
        v = check_parapolytope(res.polytope, word_indexing(word, datum.rank), args.max_scale)
        doc["parapolytope"] = {
            "passed": v.passed,
            "scales_checked": list(v.scales_checked),
            "failure_scale": v.failure_scale,
            "witness_fibers": [[_q(x) for x in c] for c in v.witness_fibers()],
        }
    _emit(doc, args.out)
    return EXIT_OK if res.stabilized else EXIT_FAIL


def cmd_demazure_chain(args) -> int:
    datum = _datum(args)
    word = _word(datum, args.word)
    lam = _lam(datum, args.lam) if args.lam is not None else None
    start = None
    if args.start is not None:
        start = tuple(Fraction(t) for t in args.start.split(","))
        if len(start) != len(word):
            raise UsageError(f"--start needs {len(word)} coordinates")
    elif lam is None:
        raise UsageError("give --lambda or --start")
    graph = generate_crystal(datum, word, lam, cap=args.cap) if (lam is not None and args.check_crystal) else None
    res = demazure_chain(datum, word, lam, start=start, step=Fraction(args.step), steps=args.steps, graph=graph)
    doc = {
        "type": datum.name,
        "word": list(word),
        "start": [_q(x) for x in (start if start is not None else lambda_data(datum, word, lam).a_lambda)],
        "kind": res.kind,
        "steps_completed": res.steps_completed,
        "failed_step": res.failed_step,
        "trace": [
            {
                "k": r.k,
                "color": r.color,
                "fibers_processed": r.fibers_processed,
                "min_L": None if r.min_L is None else _q(r.min_L),
                "points_after": r.num_points,
                "polytope": res.intermediate_polytope(r.k).to_dict() if r.k <= res.steps_completed else None,
            }
            for r in res.trace
        ],
    }
    if res.ok:
        doc["polytope"] = res.polytope.to_dict()
    else:
        w = res.witness_unscaled()
        if isinstance(w, dict):
            doc["witness"] = [
                {"base": [_q(x) for x in c], "blocks": [[_q(x) for x in b] for b in blocks]} for c, blocks in w.items()
            ]
        else:
            doc["witness"] = {
                "base": [_q(x) for x in w.c],
                "mu": [_q(x) for x in w.mu],
                "nu": [_q(x) for x in w.nu],
                "expansion": _q(w.expansion),
            }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.system == "counterexample":
        sc = counterexample_scenario()
        P = sc.step4_polytope()
        doc = {
            "system": "counterexample",
            "word": list(sc.word),
            "a_low": [_q(x) for x in sc.a_low],
            "step": _q(sc.step),
            "failing_step": sc.failing_step,
            "witness_base": [_q(x) for x in sc.witness_complement],
            "step4_polytope": P.to_dict(),
        }
        _emit(doc, args.out)
        return EXIT_OK
    datum = _datum(args)
    lam = _lam(datum, args.lam)
    if args.system == "gz":
        if datum.lie_type != "A":
            raise UsageError("the Gelfand-Zetlin system is for type A")
        gz = gz_system(datum.rank, lam)
        system, word, extra = gz.system, gz_word(datum.rank), {"translation": list(gz.translation)}
    else:
        system = hoshino_system(datum.lie_type, datum.rank, lam)
        word, extra = hoshino_word(datum.lie_type, datum.rank), {}
    poly = system.polytope()
    doc = {
        "system": args.system,
        "type": datum.name,
        "word": list(word),
        "lambda": list(lam),
        **extra,
        "constraints": system.to_dict()["constraints"],
        "polytope": poly.to_dict(),
        "num_lattice_points": len(lattice_points(poly)),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _scenario_id(args) -> str:
    parts = [args.scenario]
    if args.type:
        parts.append(args.type)
    if args.word:
        parts.append(args.word.replace(",", ""))
    for lam in args.lam or []:
        parts.append("l" + lam.replace(",", ""))
    return "_".join(parts)


def cmd_verify(args) -> int:
    datum = _datum(args) if args.type else None
    word = _word(datum, args.word) if (datum is not None and args.word) else None
    weights = [_lam(datum, t) for t in args.lam] if (datum is not None and args.lam) else None
    rep = run_scenario(args.scenario, datum, word, weights, stabilization_m=args.stabilization_m)
    doc = rep.to_dict()
    code = EXIT_OK if rep.passed else EXIT_FAIL
    if args.golden_dir:
        path = Path(args.golden_dir) / f"{_scenario_id(args)}.json"
        stable = {k: v for k, v in doc.items() if k != "timings"}
        if args.regen_golden:
            _emit(stable, str(path))
        elif not path.exists():
            raise UsageError(f"no golden file {path}; rerun with --regen-golden")
        elif json.loads(path.read_text()) != stable:
            doc["golden"] = "mismatch"
            code = EXIT_FAIL
        else:
            doc["golden"] = "match"
    _emit(doc, args.out)
    return code


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nzpolytope", allow_abbrev=False, description="Crystals, NZ polytopes and Demazure operator chains.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_word: bool = True) -> None:
        sp.add_argument("--type", help="Lie type and rank, e.g. A2")
        if need_word:
            sp.add_argument("--word", help="comma-separated reduced word, 1-based")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        sp.add_argument("--json", action="store_true", help="accepted for compatibility; output is always JSON")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest crystal to generate")
        sp.add_argument("--g2-long-first", action="store_true", help="G2 with the long root first")

    g = sub.add_parser("generate", allow_abbrev=False, help="generate a crystal in the Kashiwara embedding")
    common(g)
    g.add_argument("--lambda", dest="lam", help="comma-separated <lambda, h_i>")
    g.set_defaults(func=cmd_generate)

    pp = sub.add_parser("polytope", allow_abbrev=False, help="NZ polytope as the hull of the crystal")
    common(pp)
    pp.add_argument("--lambda", dest="lam")
    pp.add_argument("--stabilization-m", type=int, default=2)
    pp.add_argument("--max-scale", type=int, default=0, help="also test lattice fibers up to this dilation")
    pp.set_defaults(func=cmd_polytope)

    dc = sub.add_parser("demazure-chain", allow_abbrev=False, help="apply the Demazure operators D^(1), D^(2), ...")
    common(dc)
    dc.add_argument("--lambda", dest="lam")
    dc.add_argument("--start", help="comma-separated rational start point (default a_lambda)")
    dc.add_argument("--step", default="1", help="lattice spacing, e.g. 1/12")
    dc.add_argument("--steps", type=int, default=None, help="stop after this many operators")
    dc.add_argument("--check-crystal", action="store_true", help="assert every step against the crystal")
    dc.set_defaults(func=cmd_demazure_chain)

    o = sub.add_parser("oracle", allow_abbrev=False, help="closed-form inequality systems")
    o.add_argument("system", choices=("gz", "hoshino", "counterexample"))
    common(o, need_word=False)
    o.add_argument("--lambda", dest="lam")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", allow_abbrev=False, help="run an end-to-end verification scenario")
    v.add_argument("scenario", choices=SCENARIOS)
    common(v)
    v.add_argument("--lambda", dest="lam", action="append", help="weight to check (repeatable)")
    v.add_argument("--stabilization-m", type=int, default=2)
    v.add_argument("--golden-dir", help="compare against (or write) golden JSON here")
    v.add_argument("--regen-golden", action="store_true", help="rewrite the golden file")
    v.set_defaults(func=cmd_verify)
    return p


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """``--start -1/3,...`` would be read as an option; pass it as ``--start=-1/3,...``."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


_VALUE_FLAGS = ("--start", "--step")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, CrystalCapExceeded, UnboundedError, NotConstantError, ResolutionError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
