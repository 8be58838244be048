"""Run every verification scenario on its default sweep and print a summary.

    python scripts/run_suite.py [--json report.json] [--only gz hoshino]
"""

import argparse
import json
import sys
import time

from nzpolytope.verify import SCENARIOS, run_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="+", choices=SCENARIOS, default=list(SCENARIOS))
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args()

    reports = []
    ok = True
    for name in args.only:
        t0 = time.perf_counter()
        rep = run_scenario(name)
        dt = time.perf_counter() - t0
        n_bad = len(rep.failures())
        ok &= rep.passed
        print(f"{name:<15} {'PASS' if rep.passed else 'FAIL'}  {len(rep.checks):4d} checks  {n_bad} failed  {dt:6.2f}s")
        for c in rep.failures():
            print(f"    {c.name}: {c.details}")
        reports.append(rep.to_dict())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=1)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
