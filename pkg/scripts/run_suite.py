"""Run the acceptance battery and write the per-criterion results as JSON.

    python3 scripts/run_suite.py --only 1-11 --out results.json
"""

import argparse
import json
import sys
import time

from schurcone import cache
from schurcone.cli import _parse_numbers
from schurcone.suite import CRITERIA, run_suite


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--only", default=None)
    p.add_argument("--skip", default="12")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--out", default=None)
    args = p.parse_args()
    numbers = _parse_numbers(args.only) if args.only else sorted(CRITERIA)
    skip = set(_parse_numbers(args.skip)) if args.skip else set()
    numbers = [n for n in numbers if n not in skip]
    disk = cache.DiskCache(args.cache_dir) if args.cache_dir else None
    t0 = time.perf_counter()
    with cache.using(disk):
        results = run_suite(numbers, progress=print)
    print(f"total {time.perf_counter() - t0:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_json() for r in results], fh, indent=2)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
