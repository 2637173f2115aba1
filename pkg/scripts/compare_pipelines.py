"""Run both pipelines on the test corpus and print timings and agreement.

    python scripts/compare_pipelines.py [--only NAME ...]
"""
import argparse
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from corpus import FIXTURES, random_corpus  # noqa: E402

from grur.grur_ei import grur_ei  # noqa: E402
from grur.rur import grur_la  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args(argv)
    systems = list(FIXTURES.values()) + list(random_corpus())
    if args.only:
        systems = [s for s in systems if s.name in args.only]
    print(f"{'system':22s} {'D':>3s} {'t':>12s} {'la s':>8s} {'ei s':>8s}  same")
    total = [0.0, 0.0]
    for sysm in systems:
        F = sysm.parametric()
        t0 = time.perf_counter()
        la = grur_la(F, 0)
        t1 = time.perf_counter()
        ei = grur_ei(F, 0)
        t2 = time.perf_counter()
        total[0] += t1 - t0
        total[1] += t2 - t1
        print(f"{sysm.name:22s} {la.D:3d} {la.t.label(la.vars):>12s} {t1 - t0:8.2f} {t2 - t1:8.2f}  {la == ei}")
    print(f"{'total':22s} {'':3s} {'':12s} {total[0]:8.2f} {total[1]:8.2f}")


if __name__ == "__main__":
    main()
