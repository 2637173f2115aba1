"""Run every CLI command on the test corpus and write all outputs to one file.

Used to check determinism: two runs with the same seed (and different
PYTHONHASHSEED values) must produce byte-identical files.

    python scripts/cli_batch.py out.txt [--seed 0] [--only NAME ...] [--skip-ei NAME ...]
"""
import argparse
import contextlib
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from corpus import FIXTURES, random_corpus  # noqa: E402

from grur.cli import main  # noqa: E402
from grur.parser import parse_poly  # noqa: E402


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def specialization_point(params, certificates):
    """First small positive integer point where no certificate vanishes."""
    certs = [parse_poly(c, (), params) for c in certificates]
    for k in range(1, 200):
        w = {p: Fraction(k + i) for i, p in enumerate(params)}
        if all(c.evaluate(w) != 0 for c in certs):
            return w
    raise RuntimeError("no specialization point found")


def main_batch(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("output")
    ap.add_argument("--seed", default="0")
    ap.add_argument("--only", nargs="*")
    args = ap.parse_args(argv)
    systems = list(FIXTURES.values()) + list(random_corpus())
    if args.only:
        systems = [s for s in systems if s.name in args.only]
    chunks = []
    with tempfile.TemporaryDirectory() as tmp:
        for sysm in systems:
            path = os.path.join(tmp, sysm.name + ".json")
            with open(path, "w") as fh:
                json.dump(sysm.as_json(), fh)
            seed = ["--seed", args.seed]
            code, la = run(["la", path, *seed])
            g = json.loads(la)
            w = specialization_point(sysm.params, g["certificates"])
            at = [f"--at={p}={v}" for p, v in w.items()]
            jobs = [
                ("la", code, la),
                ("ei", *run(["ei", path, *seed])),
                ("specialize", *run(["specialize", path, *at, *seed])),
                ("check-sep", *run(["check-sep", path, "--form", g["t_display"], *seed])),
                ("classify", *run(["classify", path, *seed])),
            ]
            for name, code, out in jobs:
                chunks.append(f"### {sysm.name} {name} exit={code}\n{out}")
    with open(args.output, "w") as fh:
        fh.write("".join(chunks))


if __name__ == "__main__":
    main_batch()
