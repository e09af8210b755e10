"""Run the verification pipeline over a grid of chain sizes and tabulate the outcome.

    python scripts/run_verification.py --sizes 3:2 5:3 4:3 --out reports/
"""

import argparse
from pathlib import Path

from taubethe.cli import run_verify
from taubethe.config import RunConfig


def parse_size(text):
    L, n = text.split(":")
    return int(L), int(n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", type=parse_size, default=[(3, 2), (4, 2), (5, 2), (5, 3), (4, 3)])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--max-solutions", type=int, default=2)
    ap.add_argument("--out", type=Path, help="directory for one JSON report per size")
    args = ap.parse_args()

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    print(f"{'size':8s} {'records':>7s} {'passed':>6s} {'failed':>6s}  worst residual / threshold")
    for L, n in args.sizes:
        cfg = RunConfig.from_dict({"chain": {"L": L, "nu": "auto"}, "n_roots": n, "seed": args.seed,
                                   "max_solutions": args.max_solutions})
        rep = run_verify(cfg)
        sm = rep.summary
        ratio = max((r.residual / r.threshold for r in rep.records if r.threshold > 0), default=0.0)
        print(f"L{L}N{n:<5d} {sm['total']:7d} {sm['passed']:6d} {sm['failed']:6d}  {ratio:.2e}")
        for r in rep.records:
            if r.status == "fail":
                print(f"    fail {r.name} [{r.fixture}]: {r.detail.get('message', r.residual)}"[:160])
        if args.out:
            (args.out / f"report_L{L}N{n}.json").write_text(rep.to_json() + "\n")


if __name__ == "__main__":
    main()
