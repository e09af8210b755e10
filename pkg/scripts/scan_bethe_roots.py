"""Multi-start Bethe root search statistics: solutions found, rejection reasons, timing."""

import argparse
import time

import numpy as np

from taubethe.bethe import SolverExhaustedError, solve_bethe
from taubethe.core import SampleConfig
from taubethe.xxz import ChainSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-sites", type=int, default=6)
    ap.add_argument("--starts", type=int, default=400)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--gamma", type=complex, default=0.4 + 0.15j)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'L':>2s} {'N':>2s} {'found':>5s} {'time s':>7s}  notes")
    for L in range(1, args.max_sites + 1):
        chain = ChainSpec(tuple(rng.uniform(0.1, 1.0, size=L)), args.gamma)
        for n in range(1, L + 1):
            t0 = time.perf_counter()
            try:
                sols = solve_bethe(chain, n, SampleConfig(seed=args.seed), max_solutions=50,
                                   max_starts=args.starts)
                note = f"max eigencheck {max(s.eigencheck for s in sols):.1e}"
                found = len(sols)
            except SolverExhaustedError as exc:
                found, note = 0, f"exhausted, rejected {exc.rejected}"
            print(f"{L:2d} {n:2d} {found:5d} {time.perf_counter() - t0:7.2f}  {note}")


if __name__ == "__main__":
    main()
