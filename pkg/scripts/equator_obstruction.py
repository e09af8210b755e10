"""Why even chains have no N > L/2 Bethe eigenvectors with finite roots.

Each transfer-matrix eigenstate in the N-magnon sector has a Q-polynomial
Q(x) = sum_p c_p x^p of degree N in x = e^{2 mu} satisfying

    E(lam) Q(x) = a(lam) q^N Q(x / q^2) + d(lam) q^-N Q(x q^2)

at every spectral parameter lam. The coefficients are fitted as the null
vector of that linear system over many lam. Finite nonzero Bethe roots need
c_0 != 0 and c_N != 0; a vanishing end coefficient sends a root to 0 or to
infinity. The script prints the smallest |c_0| and |c_N| over the sector.
"""

import argparse
import cmath

import numpy as np

from taubethe.xxz import ChainSpec, transfer


def q_coefficients(chain, vec, n, lams):
    q = chain.q()
    rows = []
    for lam in lams:
        e = np.vdot(vec, transfer(chain, lam) @ vec) / np.vdot(vec, vec)
        x = cmath.exp(2 * lam)
        a, d = chain.vacuum_a(lam), chain.vacuum_d(lam)
        rows.append([e * x**p - a * q**n * (x / q**2) ** p - d * q**-n * (x * q**2) ** p for p in range(n + 1)])
    _, s, vh = np.linalg.svd(np.array(rows))
    c = vh[-1].conj()
    return c / np.max(np.abs(c)), s[-1] / s[0]


def sector_report(chain, n, rng):
    idx = [i for i in range(chain.dim) if bin(i).count("1") == n]
    t = transfer(chain, 0.37 + 0.21j)[np.ix_(idx, idx)]
    _, vecs = np.linalg.eig(t)
    lams = rng.uniform(-1, 1, 3 * (n + 2)) + 1j * rng.uniform(-1, 1, 3 * (n + 2))
    ends, fits = [], []
    for k in range(len(idx)):
        v = np.zeros(chain.dim, dtype=complex)
        v[idx] = vecs[:, k]
        c, fit = q_coefficients(chain, v, n, lams)
        ends.append(min(abs(c[0]), abs(c[-1])))
        fits.append(fit)
    return len(idx), max(ends), max(fits)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'L':>2s} {'N':>2s} {'states':>6s} {'max_k min(|c0|,|cN|)':>22s} {'fit':>8s}")
    for L, n in [(3, 2), (4, 2), (4, 3), (5, 3), (5, 4), (6, 3), (6, 4), (6, 5)]:
        chain = ChainSpec(tuple(rng.uniform(0.1, 1.0, size=L)), 0.4 + 0.15j)
        states, end, fit = sector_report(chain, n, rng)
        verdict = "finite roots possible" if end > 1e-6 else "no finite-root eigenvector"
        print(f"{L:2d} {n:2d} {states:6d} {end:22.2e} {fit:8.1e}  {verdict}")


if __name__ == "__main__":
    main()
