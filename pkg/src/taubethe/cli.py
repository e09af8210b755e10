"""Command-line entry point: ``python -m taubethe {verify,bethe-solve,scalar-product,tau}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable, Sequence

import numpy as np

from . import checks as ck
from .bethe import SolverExhaustedError, solve_bethe
from .config import CHECKS, RunConfig, CheckRecord, ConfigError, Report, load_config
from .core import SamplingError, TauBetheError
from .dkp import TauFunction, tau_shift
from .slavnov import slavnov_det
from .symfun import MiwaMultiset
from .xxz import ChainSpec, scalar_product_oracle

SEED_ENV = "TAUBETHE_SEED"

BETHE_CHECKS = ("oracle-vs-slavnov", "schur-expansion", "casoratian-columns", "ratio-constancy")
TAU_CHECKS = ("A1", "A2", "bilinear", "hirota-miwa", "laplace")


def apply_env(cfg: RunConfig) -> RunConfig:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return cfg
    d = cfg.to_dict()
    d["seed"] = int(raw)
    return RunConfig.from_dict(d)


def build_chain(cfg: RunConfig) -> ChainSpec:
    if cfg.chain.nu == "auto":
        rng = ck.substream(cfg.seed, 0).rng()
        nu = tuple(rng.uniform(0.1, 1.0, size=cfg.chain.L))
    else:
        nu = cfg.chain.nu
    return ChainSpec(nu, cfg.chain.gamma)


def _record(name: str, fixture: str, threshold: float, fn: Callable[[], ck.Outcome]) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        out = fn()
        residual = out.residual
        detail = out.detail
        if out.degenerate:
            status = "degenerate"
        else:
            status = "pass" if residual <= threshold else "fail"
    except (TauBetheError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        residual, status = float("inf"), "fail"
        detail = {"error": type(exc).__name__, "message": str(exc)}
    ms = (time.perf_counter() - t0) * 1e3
    return CheckRecord(name, fixture, float(residual), threshold, status, round(ms, 3), detail)


def run_verify(cfg: RunConfig) -> Report:
    report = Report(provenance={"seed": cfg.seed, "config_digest": cfg.digest()})
    selected = [c for c in CHECKS if c in cfg.checks]
    if not selected:
        return report
    s = cfg.samples
    recs = report.records
    if "symfun-identities" in selected:
        recs.append(_record("symfun-identities", "symfun", cfg.threshold("symfun-identities"),
                            lambda: ck.check_symfun(ck.substream(cfg.seed, 1))))
    if not any(c in selected for c in BETHE_CHECKS + TAU_CHECKS):
        return report

    chain = build_chain(cfg)
    tag = f"L{chain.L}N{cfg.n_roots}"
    report.provenance["nu"] = [[v.real, v.imag] for v in chain.nu]
    fixtures: list[ck.Fixture] = []
    t0 = time.perf_counter()
    try:
        sols = solve_bethe(chain, cfg.n_roots, ck.substream(cfg.seed, 2), max_solutions=cfg.max_solutions)
        fixtures = [ck.bethe_fixture(f"{tag}-bethe{k}", chain, sol) for k, sol in enumerate(sols)]
    except SolverExhaustedError as exc:
        recs.append(CheckRecord("bethe-solve", tag, float("inf"), cfg.threshold("bethe-solve"), "fail",
                                round((time.perf_counter() - t0) * 1e3, 3),
                                {"error": "SolverExhaustedError", "message": str(exc),
                                 "best_defect": float(exc.best_defect), "rejected": exc.rejected}))
    fixtures.append(ck.random_fixture(f"{tag}-random", chain, cfg.n_roots, ck.substream(cfg.seed, 3)))

    for k, fx in enumerate(fixtures):
        sub = lambda j: ck.substream(cfg.seed, 10 + k, j)  # noqa: E731
        bethe_jobs = {
            "oracle-vs-slavnov": lambda: ck.check_oracle_vs_slavnov(fx, s.lambda_sets, sub(0)),
            "schur-expansion": lambda: ck.check_schur_expansion(fx, s.lambda_sets, sub(1)),
            "casoratian-columns": lambda: ck.check_casoratian_columns(fx, s.lambda_sets, sub(2), s.max_multiplicity),
            "ratio-constancy": lambda: ck.check_ratio_constancy(fx, s.x_sets, sub(3)),
        }
        if fx.sol is not None:
            for name in BETHE_CHECKS:
                if name in selected:
                    recs.append(_record(name, fx.id, cfg.threshold(name), bethe_jobs[name]))
        if not any(c in selected for c in TAU_CHECKS):
            continue
        try:
            tfs = ck.tau_functions(fx, sub(4), s.max_multiplicity)
        except SamplingError as exc:
            recs.append(CheckRecord("tau-base", fx.id, float("inf"), 0.0, "fail", 0.0,
                                    {"error": "SamplingError", "message": str(exc)}))
            continue
        tau_jobs = {"A1": ck.check_a1, "A2": ck.check_a2, "bilinear": ck.check_bilinear,
                    "hirota-miwa": ck.check_hirota_miwa, "laplace": ck.check_laplace}
        for name in TAU_CHECKS:
            if name in selected:
                recs.append(_record(name, fx.id, cfg.threshold(name), lambda f=tau_jobs[name]: f(tfs)))
    return report


def _complex(text: str) -> complex:
    return complex(text.replace(" ", ""))


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return apply_env(cfg)


def cmd_verify(args) -> int:
    cfg = _load(args)
    if args.only:
        d = cfg.to_dict()
        d["checks"] = list(args.only)
        cfg = RunConfig.from_dict(d)
    report = run_verify(cfg)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for r in report.records:
            print(f"{r.status:10s} {r.name:20s} {r.fixture:18s} residual={r.residual:.3e} threshold={r.threshold:.0e}")
        sm = report.summary
        print(f"total={sm['total']} passed={sm['passed']} failed={sm['failed']} degenerate={sm['degenerate']}")
    return 0 if report.ok else 1


def cmd_bethe_solve(args) -> int:
    cfg = _load(args)
    chain = build_chain(cfg)
    sols = solve_bethe(chain, cfg.n_roots, ck.substream(cfg.seed, 2), max_solutions=cfg.max_solutions)
    if args.json:
        print(json.dumps([{"mus": [[m.real, m.imag] for m in s.mus], "residual": s.residual,
                           "eigencheck": s.eigencheck} for s in sols], indent=2))
        return 0
    for k, s in enumerate(sols):
        roots = "  ".join(f"{m.real:+.12f}{m.imag:+.12f}i" for m in s.mus)
        print(f"{k:3d}  defect={s.residual:.2e}  eigencheck={s.eigencheck:.2e}  {roots}")
    return 0


def cmd_scalar_product(args) -> int:
    cfg = _load(args)
    chain = build_chain(cfg)
    lams = [_complex(v) for v in args.lam]
    mus = [_complex(v) for v in args.mu]
    oracle = scalar_product_oracle(chain, lams, mus)
    out = {"oracle": [oracle.real, oracle.imag]}
    if lams:
        try:
            sl = slavnov_det(chain, lams, mus)
            out["slavnov"] = [sl.real, sl.imag]
        except TauBetheError as exc:
            out["slavnov_error"] = str(exc)
    else:
        out["slavnov"] = [1.0, 0.0]
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k:8s} {v[0]:+.15e} {v[1]:+.15e}j" if isinstance(v, list) else f"{k:8s} {v}")
    return 0


def cmd_tau(args) -> int:
    cfg = _load(args)
    chain = build_chain(cfg)
    sols = solve_bethe(chain, cfg.n_roots, ck.substream(cfg.seed, 2), max_solutions=1)
    fx = ck.bethe_fixture("tau", chain, sols[0])
    if args.x:
        base = MiwaMultiset.of([_complex(v) for v in args.x])
    else:
        base = MiwaMultiset.of(ck.x_sets(fx, 1, ck.substream(cfg.seed, 4))[0])
    value = tau_shift(TauFunction(fx.spec, base), args.shifts)
    if args.json:
        print(json.dumps({"tau": [value.real, value.imag], "shifts": list(args.shifts)}))
    else:
        print(f"tau{list(args.shifts)} = {value.real:+.15e} {value.imag:+.15e}j")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="taubethe", description="Bethe scalar products as discrete KP tau-functions")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON run configuration (defaults built in)")
        sp.add_argument("--json", action="store_true", help="machine-readable output only")

    v = sub.add_parser("verify", help="run the verification checks")
    common(v)
    v.add_argument("--only", nargs="+", choices=CHECKS, metavar="CHECK")
    v.add_argument("--out", help="also write the JSON report here")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bethe-solve", help="print verified Bethe roots")
    common(b)
    b.set_defaults(func=cmd_bethe_solve)

    s = sub.add_parser("scalar-product", help="dense and determinant scalar products")
    common(s)
    s.add_argument("--lambda", dest="lam", nargs="*", default=[], metavar="Z")
    s.add_argument("--mu", nargs="*", default=[], metavar="Z")
    s.set_defaults(func=cmd_scalar_product)

    t = sub.add_parser("tau", help="evaluate a shifted tau-function on Bethe data")
    common(t)
    t.add_argument("--shifts", nargs="*", type=int, default=[])
    t.add_argument("--x", nargs="*", default=None, metavar="Z", help="base values (sampled if omitted)")
    t.set_defaults(func=cmd_tau)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TauBetheError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
