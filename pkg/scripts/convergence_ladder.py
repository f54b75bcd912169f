#!/usr/bin/env python3
"""Convergence ladder at one parameter point.

Halves eps a few times and tabulates the second-order defects: exact vs
first-order root offsets, the spectral gap against eps*Phi, the impurity
against 2*eps*Phi. Ratios of ~4 per rung are the health signal; the
identity defects shrink only linearly (the truncated oscillator mode is a
first-order absence).
"""
import argparse
import sys

from qubeam import (
    build_block,
    exact_roots,
    full_report,
    identity_defect,
    make_params,
    perturbative_roots,
)
from qubeam.qstate import PolarizationConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa1", type=float, default=2500.0)
    ap.add_argument("--kappa2", type=float, default=3000.0)
    ap.add_argument("--omega", type=float, default=0.5)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--rungs", type=int, default=4)
    args = ap.parse_args(argv)

    du = PolarizationConfig.from_code("du")
    header = (f"{'eps':>12} {'root_defect':>12} {'y_gap_defect':>13} "
              f"{'E_S_defect':>12} {'uu_defect':>12} {'sym_defect':>12}")
    print(header)
    prev = None
    for i in range(args.rungs):
        eps = args.eps * 0.5 ** i
        p = make_params(args.kappa1, args.kappa2, args.omega, eps)
        ex, pert = exact_roots(p), perturbative_roots(p)
        root_defect = max(abs(ex.offset(k, lam) - pert.offset(k, lam))
                          for k in (1, 2) for lam in (1, 2))
        rep = full_report(p, du)
        y_defect = abs(rep.y_gap - eps * rep.Phi)
        es_defect = abs(rep.E_S - rep.E_S_closed)
        duu, dsym = identity_defect(build_block(ex, p))
        row = (root_defect, y_defect, es_defect, duu, dsym)
        print(f"{eps:>12.4e} " + " ".join(f"{v:>12.3e}" for v in row))
        if prev is not None:
            ratios = [a / b if b else float("inf") for a, b in zip(prev, row)]
            print(f"{'ratio':>12} " + " ".join(f"{r:>12.2f}" for r in ratios))
        prev = row
    return 0


if __name__ == "__main__":
    sys.exit(main())
