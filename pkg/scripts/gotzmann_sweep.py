"""Extend tautological window modules of quotient algebras and watch persistence.

For each algebra A = k[vars]/(relations), the window module A_[0,q] is
extended to degree D; the Macaulay bounds and the first degree from which
Gotzmann persistence holds are printed next to the true Hilbert function.

    python3 scripts/gotzmann_sweep.py --top 7
"""

import argparse
from dataclasses import dataclass, field

from mc_moduli import fixtures, io
from mc_moduli.dgla import tautological_module
from mc_moduli.hilbert import extend_module, gotzmann_check


@dataclass
class SweepConfig:
    top: int = 7
    window: int = 2
    cases: list[tuple[str, list[str]]] = field(default_factory=lambda: [
        ("xy", []),
        ("xyz", ["x*z - y^2"]),
        ("xy", ["x*y"]),
        ("xy", ["x^4"]),
        ("xyz", ["x*y", "y*z", "x*z"]),
        ("xyz", ["x^2 + y^2 + z^2"]),
    ])


def run(cfg: SweepConfig):
    for names, rels in cfg.cases:
        A = io.algebra_from_dict(fixtures.algebra_doc(names, cfg.top, relations=rels))
        q = max([cfg.window] + [_degree(r) for r in rels])
        h = extend_module(tautological_module(A, 0, q), cfg.top)
        rep = gotzmann_check(h)
        truth = tuple(A.dim(d) for d in range(cfg.top + 1))
        print(f"{A.name:<28} window [0,{q}]  h={h}  matches A: {h == truth}  "
              f"macaulay ok: {rep.macaulay_ok}  persistent from: {rep.persistent_from}")


def _degree(rel: str) -> int:
    poly = io.parse_polynomial(rel, list("xyz"))
    return max(sum(m) for m in poly)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--top", type=int, default=SweepConfig.top)
    ap.add_argument("--window", type=int, default=SweepConfig.window)
    args = ap.parse_args()
    run(SweepConfig(top=args.top, window=args.window))


if __name__ == "__main__":
    main()
