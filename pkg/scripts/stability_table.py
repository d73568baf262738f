"""Extremal stability of the built-in fixtures, with generation and Ext data.

    python3 scripts/stability_table.py --primes 2,3
"""

import argparse
from dataclasses import dataclass

from mc_moduli import fixtures
from mc_moduli.derived import tangent_cohomology
from mc_moduli.hilbert import is_generated_in_lowest_degree
from mc_moduli.stability import StabilityError, check_stability, extremal_character


@dataclass
class TableConfig:
    primes: tuple[int, ...] = (2, 3)
    budget: int = 10
    names: tuple[str, ...] = ("line", "O_P1", "O_plus_O(-2)", "simple", "zero", "chain", "quadric")


def row(name: str, cfg: TableConfig) -> str:
    _, A, mu = fixtures.build(name, degree_bound=None)
    gen = is_generated_in_lowest_degree(mu)
    ext = tangent_cohomology(mu).dims
    try:
        v = check_stability(mu, extremal_character(mu.alpha), cfg.primes, budget=cfg.budget)
        verdict = f"{v.status.value} ({v.certificate})"
        theta = "" if v.theta_value is None else str(v.theta_value)
    except StabilityError as e:
        verdict, theta = f"skipped: {e}", ""
    return f"{name:>14} {str(mu.alpha.dims):>12} {str(gen):>9} {str(ext):>14} {theta:>6}  {verdict}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="2,3")
    ap.add_argument("--budget", type=int, default=TableConfig.budget)
    args = ap.parse_args()
    cfg = TableConfig(primes=tuple(int(x) for x in args.primes.split(",")), budget=args.budget)
    print(f"{'fixture':>14} {'dims':>12} {'generated':>9} {'Ext (aug.)':>14} {'theta':>6}  verdict")
    for name in cfg.names:
        print(row(name, cfg))


if __name__ == "__main__":
    main()
