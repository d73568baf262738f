"""Census of module structures over small prime fields.

For each (algebra, dimension vector) pair: number of MC points, agreement of
the residual and ideal counts, and the number of isomorphism classes.

    python3 scripts/mc_census.py --primes 2,3 --max-points 20000
"""

import argparse
from dataclasses import dataclass, field

from mc_moduli.dgla import DimensionVector
from mc_moduli.galgebra import free_algebra, polynomial_algebra
from mc_moduli.linalg import FieldSpec
from mc_moduli.scan import ScanError, scan_mc


@dataclass
class CensusConfig:
    primes: tuple[int, ...] = (2, 3)
    dims: list[tuple[int, ...]] = field(default_factory=lambda: [(1, 1), (1, 2), (1, 1, 1), (1, 2, 1)])
    max_points: int = 20_000
    orbits: bool = True


def algebras(p: int):
    f = FieldSpec(p)
    yield "k[x]", lambda D: polynomial_algebra(1, degree_bound=D, field=f)
    yield "k[x,y]", lambda D: polynomial_algebra(2, degree_bound=D, field=f)
    yield "k<x,y>", lambda D: free_algebra(2, D, f)


def run(cfg: CensusConfig):
    print(f"{'field':>6} {'algebra':>8} {'dims':>12} {'|L1|':>8} {'MC':>7} {'agree':>6} {'orbits':>7}")
    for p in cfg.primes:
        for name, make in algebras(p):
            for dims in cfg.dims:
                alpha = DimensionVector(0, dims)
                try:
                    rep = scan_mc(make(max(alpha.length, 1)), alpha, cfg.max_points, cfg.orbits)
                except ScanError:
                    print(f"{'F' + str(p):>6} {name:>8} {str(dims):>12}   over budget")
                    continue
                print(f"{'F' + str(p):>6} {name:>8} {str(dims):>12} {rep.points:>8} {rep.mc_points:>7} "
                      f"{str(rep.mc_points == rep.mc_points_by_ideal):>6} {str(rep.orbits):>7}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", default="2,3")
    ap.add_argument("--max-points", type=int, default=CensusConfig.max_points)
    ap.add_argument("--no-orbits", action="store_true")
    args = ap.parse_args()
    run(CensusConfig(primes=tuple(int(x) for x in args.primes.split(",")),
                     max_points=args.max_points, orbits=not args.no_orbits))


if __name__ == "__main__":
    main()
