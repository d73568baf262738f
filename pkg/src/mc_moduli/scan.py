"""Exhaustive Maurer-Cartan point counts over prime fields, with gauge orbits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass


from . import linalg
from .derived import evaluate_ideal, mc_ideal
from .dgla import Cochain, DimensionVector, GaugeElement, LSpace, gauge_act, mc_residual
from .galgebra import GradedAlgebra

DEFAULT_POINT_BUDGET = 2**20


class ScanError(ValueError):
    pass


@dataclass
class ScanReport:
    field: str
    l1_dim: int
    points: int
    mc_points: int
    mc_points_by_ideal: int
    orbits: int | None
    group_order: int | None

    def to_dict(self) -> dict:
        return {"field": self.field, "l1Dim": self.l1_dim, "points": self.points,
                "mcPoints": self.mc_points, "mcPointsByIdeal": self.mc_points_by_ideal,
                "agree": self.mc_points == self.mc_points_by_ideal,
                "orbits": self.orbits, "groupOrder": self.group_order}


def gauge_group(alpha: DimensionVector, field) -> list[GaugeElement]:
    per_degree = [list(linalg.general_linear_group(a, field)) for a in alpha.dims]
    return [GaugeElement(alpha, tuple(gs), field) for gs in itertools.product(*per_degree)]


def scan_mc(A: GradedAlgebra, alpha: DimensionVector, budget: int = DEFAULT_POINT_BUDGET,
            orbits: bool = False) -> ScanReport:
    """Count MC points of L^1 over F_p two ways (residual and ideal) and, optionally, gauge orbits."""
    f = A.field
    if f.is_rational:
        raise ScanError("exhaustive scans need a prime field")
    sp = LSpace(A, alpha, 1)
    npoints = f.p ** sp.dim
    if npoints > budget:
        raise ScanError(f"{npoints} points in L^1 exceed the budget {budget}")
    ring, gens = mc_ideal(A, alpha)
    group = gauge_group(alpha, f) if orbits else None
    if group is not None and len(group) * npoints > budget * 64:
        raise ScanError(f"orbit sweep of {len(group)} x {npoints} exceeds the budget")
    by_residual = by_ideal = 0
    reps = set()
    for values in linalg.vectors(sp.dim, f):
        mu = Cochain.from_vector(A, alpha, 1, list(values))
        is_mc = mc_residual(mu).is_zero()
        by_residual += is_mc
        by_ideal += all(v == 0 for v in evaluate_ideal(ring, gens, mu))
        if is_mc and group is not None:
            reps.add(min(tuple(gauge_act(g, mu).to_vector().tolist()) for g in group))
    return ScanReport(str(f), sp.dim, npoints, by_residual, by_ideal,
                      len(reps) if group is not None else None,
                      len(group) if group is not None else None)
