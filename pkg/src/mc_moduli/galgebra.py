"""Presented graded algebras A = k + m, stored as per-degree product tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .linalg import RATIONALS, FieldSpec, rref


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    """Unital graded algebra truncated at ``degree_bound``.

    ``labels[d]`` names the basis of A_d (``labels[0] == ("1",)``) and
    ``mult[(d, e)]`` is an array of shape ``(dim A_d, dim A_e, dim A_{d+e})``
    for ``d, e >= 1`` and ``d + e <= degree_bound``. Products with the unit
    are implicit.
    """

    degree_bound: int
    labels: tuple[tuple[str, ...], ...]
    mult: dict
    field: FieldSpec = RATIONALS
    name: str = dc_field(default="A", compare=False)

    def __post_init__(self):
        if self.degree_bound < 1:
            raise AlgebraError("degree bound must be positive")
        if len(self.labels) != self.degree_bound + 1 or len(self.labels[0]) != 1:
            raise AlgebraError("need one basis label list per degree 0..D, with A_0 one-dimensional")
        for d in range(1, self.degree_bound + 1):
            for e in range(1, self.degree_bound + 1 - d):
                t = self.mult.get((d, e))
                shape = (self.dim(d), self.dim(e), self.dim(d + e))
                if t is None or t.shape != shape:
                    raise AlgebraError(f"missing or malformed product table A_{d} x A_{e}")

    def dim(self, d: int) -> int:
        return len(self.labels[d])

    def piece_dim(self, d: int) -> int:
        if not 0 <= d <= self.degree_bound:
            raise AlgebraError(f"degree {d} outside [0, {self.degree_bound}]")
        return self.dim(d)

    def dims(self) -> list[int]:
        """dim A_1, ..., dim A_D."""
        return [self.dim(d) for d in range(1, self.degree_bound + 1)]

    def table(self, d: int, e: int) -> np.ndarray:
        """Product table A_d x A_e -> A_{d+e}, including the unit."""
        if d + e > self.degree_bound:
            raise AlgebraError(f"product of degrees {d}+{e} exceeds the bound {self.degree_bound}")
        if d == 0 or e == 0:
            n = self.dim(d + e)
            t = self.field.zeros((self.dim(d), self.dim(e), n))
            for i in range(n):
                if d == 0:
                    t[0, i, i] = self.field.one
                else:
                    t[i, 0, i] = self.field.one
            return t
        return self.mult[(d, e)]

    def multiply(self, a: np.ndarray, d: int, b: np.ndarray, e: int) -> np.ndarray:
        """Product of coordinate vectors a in A_d and b in A_e."""
        return self.field.reduce(np.einsum("i,j,ijk->k", a, b, self.table(d, e)))

    def basis_vector(self, d: int, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim(d))
        v[i] = self.field.one
        return v

    def check_associative(self) -> bool:
        f = self.field
        D = self.degree_bound
        for d, e, g in itertools.product(range(1, D + 1), repeat=3):
            if d + e + g > D:
                continue
            # (ab)c and a(bc) as 4-index tables
            left = np.einsum("abk,kcl->abcl", self.table(d, e), self.table(d + e, g))
            right = np.einsum("bcm,aml->abcl", self.table(e, g), self.table(d, e + g))
            if np.any(f.reduce(left - right) != 0):
                return False
        return True

    def is_commutative(self) -> bool:
        D = self.degree_bound
        for d in range(1, D + 1):
            for e in range(1, D + 1 - d):
                if np.any(self.table(d, e) != np.transpose(self.table(e, d), (1, 0, 2))):
                    return False
        return True

    def with_bound(self, degree_bound: int) -> "GradedAlgebra":
        """Same algebra truncated at a smaller bound."""
        if not 1 <= degree_bound <= self.degree_bound:
            raise AlgebraError("can only lower the degree bound")
        mult = {k: v for k, v in self.mult.items() if k[0] + k[1] <= degree_bound}
        return GradedAlgebra(degree_bound, self.labels[: degree_bound + 1], mult, self.field, self.name)


# -- constructors -----------------------------------------------------------


def _monomials(var_degrees: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of weighted degree d, in degree-lex (descending exponent) order."""
    n = len(var_degrees)
    out = []

    def rec(i, remaining, acc):
        if i == n:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for k in range(remaining // var_degrees[i], -1, -1):
            rec(i + 1, remaining - k * var_degrees[i], acc + [k])

    rec(0, d, [])
    return out


def _monomial_label(exps, names) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


def polynomial_algebra(
    var_count: int,
    var_degrees: Sequence[int] | None = None,
    degree_bound: int = 3,
    field: FieldSpec = RATIONALS,
    names: Sequence[str] | None = None,
) -> GradedAlgebra:
    """Commutative polynomial ring truncated at ``degree_bound``."""
    if var_count < 1:
        raise AlgebraError("trivial algebra")
    if var_degrees is None:
        var_degrees = [1] * var_count
    if len(var_degrees) != var_count or any(g < 1 for g in var_degrees):
        raise AlgebraError("variable degrees must be positive, one per variable")
    if degree_bound < max(var_degrees):
        raise AlgebraError("degree bound below a variable degree")
    if names is None:
        names = ["x", "y", "z", "w"][:var_count] if var_count <= 4 else [f"x{i}" for i in range(var_count)]
    monos = [_monomials(var_degrees, d) for d in range(degree_bound + 1)]
    index = [{m: i for i, m in enumerate(ms)} for ms in monos]
    mult = {}
    for d in range(1, degree_bound + 1):
        for e in range(1, degree_bound + 1 - d):
            t = field.zeros((len(monos[d]), len(monos[e]), len(monos[d + e])))
            for i, a in enumerate(monos[d]):
                for j, b in enumerate(monos[e]):
                    t[i, j, index[d + e][tuple(x + y for x, y in zip(a, b))]] = field.one
            mult[(d, e)] = t
    labels = tuple(tuple(_monomial_label(m, names) for m in ms) for ms in monos)
    return GradedAlgebra(degree_bound, labels, mult, field, name=f"k[{','.join(names)}]")


def free_algebra(var_count: int, degree_bound: int, field: FieldSpec = RATIONALS,
                 names: Sequence[str] | None = None) -> GradedAlgebra:
    """Free associative algebra on degree-one generators (noncommutative)."""
    if var_count < 1:
        raise AlgebraError("trivial algebra")
    names = names or [chr(ord("a") + i) for i in range(var_count)]
    words = [list(itertools.product(range(var_count), repeat=d)) for d in range(degree_bound + 1)]
    index = [{w: i for i, w in enumerate(ws)} for ws in words]
    mult = {}
    for d in range(1, degree_bound + 1):
        for e in range(1, degree_bound + 1 - d):
            t = field.zeros((len(words[d]), len(words[e]), len(words[d + e])))
            for i, a in enumerate(words[d]):
                for j, b in enumerate(words[e]):
                    t[i, j, index[d + e][a + b]] = field.one
            mult[(d, e)] = t
    labels = tuple(tuple("".join(names[k] for k in w) or "1" for w in ws) for ws in words)
    return GradedAlgebra(degree_bound, labels, mult, field, name=f"k<{','.join(names)}>")


@dataclass(frozen=True)
class Element:
    """Homogeneous element of A: a coordinate vector in A_degree."""

    degree: int
    coords: np.ndarray


def ideal_pieces(A: GradedAlgebra, relations: Sequence[Element]) -> list[np.ndarray]:
    """rref bases (rows) of the graded pieces I_0..I_D of the two-sided ideal."""
    f = A.field
    D = A.degree_bound
    rows: list[list[np.ndarray]] = [[] for _ in range(D + 1)]
    for r in relations:
        if not 0 <= r.degree <= D or len(r.coords) != A.dim(r.degree):
            raise AlgebraError("relation is not a homogeneous element within the degree bound")
        rows[r.degree].append(f.array(r.coords))
    pieces: list[np.ndarray] = []
    for d in range(D + 1):
        gens = list(rows[d])
        for e in range(d):
            if pieces[e].shape[0] == 0:
                continue
            left = A.table(d - e, e)   # A_{d-e} * I_e
            right = A.table(e, d - e)  # I_e * A_{d-e}
            for v in pieces[e]:
                gens.extend(f.reduce(np.einsum("j,ijk->ik", v, left)))
                gens.extend(f.reduce(np.einsum("i,ijk->jk", v, right)))
        if gens:
            r, piv = rref(np.array(gens, dtype=object).reshape(len(gens), A.dim(d)), f)
            pieces.append(r[: len(piv)])
        else:
            pieces.append(f.zeros((0, A.dim(d))))
    return pieces


def quotient_algebra(A: GradedAlgebra, relations: Sequence[Element]) -> GradedAlgebra:
    """A / (relations), basis = non-pivot monomials of the rref ideal pieces."""
    f = A.field
    D = A.degree_bound
    pieces = ideal_pieces(A, relations)
    if pieces[0].shape[0]:
        raise AlgebraError("relations generate the unit ideal")
    keep, pivs = [], []
    for d in range(D + 1):
        piv = [int(np.flatnonzero(row != 0)[0]) for row in pieces[d]]
        pivs.append(piv)
        keep.append([i for i in range(A.dim(d)) if i not in set(piv)])

    def normal_form(v, d):
        v = np.array(v, dtype=object, copy=True)
        for row, pc in zip(pieces[d], pivs[d]):
            if v[pc] != 0:
                v = f.reduce(v - v[pc] * row)
        return v[keep[d]]

    mult = {}
    for d in range(1, D + 1):
        for e in range(1, D + 1 - d):
            t = A.table(d, e)
            q = f.zeros((len(keep[d]), len(keep[e]), len(keep[d + e])))
            for i, a in enumerate(keep[d]):
                for j, b in enumerate(keep[e]):
                    q[i, j] = normal_form(t[a, b], d + e)
            mult[(d, e)] = q
    labels = tuple(tuple(A.labels[d][i] for i in keep[d]) for d in range(D + 1))
    return GradedAlgebra(D, labels, mult, f, name=f"{A.name}/I")


def element(A: GradedAlgebra, terms: dict[str, object]) -> Element:
    """Build a homogeneous element from ``{basis label: coefficient}``."""
    degs = set()
    for lab in terms:
        for d in range(A.degree_bound + 1):
            if lab in A.labels[d]:
                degs.add(d)
                break
        else:
            raise AlgebraError(f"unknown basis label {lab!r}")
    if len(degs) != 1:
        raise AlgebraError("inhomogeneous relation")
    d = degs.pop()
    v = A.field.zeros(A.dim(d))
    for lab, c in terms.items():
        v[A.labels[d].index(lab)] = A.field.reduce(v[A.labels[d].index(lab)] + A.field(c))
    return Element(d, v)
