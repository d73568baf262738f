"""Derived structure at and around module points.

The free graded-commutative algebra R = Sym(L[1]^dual) on the positive part
of L has one generator x^k per coordinate of L^n (n >= 1), in degree 1 - n.
Its derivation q is fixed by asking that the universal element
Xi = sum_k e_k (x) x^k of L (x) R satisfies  q(Xi) = d Xi + Xi o Xi,
with q acting on e (x) r as (-1)^{|e|} e (x) q(r). Reading off coefficients:

    q(x^m) = (-1)^n  ( sum_k D_mk x^k + sum_{k,l} (-1)^{|x^k| |e_l|} P^m_kl x^k x^l )

for x^m dual to a basis vector of L^n, D the matrix of d and P the structure
constants of o. On L^1 coordinates (degree 0) q vanishes; on L^2 coordinates
q(x^m) is the MC equation for that coordinate; the linear part is the twisted
differential and the quadratic part the bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .dgla import (Cochain, DimensionVector, LSpace, differential, is_module,
                   twisted_differential_matrix)
from .galgebra import GradedAlgebra
from .linalg import FieldSpec


class NotMaurerCartanError(ValueError):
    pass


# -- graded-commutative polynomials ---------------------------------------


class GCPolynomialRing:
    """Free graded-commutative algebra on named generators with integer degrees.

    Polynomials are dicts ``{monomial: coeff}`` where a monomial is a sorted
    tuple of generator indices; odd generators occur at most once.
    """

    def __init__(self, names: Sequence[str], degrees: Sequence[int], field: FieldSpec):
        self.names = list(names)
        self.degrees = list(degrees)
        self.field = field

    def parity(self, g: int) -> int:
        return self.degrees[g] % 2

    def degree(self, mono: tuple) -> int:
        return sum(self.degrees[g] for g in mono)

    def normalize_word(self, word: Sequence[int]) -> tuple[int, tuple] | None:
        """Sort a word of generators; return (sign, monomial) or None if it vanishes."""
        w = list(word)
        sign = 1
        # insertion sort, tracking swaps of two odd generators
        for i in range(1, len(w)):
            j = i
            while j > 0 and w[j - 1] > w[j]:
                if self.parity(w[j - 1]) and self.parity(w[j]):
                    sign = -sign
                w[j - 1], w[j] = w[j], w[j - 1]
                j -= 1
        for a, b in zip(w, w[1:]):
            if a == b and self.parity(a):
                return None
        return sign, tuple(w)

    def add_term(self, poly: dict, word: Sequence[int], coeff) -> None:
        if coeff == 0:
            return
        nw = self.normalize_word(word)
        if nw is None:
            return
        sign, mono = nw
        c = self.field.reduce(poly.get(mono, self.field.zero) + sign * coeff)
        if c == 0:
            poly.pop(mono, None)
        else:
            poly[mono] = c

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                self.add_term(out, ma + mb, self.field.reduce(ca * cb))
        return out

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for m, c in b.items():
            self.add_term(out, m, c)
        return out

    def apply_derivation(self, images: Sequence[dict], poly: dict) -> dict:
        """Extend generator images to an odd derivation (degree +1), left to right."""
        out: dict = {}
        for mono, c in poly.items():
            prefix_deg = 0
            for pos, g in enumerate(mono):
                sign = -1 if prefix_deg % 2 else 1
                for m2, c2 in images[g].items():
                    self.add_term(out, mono[:pos] + m2 + mono[pos + 1:], self.field.reduce(sign * c * c2))
                prefix_deg += self.degrees[g]
        return out

    def evaluate(self, poly: dict, values: dict[int, object]):
        """Substitute scalars for (even, degree-0) generators; all must be given."""
        f = self.field
        total = f.zero
        for mono, c in poly.items():
            term = c
            for g in mono:
                term = f.reduce(term * values[g])
            total = f.reduce(total + term)
        return total

    def format(self, poly: dict) -> str:
        if not poly:
            return "0"
        parts = []
        for mono in sorted(poly, key=lambda m: (len(m), m)):
            c = poly[mono]
            body = "*".join(self.names[g] for g in mono)
            neg = (c < 0) if self.field.is_rational else False
            mag = -c if neg else c
            if not body:
                s = str(mag)
            elif mag == 1:
                s = body
            else:
                s = f"{mag}*{body}"
            parts.append(("- " if neg else "+ ") + s)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


# -- structure constants -------------------------------------------------------


def _differential_matrix(A, alpha, n: int) -> np.ndarray:
    """Matrix of d: L^n -> L^{n+1}."""
    src, dst = LSpace(A, alpha, n), LSpace(A, alpha, n + 1)
    f = A.field
    cols = []
    for idx in range(src.dim):
        e = f.zeros(src.dim)
        e[idx] = f.one
        cols.append(differential(Cochain.from_vector(A, alpha, n, e)).to_vector())
    if not cols:
        return f.zeros((dst.dim, 0))
    return np.array(cols, dtype=object).reshape(src.dim, dst.dim).T


def _compose_constants(A, alpha, m: int, n: int) -> list[tuple[int, int, int, int]]:
    """Nonzero structure constants of o: L^m x L^n -> L^{m+n}.

    Returns (k, l, r, sign) meaning e_k o e_l has coefficient ``sign`` on e_r.
    Unit basis cochains compose to +-1 times a unit basis cochain or zero.
    """
    sx, sy, sr = LSpace(A, alpha, m), LSpace(A, alpha, n), LSpace(A, alpha, m + n)
    sign = -1 if (m * n) % 2 else 1
    out = []
    for (j, comp) in sr.keys:
        cx, cy = comp[:m], comp[m:]
        k = j + sum(cy)
        kx, ky = (k, cx), (j, cy)
        shx, shy, shr = sx.shape(kx), sy.shape(ky), sr.shape((j, comp))
        for ix in np.ndindex(*shx):
            *ax, i_out, mid = ix
            for iy in np.ndindex(*shy):
                *ay, mid2, j_in = iy
                if mid != mid2:
                    continue
                rx = sx.offsets[kx] + int(np.ravel_multi_index(ix, shx))
                ry = sy.offsets[ky] + int(np.ravel_multi_index(iy, shy))
                rr = sr.offsets[(j, comp)] + int(np.ravel_multi_index(tuple(ax) + tuple(ay) + (i_out, j_in), shr))
                out.append((rx, ry, rr, sign))
    return out


# -- presentation ---------------------------------------------------------------


@dataclass
class DGAlgebraPresentation:
    """Generators of Sym(L^{>0}[1]^dual) and the images q(x^k)."""

    ring: GCPolynomialRing
    l_degree: list[int]          # n for a generator dual to L^n
    l_index: list[int]           # coordinate index within L^n
    q_images: list[dict]
    window: tuple[int, int]
    offsets: dict = dc_field(default_factory=dict)  # n -> first generator index

    def generators_of(self, n: int) -> range:
        start = self.offsets.get(n)
        if start is None:
            return range(0)
        count = sum(1 for d in self.l_degree if d == n)
        return range(start, start + count)

    def degree_ok(self) -> bool:
        """q raises degree by exactly one on every generator."""
        for g, img in enumerate(self.q_images):
            for mono in img:
                if self.ring.degree(mono) != self.ring.degrees[g] + 1:
                    return False
        return True

    def parts(self, g: int) -> dict[int, dict]:
        """Split q(x^g) into its constant (q0), linear (q1) and quadratic (q2) parts
        relative to the generators of degree < 0."""
        out: dict[int, dict] = {0: {}, 1: {}, 2: {}}
        for mono, c in self.q_images[g].items():
            k = sum(1 for h in mono if self.ring.degrees[h] < 0)
            out.setdefault(k, {})[mono] = c
        return out

    def mutated(self, g: int, delta=1) -> "DGAlgebraPresentation":
        """Copy with ``delta`` added to the constant term of q(x^g)."""
        imgs = [dict(i) for i in self.q_images]
        self.ring.add_term(imgs[g], (), self.ring.field(delta))
        return DGAlgebraPresentation(self.ring, self.l_degree, self.l_index, imgs, self.window, self.offsets)

    def pretty(self) -> str:
        lines = []
        for g, img in enumerate(self.q_images):
            lines.append(f"q({self.ring.names[g]}) = {self.ring.format(img)}")
        return "\n".join(lines)


def build_dg_presentation(A: GradedAlgebra, alpha: DimensionVector) -> DGAlgebraPresentation:
    f = A.field
    top = alpha.length
    spaces = {n: LSpace(A, alpha, n) for n in range(1, top + 1)}
    names, degrees, l_degree, l_index, offsets = [], [], [], [], {}
    for n, sp in spaces.items():
        offsets[n] = len(names)
        for k, nm in enumerate(sp.coordinate_names()):
            names.append(nm)
            degrees.append(1 - n)
            l_degree.append(n)
            l_index.append(k)
    ring = GCPolynomialRing(names, degrees, f)
    images: list[dict] = [{} for _ in names]
    for n in range(2, top + 1):
        sign_n = -1 if n % 2 else 1
        # linear part: d from L^{n-1}
        D = _differential_matrix(A, alpha, n - 1)
        for r in range(spaces[n].dim):
            for k in range(spaces[n - 1].dim):
                if D[r, k] != 0:
                    ring.add_term(images[offsets[n] + r], (offsets[n - 1] + k,), f.reduce(sign_n * D[r, k]))
        # quadratic part: Xi o Xi
        for a in range(1, n):
            b = n - a
            koszul = -1 if ((1 - a) * b) % 2 else 1
            for k, l, r, s in _compose_constants(A, alpha, a, b):
                ring.add_term(images[offsets[n] + r], (offsets[a] + k, offsets[b] + l),
                              f(sign_n * koszul * s))
    return DGAlgebraPresentation(ring, l_degree, l_index, images, (alpha.p, alpha.q), offsets)


def verify_q_squared(pres: DGAlgebraPresentation) -> bool:
    for img in pres.q_images:
        if pres.ring.apply_derivation(pres.q_images, img):
            return False
    return True


def mc_ideal(A: GradedAlgebra, alpha: DimensionVector) -> tuple[GCPolynomialRing, list[dict]]:
    """Generators of the MC ideal: one polynomial in the L^1 coordinates per L^2 coordinate."""
    pres = build_dg_presentation(A, alpha)
    return pres.ring, [pres.q_images[g] for g in pres.generators_of(2)]


def evaluate_ideal(ring: GCPolynomialRing, gens: Sequence[dict], mu: Cochain) -> list:
    values = dict(enumerate(mu.to_vector()))
    return [ring.evaluate(g, values) for g in gens]


# -- cohomology -----------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyReport:
    dims: tuple[int, ...]
    augmented: bool
    window: tuple[int, int]
    l_dims: tuple[int, ...]
    ranks: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** n * h for n, h in enumerate(self.dims))

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "augmented": self.augmented, "window": list(self.window),
                "lDims": list(self.l_dims), "ranks": list(self.ranks), "euler": self.euler}


def tangent_cohomology(mu: Cochain, augmented: bool = True) -> CohomologyReport:
    """dim H^n(L, d^mu) for n = 0..q-p, computed from exact ranks.

    With ``augmented`` the unit k -> L^0 is prepended, so H^0 is
    dim End_A(M)_gr - 1 and H^i is the graded Ext^i in the window.
    """
    if not is_module(mu):
        raise NotMaurerCartanError("tangent complex requires a Maurer-Cartan point")
    f = mu.field
    top = mu.alpha.length
    l_dims = [LSpace(mu.A, mu.alpha, n).dim for n in range(top + 1)]
    ranks = [linalg.rank(twisted_differential_matrix(mu, n), f) if n < top else 0 for n in range(top + 1)]
    unit_rank = 1 if augmented and mu.alpha.total > 0 else 0
    dims = []
    for n in range(top + 1):
        incoming = ranks[n - 1] if n > 0 else unit_rank
        dims.append(l_dims[n] - ranks[n] - incoming)
    return CohomologyReport(tuple(dims), augmented, (mu.alpha.p, mu.alpha.q), tuple(l_dims), tuple(ranks))


def deformation_spaces(mu: Cochain) -> tuple[int, int]:
    """(dim Ext^1, dim Ext^2) in the window."""
    h = tangent_cohomology(mu, augmented=True).dims
    return (h[1] if len(h) > 1 else 0, h[2] if len(h) > 2 else 0)
