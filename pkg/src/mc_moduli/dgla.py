"""The dg Lie algebra L^n = Hom_gr(m^{(x)n}, End V) of a graded algebra and a window.

A cochain of degree n is stored densely, one block per key ``(j, comp)``:
``j`` is the source degree of V and ``comp = (d_1, ..., d_n)`` the degrees
of the arguments a_1..a_n. The block has shape
``(dim A_{d_1}, ..., dim A_{d_n}, alpha_i, alpha_j)`` with ``i = j + sum(comp)``
and maps V_j to V_i. Argument a_n is applied first, a_1 last, so a product
x o y places the arguments of x in front.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .galgebra import GradedAlgebra


class CochainError(ValueError):
    pass


@dataclass(frozen=True)
class DimensionVector:
    """Dimensions alpha_p..alpha_q of a graded vector space on the window [p, q]."""

    p: int
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(a) for a in self.dims))
        if not self.dims or any(a < 0 for a in self.dims) or not any(self.dims):
            raise ValueError("dimension vector needs nonnegative entries, at least one positive")

    @property
    def q(self) -> int:
        return self.p + len(self.dims) - 1

    @property
    def length(self) -> int:
        """q - p."""
        return len(self.dims) - 1

    def __getitem__(self, i: int) -> int:
        if not self.p <= i <= self.q:
            return 0
        return self.dims[i - self.p]

    def degrees(self) -> range:
        return range(self.p, self.q + 1)

    @property
    def total(self) -> int:
        return sum(self.dims)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` positive integers, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def l_dimension(A: GradedAlgebra, alpha: DimensionVector, n: int) -> int:
    """dim L^n = sum over i - j >= n of dim (m^{(x)n})_{i-j} * alpha_i * alpha_j."""
    if A.degree_bound < alpha.length:
        raise CochainError(f"degree bound {A.degree_bound} < window length {alpha.length}")
    total = 0
    for j in alpha.degrees():
        for i in alpha.degrees():
            if i - j < n:
                continue
            tensor_dim = 0
            for comp in compositions(i - j, n):
                tensor_dim += int(np.prod([A.dim(d) for d in comp]))
            total += tensor_dim * alpha[i] * alpha[j]
    return total


class LSpace:
    """Coordinates on L^n: canonical key order and flattening offsets."""

    def __init__(self, A: GradedAlgebra, alpha: DimensionVector, n: int):
        if A.degree_bound < alpha.length:
            raise CochainError(f"degree bound {A.degree_bound} < window length {alpha.length}")
        self.A, self.alpha, self.n = A, alpha, n
        keys = []
        for j in alpha.degrees():
            for s in range(n, alpha.q - j + 1):
                for comp in compositions(s, n):
                    keys.append((j, comp))
        self.keys: list[tuple[int, tuple[int, ...]]] = keys
        self.offsets = {}
        off = 0
        for k in keys:
            self.offsets[k] = off
            off += int(np.prod(self.shape(k)))
        self.dim = off

    def shape(self, key) -> tuple[int, ...]:
        j, comp = key
        return tuple(self.A.dim(d) for d in comp) + (self.alpha[j + sum(comp)], self.alpha[j])

    def coordinate_names(self) -> list[str]:
        """One readable name per coordinate, e.g. ``L1[x](1<-0)[0,0]``."""
        names = []
        for key in self.keys:
            j, comp = key
            i = j + sum(comp)
            for idx in np.ndindex(*self.shape(key)):
                args = ",".join(self.A.labels[d][a] for d, a in zip(comp, idx[:-2]))
                names.append(f"L{self.n}[{args}]({i}<-{j})[{idx[-2]},{idx[-1]}]")
        return names

    def __eq__(self, other):
        return (isinstance(other, LSpace) and self.A is other.A
                and self.alpha == other.alpha and self.n == other.n)


@dataclass(frozen=True, eq=False)
class Cochain:
    """An element of L^n."""

    A: GradedAlgebra
    alpha: DimensionVector
    degree: int
    blocks: dict

    @cached_property
    def space(self) -> LSpace:
        return LSpace(self.A, self.alpha, self.degree)

    @property
    def field(self):
        return self.A.field

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls, A: GradedAlgebra, alpha: DimensionVector, n: int) -> "Cochain":
        sp = LSpace(A, alpha, n)
        return cls(A, alpha, n, {k: A.field.zeros(sp.shape(k)) for k in sp.keys})

    @classmethod
    def from_vector(cls, A, alpha, n, vec) -> "Cochain":
        sp = LSpace(A, alpha, n)
        if len(vec) != sp.dim:
            raise CochainError(f"vector length {len(vec)} != dim L^{n} = {sp.dim}")
        vec = np.asarray(vec, dtype=object)
        blocks = {}
        for k in sp.keys:
            shape = sp.shape(k)
            size = int(np.prod(shape))
            off = sp.offsets[k]
            blocks[k] = np.array(vec[off: off + size], dtype=object).reshape(shape)
        return cls(A, alpha, n, blocks)

    @classmethod
    def random(cls, A, alpha, n, rng: random.Random, bound: int = 3) -> "Cochain":
        sp = LSpace(A, alpha, n)
        return cls.from_vector(A, alpha, n, [A.field.random(rng, bound) for _ in range(sp.dim)])

    def to_vector(self) -> np.ndarray:
        sp = self.space
        if sp.dim == 0:
            return self.field.zeros(0)
        return np.concatenate([self.blocks[k].ravel() for k in sp.keys])

    # -- linear structure ---------------------------------------------------
    def _check_same(self, other: "Cochain"):
        if self.A is not other.A or self.alpha != other.alpha:
            raise CochainError("cochains live over different algebras or dimension vectors")

    def _map(self, fn) -> "Cochain":
        return Cochain(self.A, self.alpha, self.degree,
                       {k: self.field.reduce(fn(k, b)) for k, b in self.blocks.items()})

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_same(other)
        if self.degree != other.degree:
            raise CochainError("adding cochains of different degrees")
        return self._map(lambda k, b: b + other.blocks[k])

    def __neg__(self) -> "Cochain":
        return self._map(lambda k, b: -b)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, c) -> "Cochain":
        c = self.field(c)
        return self._map(lambda k, b: b * c)

    def is_zero(self) -> bool:
        return all(not np.any(b != 0) for b in self.blocks.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.A is not other.A or self.alpha != other.alpha or self.degree != other.degree:
            return False
        return all(np.array_equal(self.blocks[k], other.blocks[k]) for k in self.blocks)

    __hash__ = None

    def block(self, i: int, j: int, comp: Sequence[int]) -> np.ndarray:
        comp = tuple(comp)
        if i - j != sum(comp):
            raise CochainError("block degrees do not match the composition")
        return self.blocks[(j, comp)]


ModulePoint = Cochain  # a degree-1 cochain: the candidate action mu


def spaces(A: GradedAlgebra, alpha: DimensionVector, positive_only: bool = False) -> list[LSpace]:
    """L^0..L^{q-p}, or the truncation L^1..L^{q-p} when ``positive_only``."""
    start = 1 if positive_only else 0
    return [LSpace(A, alpha, n) for n in range(start, alpha.length + 1)]


# -- differential and bracket ---------------------------------------------------


def differential(c: Cochain) -> Cochain:
    """d c (a_1..a_{n+1}) = sum_{i=1}^n (-1)^{n-i} c(.., a_i a_{i+1}, ..)."""
    A, alpha, n = c.A, c.alpha, c.degree
    f = A.field
    out = Cochain.zero(A, alpha, n + 1)
    if n + 1 > alpha.length:
        return out
    for (j, comp), blk in out.blocks.items():
        if blk.size == 0:
            continue
        acc = f.zeros(blk.shape)
        for i in range(1, n + 1):
            d1, d2 = comp[i - 1], comp[i]
            merged = comp[: i - 1] + (d1 + d2,) + comp[i + 1:]
            src = c.blocks[(j, merged)]
            t = A.table(d1, d2)
            # contract the merged argument axis (i-1) with the product table
            term = np.tensordot(t, src, axes=([2], [i - 1]))
            term = np.moveaxis(term, [0, 1], [i - 1, i])
            sign = -1 if (n - i) % 2 else 1
            acc = acc + sign * term
        out.blocks[(j, comp)] = f.reduce(acc)
    return out


def compose(x: Cochain, y: Cochain) -> Cochain:
    """x o y (a_1..a_{m+n}) = (-1)^{mn} x(a_1..a_m) o y(a_{m+1}..a_{m+n})."""
    x._check_same(y)
    m, n = x.degree, y.degree
    A, alpha, f = x.A, x.alpha, x.field
    out = Cochain.zero(A, alpha, m + n)
    sign = -1 if (m * n) % 2 else 1
    for (j, comp), blk in out.blocks.items():
        if blk.size == 0:
            continue
        cx, cy = comp[:m], comp[m:]
        k = j + sum(cy)
        X = x.blocks[(k, cx)]
        Y = y.blocks[(j, cy)]
        px, py = int(np.prod(X.shape[:-2])), int(np.prod(Y.shape[:-2]))
        prod = np.einsum("aik,bkj->abij", X.reshape(px, *X.shape[-2:]), Y.reshape(py, *Y.shape[-2:]))
        out.blocks[(j, comp)] = f.reduce(sign * prod.reshape(blk.shape))
    return out


def bracket(x: Cochain, y: Cochain) -> Cochain:
    """[x, y] = x o y - (-1)^{mn} y o x."""
    m, n = x.degree, y.degree
    xy, yx = compose(x, y), compose(y, x)
    return xy - yx if (m * n) % 2 == 0 else xy + yx


def mc_residual(mu: Cochain) -> Cochain:
    """The curvature d mu + mu o mu, computed as (a, b) -> mu(ab) - mu(a) mu(b)."""
    if mu.degree != 1:
        raise CochainError("the Maurer-Cartan residual is defined on L^1")
    A, alpha, f = mu.A, mu.alpha, mu.field
    out = Cochain.zero(A, alpha, 2)
    for (j, (d1, d2)), blk in out.blocks.items():
        if blk.size == 0:
            continue
        prod = np.tensordot(A.table(d1, d2), mu.blocks[(j, (d1 + d2,))], axes=([2], [0]))
        outer = np.einsum("aik,bkj->abij", mu.blocks[(j + d2, (d1,))], mu.blocks[(j, (d2,))])
        out.blocks[(j, (d1, d2))] = f.reduce(prod - outer)
    return out


def is_module(mu: Cochain) -> bool:
    return mc_residual(mu).is_zero()


def twisted_differential(mu: Cochain, y: Cochain) -> Cochain:
    """d^mu y = d y + [mu, y]."""
    return differential(y) + bracket(mu, y)


# -- gauge group -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaugeElement:
    """Invertible blocks g_p..g_q, one per degree of the window."""

    alpha: DimensionVector
    blocks: tuple
    field: linalg.FieldSpec

    def __post_init__(self):
        if len(self.blocks) != len(self.alpha.dims):
            raise CochainError("one gauge block per degree required")
        invs = []
        for a, g in zip(self.alpha.dims, self.blocks):
            if g.shape != (a, a):
                raise CochainError("gauge block has the wrong shape")
            try:
                invs.append(linalg.inverse(g, self.field))
            except ZeroDivisionError:
                raise CochainError("gauge block is singular") from None
        object.__setattr__(self, "inverses", tuple(invs))

    def g(self, i: int) -> np.ndarray:
        return self.blocks[i - self.alpha.p]

    def ginv(self, i: int) -> np.ndarray:
        return self.inverses[i - self.alpha.p]

    @classmethod
    def identity(cls, alpha, field) -> "GaugeElement":
        return cls(alpha, tuple(field.eye(a) for a in alpha.dims), field)

    @classmethod
    def scalar(cls, alpha, field, t) -> "GaugeElement":
        """Delta(t) = (t, ..., t)."""
        t = field(t)
        return cls(alpha, tuple(field.reduce(field.eye(a) * t) for a in alpha.dims), field)

    @classmethod
    def canonical(cls, alpha, field, t) -> "GaugeElement":
        """lambda_0(t) = (t^p, ..., t^q)."""
        t = field(t)
        blocks = []
        for i, a in zip(alpha.degrees(), alpha.dims):
            s = t ** i if i >= 0 else field.inv(t) ** (-i)
            blocks.append(field.reduce(field.eye(a) * s))
        return cls(alpha, tuple(blocks), field)

    @classmethod
    def random(cls, alpha, field, rng: random.Random, bound: int = 3) -> "GaugeElement":
        blocks = []
        for a in alpha.dims:
            while True:
                g = field.random_array((a, a), rng, bound)
                if linalg.rank(g, field) == a:
                    break
            blocks.append(g)
        return cls(alpha, tuple(blocks), field)

    def __mul__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(self.alpha, tuple(self.field.reduce(a @ b) for a, b in zip(self.blocks, other.blocks)),
                            self.field)


def gauge_act(g: GaugeElement, x: Cochain) -> Cochain:
    """(g . x)_{ij} = g_i x_{ij} g_j^{-1}."""
    if g.alpha != x.alpha:
        raise CochainError("gauge element and cochain have different dimension vectors")
    f = x.field
    blocks = {}
    for (j, comp), blk in x.blocks.items():
        i = j + sum(comp)
        blocks[(j, comp)] = f.reduce(g.g(i) @ blk @ g.ginv(j))
    return Cochain(x.A, x.alpha, x.degree, blocks)


# -- linear maps as matrices ------------------------------------------------


def linear_map_matrix(fn, A, alpha, n_in: int, n_out: int) -> np.ndarray:
    """Matrix (dim L^{n_out} x dim L^{n_in}) of a linear map given as a function on cochains."""
    src = LSpace(A, alpha, n_in)
    dst = LSpace(A, alpha, n_out)
    f = A.field
    cols = []
    for idx in range(src.dim):
        e = f.zeros(src.dim)
        e[idx] = f.one
        cols.append(fn(Cochain.from_vector(A, alpha, n_in, e)).to_vector())
    if not cols:
        return f.zeros((dst.dim, 0))
    return np.array(cols, dtype=object).reshape(src.dim, dst.dim).T


def twisted_differential_matrix(mu: Cochain, n: int) -> np.ndarray:
    return linear_map_matrix(lambda y: twisted_differential(mu, y), mu.A, mu.alpha, n, n + 1)


# -- module points ---------------------------------------------------------


def tautological_module(A: GradedAlgebra, p: int, q: int) -> Cochain:
    """A acting on its own window A_p + ... + A_q by left multiplication."""
    if p < 0 or q > A.degree_bound or q < p:
        raise CochainError("window must lie inside [0, degree bound]")
    alpha = DimensionVector(p, tuple(A.dim(d) for d in range(p, q + 1)))
    mu = Cochain.zero(A, alpha, 1)
    for (j, (d,)), blk in mu.blocks.items():
        # blk[a, i_out, j_in] = coefficient of basis i_out in a * b_{j_in}
        mu.blocks[(j, (d,))] = np.transpose(A.table(d, j), (0, 2, 1)).copy()
    return mu


def direct_sum(mu: Cochain, nu: Cochain) -> Cochain:
    """Blockwise direct sum of two degree-1 cochains on the same window."""
    if mu.A is not nu.A or mu.alpha.p != nu.alpha.p or len(mu.alpha.dims) != len(nu.alpha.dims):
        raise CochainError("direct sum needs the same algebra and window")
    alpha = DimensionVector(mu.alpha.p, tuple(a + b for a, b in zip(mu.alpha.dims, nu.alpha.dims)))
    f = mu.field
    out = Cochain.zero(mu.A, alpha, mu.degree)
    for key in out.blocks:
        j, comp = key
        i = j + sum(comp)
        X, Y = mu.blocks[key], nu.blocks[key]
        blk = f.zeros(out.blocks[key].shape)
        ai, aj = mu.alpha[i], mu.alpha[j]
        blk[..., :ai, :aj] = X
        blk[..., ai:, aj:] = Y
        out.blocks[key] = blk
    return out


def zero_module(A: GradedAlgebra, alpha: DimensionVector) -> Cochain:
    return Cochain.zero(A, alpha, 1)


def action_matrix(mu: Cochain, i: int, j: int, a: int) -> np.ndarray:
    """mu_{ij}(a) for the a-th basis element of A_{i-j}."""
    return mu.blocks[(j, (i - j,))][a]
