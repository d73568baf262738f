"""Exact linear algebra over Q and prime fields.

Scalars are Python objects: ``Fraction`` over Q, reduced ``int`` over F_p.
Matrices are numpy object arrays so that matmul/einsum stay exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise ValueError(f"prime field modulus must be a prime in [2, 2^31), got {self.p!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"Q"`` or ``"Fp:<p>"``."""
        if text == "Q":
            return RATIONALS
        if text.startswith("Fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad field descriptor {text!r}") from None
            return cls(p)
        raise ValueError(f"bad field descriptor {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self):
        return "Q" if self.p is None else f"Fp:{self.p}"

    # -- scalars --------------------------------------------------------
    def __call__(self, x):
        """Coerce an int, Fraction or string like ``"3/4"`` into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no reduction mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def reduce(self, arr):
        """Bring an array (or scalar) produced by ring ops back into canonical form."""
        if self.p is None:
            return arr
        return arr % self.p

    def elements(self) -> list:
        if self.p is None:
            raise ValueError("Q is infinite")
        return list(range(self.p))

    def random(self, rng: random.Random, bound: int = 3):
        if self.p is None:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(self.p)

    # -- arrays -----------------------------------------------------------
    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(self.zero)
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        if arr.size == 0:
            return self.zeros(arr.shape)
        flat = [self(x) for x in arr.ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(arr.shape)

    def random_array(self, shape, rng: random.Random, bound: int = 3) -> np.ndarray:
        out = self.zeros(shape)
        for idx in np.ndindex(*out.shape):
            out[idx] = self.random(rng, bound)
        return out


RATIONALS = FieldSpec()


def as_matrix(field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> np.ndarray:
    if len(rows) == 0:
        return field.zeros((0, cols or 0))
    return field.array(rows)


def rref(m: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Zero rows are kept at the bottom so the shape is unchanged.
    """
    a = np.array(m, dtype=object, copy=True)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if a[i, c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i] = field.reduce(a[i] - a[i, c] * a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, field: FieldSpec) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, field)[1])


def row_basis(m: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Canonical basis (nonzero rref rows) of the row space."""
    r, piv = rref(m, field)
    return r[: len(piv)]


def kernel_basis(m: np.ndarray, field: FieldSpec) -> list[np.ndarray]:
    """Echelonized basis of the right null space ``{v : m v = 0}``.

    One vector per free column f, with a 1 in position f and zeros in the
    other free positions; the list is ordered by free column.
    """
    nrows, ncols = m.shape
    if nrows == 0:
        r, piv = field.zeros((0, ncols)), []
    else:
        r, piv = rref(m, field)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = field.zeros(ncols)
        v[f] = field.one
        for row, pc in enumerate(piv):
            v[pc] = field.reduce(-r[row, f])
        basis.append(v)
    return basis


def subspace_key(rows: np.ndarray) -> tuple:
    """Hashable key for an rref basis."""
    return tuple(map(tuple, rows.tolist()))


def span_contains(basis: np.ndarray, vectors: np.ndarray, field: FieldSpec) -> bool:
    """True iff every row of ``vectors`` lies in the row span of ``basis``."""
    if vectors.shape[0] == 0:
        return True
    if basis.shape[0] == 0:
        return not np.any(vectors != 0)
    r0 = rank(basis, field)
    return rank(np.vstack([basis, vectors]), field) == r0


def inverse(m: np.ndarray, field: FieldSpec) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return field.zeros((0, 0))
    aug = np.hstack([m, field.eye(n)])
    r, piv = rref(aug, field)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


# -- enumeration over finite fields ----------------------------------------


def rref_subspaces(n: int, k: int, field: FieldSpec) -> Iterator[np.ndarray]:
    """All k-dimensional subspaces of F_p^n as k x n rref matrices.

    Order: pivot sets lexicographically, then free entries lexicographically.
    """
    elems = field.elements()
    for piv in itertools.combinations(range(n), k):
        slots = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        for values in itertools.product(elems, repeat=len(slots)):
            m = field.zeros((k, n))
            for r, c in enumerate(piv):
                m[r, c] = field.one
            for (r, c), v in zip(slots, values):
                m[r, c] = v
            yield m


def all_subspaces(n: int, field: FieldSpec) -> Iterator[np.ndarray]:
    for k in range(n + 1):
        yield from rref_subspaces(n, k, field)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def general_linear_group(n: int, field: FieldSpec) -> Iterator[np.ndarray]:
    """Every invertible n x n matrix over a prime field (brute force)."""
    elems = field.elements()
    for values in itertools.product(elems, repeat=n * n):
        m = field.array(np.array(values, dtype=object).reshape(n, n)) if n else field.zeros((0, 0))
        if rank(m, field) == n:
            yield m


def vectors(n: int, field: FieldSpec) -> Iterable[tuple]:
    return itertools.product(field.elements(), repeat=n)
