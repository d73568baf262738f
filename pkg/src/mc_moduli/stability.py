"""King theta-stability of module points by exhaustive submodule search.

Over a prime field the graded submodules of a finite module are finite in
number, so (semi)stability is decided exactly by enumeration. Instability
found over F_p is certified over Q by lifting the witness and re-checking.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .dgla import Cochain, DimensionVector, GaugeElement, is_module
from .galgebra import GradedAlgebra
from .linalg import FieldSpec


class StabilityError(ValueError):
    pass


DEFAULT_BUDGET = 10


# -- characters -----------------------------------------------------------


@dataclass(frozen=True)
class Character:
    alpha: DimensionVector
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.weights) != len(self.alpha.dims):
            raise StabilityError("one weight per degree of the window required")
        if theta_pairing(self, self.alpha.dims) != 0:
            raise StabilityError("character does not pair to zero with the dimension vector")

    def __call__(self, profile: Sequence[int]) -> int:
        return theta_pairing(self, profile)


def theta_pairing(theta: Character, profile: Sequence[int]) -> int:
    """theta(W) = sum_i theta_i dim W_i."""
    if len(profile) != len(theta.weights):
        raise StabilityError("profile length does not match the character")
    return sum(t * w for t, w in zip(theta.weights, profile))


def extremal_character(alpha: DimensionVector) -> Character:
    """theta_p = -alpha_q, theta_q = alpha_p, zero in between."""
    if alpha.length == 0:
        raise StabilityError("extremal character needs a window of positive length")
    w = [0] * len(alpha.dims)
    w[0] = -alpha.dims[-1]
    w[-1] = alpha.dims[0]
    return Character(alpha, tuple(w))


def determinant_character(A: GradedAlgebra, alpha: DimensionVector) -> Character:
    if alpha.length == 0:
        raise StabilityError("determinant character needs a window of positive length")
    if A.degree_bound < alpha.length:
        raise StabilityError(f"degree bound {A.degree_bound} < window length {alpha.length}")
    w = []
    for i in alpha.degrees():
        below = sum(A.dim(i - j) * alpha[j] for j in alpha.degrees() if j < i)
        above = sum(A.dim(j - i) * alpha[j] for j in alpha.degrees() if j > i)
        w.append(below - above)
    return Character(alpha, tuple(w))


def custom_character(alpha: DimensionVector, weights: Sequence[int]) -> Character:
    return Character(alpha, tuple(weights))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b), from the extended Euclid recursion."""
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    return old_r, old_s, old_t


def coprime_character(alpha: Sequence[int] | DimensionVector) -> tuple[int, ...]:
    """Integers n_i with sum n_i alpha_i = 1.

    Folds left to right: once the running gcd is 1 the remaining
    coefficients are 0, otherwise the extended-Euclid coefficients are used.
    """
    dims = [int(a) for a in (alpha.dims if isinstance(alpha, DimensionVector) else alpha)]
    if not dims or any(a < 0 for a in dims) or math.gcd(*dims) != 1:
        raise StabilityError("dimension vector not primitive")
    coeffs = [0] * len(dims)
    g = 0
    for i, a in enumerate(dims):
        if g == 1 or a == 0:
            continue
        if g == 0:
            g, coeffs[i] = a, 1
            continue
        g, x, y = _ext_gcd(g, a)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
    return tuple(coeffs)


# -- submodules ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubmoduleWitness:
    """Graded subspace W_p + ... + W_q, each W_i an rref basis (rows)."""

    alpha: DimensionVector
    bases: tuple
    field: FieldSpec

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.bases)

    def basis(self, i: int) -> np.ndarray:
        return self.bases[i - self.alpha.p]

    def is_proper(self) -> bool:
        tot = sum(self.profile)
        return 0 < tot < self.alpha.total

    def key(self) -> tuple:
        return tuple(linalg.subspace_key(b) for b in self.bases)

    def to_dict(self) -> dict:
        return {"profile": list(self.profile), "field": str(self.field),
                "bases": [[[str(x) for x in row] for row in b.tolist()] for b in self.bases]}


def make_witness(alpha: DimensionVector, bases: Sequence, field: FieldSpec) -> SubmoduleWitness:
    """Echelonize and validate a candidate proper nonzero graded subspace."""
    rows = []
    for a, b in zip(alpha.dims, bases):
        b = field.array(b) if len(b) else field.zeros((0, a))
        b = b.reshape(-1, a)
        rows.append(linalg.row_basis(b, field) if b.shape[0] else b)
    w = SubmoduleWitness(alpha, tuple(rows), field)
    if not w.is_proper():
        raise StabilityError("witness must be a proper nonzero graded subspace")
    return w


def _images(mu: Cochain, i: int, j: int, basis: np.ndarray) -> np.ndarray:
    """Rows spanning sum_a mu_{ij}(a)(W_j), as row vectors in V_i."""
    f = mu.field
    blk = mu.blocks[(j, (i - j,))]
    if basis.shape[0] == 0 or blk.shape[1] == 0:
        return f.zeros((0, blk.shape[1]))
    # blk[a] : V_j -> V_i ; image of row w is blk[a] @ w
    imgs = np.einsum("aij,rj->ari", blk, basis).reshape(-1, blk.shape[1])
    return f.reduce(imgs)


def is_closed(mu: Cochain, bases: Sequence[np.ndarray]) -> bool:
    f = mu.field
    alpha = mu.alpha
    for i in alpha.degrees():
        Wi = bases[i - alpha.p]
        for j in alpha.degrees():
            if j >= i:
                continue
            if not linalg.span_contains(Wi, _images(mu, i, j, bases[j - alpha.p]), f):
                return False
    return True


def submodule_closure(mu: Cochain, bases: Sequence[np.ndarray]) -> tuple[np.ndarray, ...]:
    """Smallest graded mu-stable subspace containing the given pieces."""
    f = mu.field
    alpha = mu.alpha
    out = []
    for i in alpha.degrees():
        rows = [np.asarray(bases[i - alpha.p], dtype=object).reshape(-1, alpha[i])]
        for j in alpha.degrees():
            if j < i:
                rows.append(_images(mu, i, j, out[j - alpha.p]))
        stacked = np.vstack(rows) if rows else f.zeros((0, alpha[i]))
        out.append(linalg.row_basis(stacked, f) if stacked.shape[0] else stacked)
    return tuple(out)


def _subspaces_containing(U: np.ndarray, n: int, field: FieldSpec) -> Iterator[np.ndarray]:
    """Every subspace of F_p^n containing span(U), each once, as rref rows."""
    piv = [int(np.flatnonzero(row != 0)[0]) for row in U]
    free = [c for c in range(n) if c not in set(piv)]
    for S in linalg.all_subspaces(len(free), field):
        lifted = field.zeros((S.shape[0], n))
        if S.shape[0]:
            lifted[:, free] = S
        stacked = np.vstack([U, lifted]) if U.shape[0] + lifted.shape[0] else field.zeros((0, n))
        yield linalg.row_basis(stacked, field) if stacked.shape[0] else stacked


def count_bound(alpha: DimensionVector, p: int) -> int:
    """Upper bound on the number of graded subspaces (product of subspace counts)."""
    total = 1
    for a in alpha.dims:
        total *= sum(linalg.gaussian_binomial(a, k, p) for k in range(a + 1))
    return total


def enumerate_submodules(mu: Cochain, budget: int = DEFAULT_BUDGET,
                         check_module: bool = True) -> Iterator[SubmoduleWitness]:
    """Every proper nonzero graded submodule of a module over F_p, in canonical order."""
    f = mu.field
    if f.is_rational:
        raise StabilityError("submodule enumeration needs a prime field")
    alpha = mu.alpha
    if alpha.total > budget:
        raise StabilityError(f"sum of dimensions {alpha.total} exceeds the budget {budget} "
                             f"(up to {count_bound(alpha, f.p)} graded subspaces)")
    if check_module and not is_module(mu):
        raise StabilityError("submodule enumeration requires a Maurer-Cartan point")
    degs = list(alpha.degrees())

    def rec(level: int, chosen: list):
        if level == len(degs):
            w = SubmoduleWitness(alpha, tuple(chosen), f)
            if w.is_proper():
                yield w
            return
        i = degs[level]
        forced = [_images(mu, i, j, chosen[j - alpha.p]) for j in degs[:level]]
        stacked = np.vstack(forced) if forced else f.zeros((0, alpha[i]))
        U = linalg.row_basis(stacked, f) if stacked.shape[0] else f.zeros((0, alpha[i]))
        for Wi in _subspaces_containing(U, alpha[i], f):
            yield from rec(level + 1, chosen + [Wi])

    yield from rec(0, [])


# -- verdicts -------------------------------------------------------------------


class Status(str, Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


_RANK = {Status.UNSTABLE: 0, Status.STRICTLY_SEMISTABLE: 1, Status.STABLE: 2}


@dataclass
class StabilityVerdict:
    status: Status
    witness: SubmoduleWitness | None
    theta_value: int | None
    certificate: str                      # "ExactRational" or "FiniteFieldEvidence"
    primes: tuple[int, ...]
    per_prime: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "thetaValue": self.theta_value,
            "certificateLevel": self.certificate,
            "primes": list(self.primes),
            "perPrime": {str(p): v for p, v in self.per_prime.items()},
            "witness": self.witness.to_dict() if self.witness else None,
            "notes": list(self.notes),
        }


def reduce_mod(mu: Cochain, A_p: GradedAlgebra) -> Cochain:
    """Reduce a rational module point mod p, over the reduction ``A_p`` of its algebra."""
    f = A_p.field
    try:
        blocks = {k: f.array(b) if b.size else f.zeros(b.shape) for k, b in mu.blocks.items()}
    except ZeroDivisionError:
        raise StabilityError(f"module point has a denominator divisible by {f.p}; "
                             "choose other primes or clear denominators") from None
    return Cochain(A_p, mu.alpha, mu.degree, blocks)


def reduce_algebra(A: GradedAlgebra, field: FieldSpec) -> GradedAlgebra:
    mult = {k: field.array(t) if t.size else field.zeros(t.shape) for k, t in A.mult.items()}
    return GradedAlgebra(A.degree_bound, A.labels, mult, field, A.name)


def scan_prime(mu_p: Cochain, theta: Character, budget: int = DEFAULT_BUDGET) -> tuple[int | None, SubmoduleWitness | None, int]:
    """(min theta(W), first witness attaining it, number of submodules) over one prime field."""
    best, best_w, count = None, None, 0
    for w in enumerate_submodules(mu_p, budget):
        count += 1
        v = theta(w.profile)
        if best is None or v < best:
            best, best_w = v, w
    return best, best_w, count


def _status(min_theta: int | None) -> Status:
    if min_theta is None or min_theta > 0:
        return Status.STABLE
    return Status.STRICTLY_SEMISTABLE if min_theta == 0 else Status.UNSTABLE


def lift_witness(w: SubmoduleWitness) -> SubmoduleWitness:
    """Entrywise lift of an F_p witness to integers in [0, p), as rationals."""
    bases = tuple(linalg.RATIONALS.array(b) if b.size else linalg.RATIONALS.zeros(b.shape) for b in w.bases)
    return SubmoduleWitness(w.alpha, bases, linalg.RATIONALS)


def verify_witness_rational(mu: Cochain, w: SubmoduleWitness, theta: Character) -> tuple[bool, int]:
    """Exact closure check of a rational witness and its theta value."""
    if not mu.field.is_rational or not w.field.is_rational:
        raise StabilityError("rational verification needs rational inputs")
    if w.alpha != mu.alpha:
        raise StabilityError("witness and module have different dimension vectors")
    bases = [linalg.row_basis(b, linalg.RATIONALS) if b.shape[0] else b for b in w.bases]
    closed = is_closed(mu, bases)
    return closed, theta(tuple(b.shape[0] for b in bases))


def _scan_job(args):
    mu, A, p, theta, budget = args
    f = FieldSpec(p)
    mu_p = mu if not mu.field.is_rational else reduce_mod(mu, reduce_algebra(A, f))
    if not is_module(mu_p):
        raise StabilityError(f"reduction mod {p} is not a module")
    return scan_prime(mu_p, theta, budget)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("MC_MODULI_THREADS", "1")))
    except ValueError:
        return 1


def check_stability(mu: Cochain, theta: Character, primes: Sequence[int] = (2, 3),
                    mode: str = "exact-lift", budget: int = DEFAULT_BUDGET,
                    workers: int | None = None) -> StabilityVerdict:
    """Decide theta-(semi)stability over each prime field and combine.

    ``mode`` is ``"exact-lift"`` (rational input, unstable witnesses are
    certified over Q) or ``"finite-field"``. The combined status is the
    worst one seen; the witness is the first (in prime order, then in
    canonical order) attaining the minimum theta value.
    """
    if mode not in ("exact-lift", "finite-field"):
        raise StabilityError(f"unknown mode {mode!r}")
    if theta.alpha != mu.alpha:
        raise StabilityError("character is paired with a different dimension vector")
    if not is_module(mu):
        raise StabilityError("stability check requires a Maurer-Cartan point")
    f = mu.field
    if not f.is_rational:
        if any(p != f.p for p in primes):
            raise StabilityError(f"module is defined over {f}; only that prime can be scanned")
        if mode == "exact-lift":
            raise StabilityError("exact-lift mode needs a rational module point")
    primes = tuple(primes)
    jobs = [(mu, mu.A, p, theta, budget) for p in primes]
    workers = workers or default_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as ex:
            results = list(ex.map(_scan_job, jobs))
    else:
        results = [_scan_job(j) for j in jobs]

    per_prime = {}
    best = None
    for p, (mn, w, count) in zip(primes, results):
        per_prime[p] = {"status": _status(mn).value, "minTheta": mn, "submodules": count}
        if mn is not None and (best is None or mn < best[0]):
            best = (mn, w, p)
    status = Status.STABLE
    for p, (mn, _, _) in zip(primes, results):
        s = _status(mn)
        if _RANK[s] < _RANK[status]:
            status = s
    notes = []
    if len({v["status"] for v in per_prime.values()}) > 1:
        notes.append("verdicts differ between primes; combined status is the worst")
    witness = theta_value = None
    certificate = "FiniteFieldEvidence"
    if status is not Status.STABLE and best is not None:
        theta_value, witness, _ = best
        if mode == "exact-lift":
            lifted = lift_witness(witness)
            closed, val = verify_witness_rational(mu, lifted, theta)
            if closed and val == theta_value:
                witness = lifted
                if status is Status.UNSTABLE:
                    certificate = "ExactRational"
            else:
                notes.append("witness did not lift to Q; verdict kept as finite-field evidence")
    return StabilityVerdict(status, witness, theta_value, certificate, primes, per_prime, notes)


def transform_witness(g: GaugeElement, w: SubmoduleWitness) -> SubmoduleWitness:
    """g . W: apply g_i to every basis vector of W_i."""
    f = w.field
    bases = []
    for i, b in zip(w.alpha.degrees(), w.bases):
        img = f.reduce(b @ g.g(i).T) if b.shape[0] else b
        bases.append(linalg.row_basis(img, f) if img.shape[0] else img)
    return SubmoduleWitness(w.alpha, tuple(bases), f)
