"""Hilbert polynomials, Macaulay bounds, Gotzmann persistence, and the
module-to-sheaf bridge (truncation, extension by generators and relations)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import linalg
from .dgla import Cochain, DimensionVector, GaugeElement, is_module
from .stability import (Status, check_stability, extremal_character,
                        submodule_closure)


class HilbertError(ValueError):
    pass


def binomial(t: int, i: int) -> int:
    """C(t, i) as the polynomial t(t-1)...(t-i+1)/i!, valid for every integer t."""
    if i < 0:
        return 0
    num = 1
    for k in range(i):
        num *= t - k
    return num // math.factorial(i)


@dataclass(frozen=True)
class HilbertPolynomial:
    """alpha(t) = sum a_i C(t, i)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: int) -> int:
        return evaluate(self, t)

    def is_zero(self) -> bool:
        return not self.coeffs


def evaluate(h: HilbertPolynomial, t: int) -> int:
    return sum(a * binomial(t, i) for i, a in enumerate(h.coeffs))


def from_values(values: Sequence[int], start: int = 0) -> HilbertPolynomial:
    """Binomial-basis coefficients of the polynomial through (start+k, values[k])."""
    # Newton forward differences at `start`, then shift to the C(t, i) basis
    diffs, row = [], list(values)
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    if start == 0:
        return HilbertPolynomial(tuple(diffs))
    # sum_k diffs_k C(t - start, k), re-expanded by Vandermonde: C(t-s, k) = sum_j C(-s, k-j) C(t, j)
    out = [0] * len(diffs)
    for k, dk in enumerate(diffs):
        for j in range(k + 1):
            out[j] += dk * binomial(-start, k - j)
    return HilbertPolynomial(tuple(out))


def is_primitive(h: HilbertPolynomial, window: tuple[int, int] | None = None) -> bool:
    """gcd of the coefficients is 1; cross-checked against the gcd of values on a window."""
    if h.is_zero():
        raise HilbertError("the zero polynomial is not primitive or imprimitive")
    by_coeffs = math.gcd(*h.coeffs) == 1
    p, q = window if window is not None else (0, h.degree)
    if q - p < h.degree:
        raise HilbertError("value window must contain at least degree + 1 points")
    by_values = math.gcd(*[evaluate(h, t) for t in range(p, q + 1)]) == 1
    if by_coeffs != by_values:
        raise AssertionError("coefficient and value primitivity disagree")
    return by_coeffs


# -- Macaulay representations ------------------------------------------------


@dataclass(frozen=True)
class MacaulayRep:
    """a = sum_{i=1}^t C(m_i, i) with m_t > ... > m_1 >= 0; ``terms = (m_t, ..., m_1)``."""

    a: int
    t: int
    terms: tuple[int, ...]

    def value(self) -> int:
        return sum(binomial(m, i) for m, i in zip(self.terms, range(self.t, 0, -1)))


def macaulay_rep(a: int, t: int) -> MacaulayRep:
    if a < 0 or t < 1:
        raise HilbertError("need a >= 0 and t >= 1")
    terms = []
    rem = a
    for i in range(t, 0, -1):
        m = i - 1  # C(i-1, i) = 0
        while binomial(m + 1, i) <= rem:
            m += 1
        terms.append(m)
        rem -= binomial(m, i)
    return MacaulayRep(a, t, tuple(terms))


def macaulay_bound(a: int, t: int) -> int:
    """a^<t> = sum C(m_i + 1, i + 1)."""
    rep = macaulay_rep(a, t)
    return sum(binomial(m + 1, i + 1) for m, i in zip(rep.terms, range(t, 0, -1)))


@dataclass
class GotzmannReport:
    p: int
    values: tuple[int, ...]
    macaulay_ok: bool
    persistent_from: int | None
    bounds: dict = dc_field(default_factory=dict)      # d -> h_d^<d-p>
    violations: list = dc_field(default_factory=list)  # d with h_{d+1} > bound
    skipped: list = dc_field(default_factory=list)     # d with d - p < 1

    @property
    def persistent(self) -> bool:
        return self.persistent_from is not None

    def to_dict(self) -> dict:
        return {"p": self.p, "values": list(self.values), "macaulayOK": self.macaulay_ok,
                "persistentFrom": self.persistent_from,
                "bounds": {str(d): b for d, b in self.bounds.items()},
                "violations": self.violations, "skipped": self.skipped}


def gotzmann_check(values: Sequence[int], p: int = 0) -> GotzmannReport:
    """Compare h_{d+1} with h_d^<d-p> for d = p+1 .. D-1.

    ``values`` are h_p, h_{p+1}, ..., h_D. The pair (h_p, h_{p+1}) has no
    bound (t = 0) and is listed as skipped. ``persistent_from`` is the least d
    from which every later comparison is an equality.
    """
    values = tuple(int(v) for v in values)
    if len(values) < 2 or any(v < 0 for v in values):
        raise HilbertError("need at least two nonnegative values")
    D = p + len(values) - 1
    h = lambda d: values[d - p]
    report = GotzmannReport(p, values, True, None, skipped=[p])
    equal = {}
    for d in range(p + 1, D):
        b = macaulay_bound(h(d), d - p)
        report.bounds[d] = b
        if h(d + 1) > b:
            report.violations.append(d)
        equal[d] = h(d + 1) == b
    report.macaulay_ok = not report.violations
    start = None
    for d in range(D - 1, p, -1):
        if not equal[d]:
            break
        start = d
    report.persistent_from = start
    return report


# -- modules and windows ---------------------------------------------------------


def hilbert_function_of_module(mu: Cochain) -> tuple[int, ...]:
    return mu.alpha.dims


def truncate_module(mu: Cochain, p_new: int) -> Cochain:
    """Restrict a module point on [p, q] to the window [p_new, q]."""
    alpha = mu.alpha
    if not alpha.p <= p_new <= alpha.q:
        raise HilbertError(f"truncation degree {p_new} outside [{alpha.p}, {alpha.q}]")
    new_alpha = DimensionVector(p_new, alpha.dims[p_new - alpha.p:])
    out = Cochain.zero(mu.A, new_alpha, mu.degree)
    for key in out.blocks:
        out.blocks[key] = mu.blocks[key]
    return out


def truncate_gauge(g: GaugeElement, p_new: int) -> GaugeElement:
    alpha = g.alpha
    new_alpha = DimensionVector(p_new, alpha.dims[p_new - alpha.p:])
    return GaugeElement(new_alpha, g.blocks[p_new - alpha.p:], g.field)


def is_generated_in_lowest_degree(mu: Cochain) -> bool:
    if not is_module(mu):
        raise HilbertError("generation check requires a Maurer-Cartan point")
    f = mu.field
    alpha = mu.alpha
    seed = [f.eye(alpha[alpha.p])] + [f.zeros((0, a)) for a in alpha.dims[1:]]
    closure = submodule_closure(mu, seed)
    return tuple(b.shape[0] for b in closure) == alpha.dims


def _tensor_index(a: int, m: int, mp: int) -> int:
    return a * mp + m


def presentation_kernels(mu: Cochain) -> dict[int, np.ndarray]:
    """K_e = ker(A_{e-p} (x) M_p -> M_e) for p < e <= q, as rref row bases.

    Coordinates on A_{e-p} (x) M_p are indexed by (a, m) -> a * alpha_p + m.
    """
    f = mu.field
    alpha = mu.alpha
    p = alpha.p
    mp = alpha[p]
    out = {}
    for e in range(p + 1, alpha.q + 1):
        blk = mu.blocks[(p, (e - p,))]                    # (dim A_{e-p}, alpha_e, alpha_p)
        # column (a, m) of the multiplication map is mu(a) applied to basis vector m
        mat = np.transpose(blk, (1, 0, 2)).reshape(alpha[e], blk.shape[0] * mp)
        ker = linalg.kernel_basis(mat, f)
        out[e] = np.array(ker, dtype=object).reshape(len(ker), blk.shape[0] * mp) if ker else f.zeros((0, blk.shape[0] * mp))
    return out


def extend_module(mu: Cochain, top: int) -> tuple[int, ...]:
    """Hilbert function h_p..h_top of M~ = (A (x) M_p) / <K>, K the relations of M in [p+1, q]."""
    alpha = mu.alpha
    p = alpha.p
    A = mu.A
    f = mu.field
    if top < alpha.q:
        raise HilbertError("target degree must be at least q")
    if A.degree_bound < top - p:
        raise HilbertError(f"degree bound {A.degree_bound} < {top - p} needed to extend to degree {top}")
    if alpha[p] == 0 or not is_generated_in_lowest_degree(mu):
        raise HilbertError("module is not generated in its lowest degree")
    mp = alpha[p]
    kernels = presentation_kernels(mu)
    dims = []
    for d in range(p, top + 1):
        n = A.dim(d - p) * mp
        rows = []
        for e, K in kernels.items():
            if e > d or K.shape[0] == 0:
                continue
            # A_{d-e} * K_e inside A_{d-p} (x) M_p
            T = A.table(d - e, e - p)                     # (dim A_{d-e}, dim A_{e-p}, dim A_{d-p})
            Kt = K.reshape(K.shape[0], A.dim(e - p), mp)  # (r, b, m)
            prod = np.einsum("abc,rbm->arcm", T, Kt).reshape(-1, n)
            rows.append(f.reduce(prod))
        rk = linalg.rank(np.vstack(rows), f) if rows else 0
        dims.append(n - rk)
    for d in alpha.degrees():
        if dims[d - p] != alpha[d]:
            raise HilbertError("presentation mismatch")
    return tuple(dims)


# -- the pipeline ------------------------------------------------------------


@dataclass
class PipelineReport:
    params: dict
    generated: bool
    extension: tuple[int, ...] | None = None
    gotzmann: GotzmannReport | None = None
    hypothesis: dict | None = None
    stability: object = None
    truncated_stability: object = None
    combined: str = ""
    certificate: bool = False
    first_failure: str | None = None
    commutative: bool = True
    notes: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "parameters": self.params,
            "algebraCommutative": self.commutative,
            "generatedInLowestDegree": self.generated,
            "extendedHilbertFunction": list(self.extension) if self.extension else None,
            "gotzmann": self.gotzmann.to_dict() if self.gotzmann else None,
            "standingHypothesis": self.hypothesis,
            "stability": self.stability.to_dict() if self.stability else None,
            "truncatedStability": self.truncated_stability.to_dict() if self.truncated_stability else None,
            "combined": self.combined,
            "sheafCertificate": self.certificate,
            "firstFailure": self.first_failure,
            "regime": "module-level (semi)stability certificate for the associated sheaf, "
                      "valid under the q >> p' >> p regime for the stamped (p, p', q, D)",
            "notes": self.notes,
        }


_ORDER = {Status.UNSTABLE: 0, Status.STRICTLY_SEMISTABLE: 1, Status.STABLE: 2}


def sheaf_stability_pipeline(mu: Cochain, p_prime: int, top: int, primes: Sequence[int] = (2, 3),
                             mode: str = "exact-lift", budget: int = 10) -> PipelineReport:
    """Generation, extension, Gotzmann check, and extremal stability of M and M_[p',q].

    When generation fails the extension and Gotzmann stages are skipped
    (they are undefined) but both stability checks still run.
    """
    alpha = mu.alpha
    params = {"p": alpha.p, "pPrime": p_prime, "q": alpha.q, "D": top,
              "primes": list(primes), "mode": mode, "budget": budget}
    generated = is_generated_in_lowest_degree(mu)
    rep = PipelineReport(params, generated, commutative=mu.A.is_commutative())
    if not rep.commutative:
        rep.notes.append("algebra is not commutative: the sheaf reading of this report does not apply")
    if not generated:
        rep.first_failure = "generation"
        rep.notes.append("not generated in the lowest degree: extension and Gotzmann stages skipped")
    else:
        rep.extension = extend_module(mu, top)
        rep.gotzmann = gotzmann_check(rep.extension, alpha.p)
        fails = [d for d, b in rep.gotzmann.bounds.items() if rep.extension[d + 1 - alpha.p] != b]
        rep.hypothesis = {"holds": not fails, "failures": fails}
        if not rep.gotzmann.macaulay_ok:
            rep.first_failure = rep.first_failure or "macaulay"
        if fails:
            rep.notes.append("h(t+1) = h(t)^<t-p> fails at some t: the window is not yet in the stable range")
    rep.stability = check_stability(mu, extremal_character(alpha), primes, mode, budget)
    trunc = truncate_module(mu, p_prime)
    if trunc.alpha.length > 0 and trunc.alpha.dims[0] and trunc.alpha.dims[-1]:
        rep.truncated_stability = check_stability(trunc, extremal_character(trunc.alpha), primes, mode, budget)
    else:
        rep.notes.append("truncated window has no extremal character; truncated check skipped")
    verdicts = [v for v in (rep.stability, rep.truncated_stability) if v is not None]
    worst = min((v.status for v in verdicts), key=_ORDER.__getitem__)
    rep.combined = worst.value
    if worst is not Status.STABLE and rep.first_failure is None:
        rep.first_failure = "stability" if rep.stability.status is worst else "truncatedStability"
    rep.certificate = (generated and rep.gotzmann.macaulay_ok and rep.gotzmann.persistent
                       and worst is not Status.UNSTABLE)
    return rep
