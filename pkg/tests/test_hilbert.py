import math
import random
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mc_moduli import fixtures, hilbert, io
from mc_moduli.dgla import DimensionVector, GaugeElement, gauge_act, tautological_module
from mc_moduli.galgebra import free_algebra
from mc_moduli.hilbert import (HilbertError, HilbertPolynomial, binomial, evaluate, extend_module,
                               from_values, gotzmann_check, is_generated_in_lowest_degree,
                               is_primitive, macaulay_bound, macaulay_rep, truncate_gauge,
                               truncate_module)

from conftest import Q, word_module


def test_binomial_polynomial_convention():
    assert [binomial(5, i) for i in range(7)] == [comb(5, i) for i in range(7)]
    assert binomial(-1, 2) == 1
    assert binomial(-3, 3) == -10
    assert binomial(4, -1) == 0


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.integers(-5, 5))
def test_from_values_interpolates(values, start):
    h = from_values(values, start)
    assert [evaluate(h, start + k) for k in range(len(values))] == values


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5), st.integers(-4, 6))
def test_primitivity_equivalence(coeffs, start):
    h = HilbertPolynomial(tuple(coeffs))
    if h.is_zero():
        with pytest.raises(HilbertError):
            is_primitive(h)
        return
    window = (start, start + h.degree)
    by_values = math.gcd(*[h(t) for t in range(window[0], window[1] + 1)]) == 1
    assert is_primitive(h, window) == by_values == (math.gcd(*h.coeffs) == 1)


def test_primitivity_needs_enough_values():
    with pytest.raises(HilbertError):
        is_primitive(HilbertPolynomial((1, 1, 1)), (0, 1))


def test_macaulay_round_trip():
    for t in range(1, 7):
        for a in range(501):
            rep = macaulay_rep(a, t)
            assert rep.value() == a
            assert all(x > y for x, y in zip(rep.terms, rep.terms[1:]))
            assert rep.terms[-1] >= 0


@pytest.mark.parametrize("a,t,bound", [(4, 1, 10), (5, 2, 7), (3, 1, 6), (0, 3, 0), (1, 4, 1)])
def test_macaulay_bound_values(a, t, bound):
    assert macaulay_bound(a, t) == bound


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_macaulay_bound_is_sharp_on_polynomial_rings(n):
    # the polynomial ring itself grows maximally: dim S_t^<t> = dim S_{t+1}
    for t in range(1, 7):
        assert macaulay_bound(comb(n - 1 + t, t), t) == comb(n + t, t + 1)


@pytest.mark.parametrize("values,persistent_from,ok", [
    ((1, 2, 3, 4, 5), 1, True),
    ((1, 3, 5, 7, 9), 2, True),
    ((1, 2, 3, 4, 4, 4, 4), 4, True),
    ((1, 2, 5), None, False),
])
def test_gotzmann(values, persistent_from, ok):
    rep = gotzmann_check(values)
    assert rep.macaulay_ok is ok
    assert rep.persistent_from == persistent_from
    assert rep.skipped == [0]


def test_extend_line():
    _, A, mu = fixtures.build("line")
    assert extend_module(mu, 5) == (1, 2, 3, 4, 5, 6)


def test_extend_delayed_relation():
    A = io.algebra_from_dict(fixtures.algebra_doc("xy", 6, relations=["x^4"]))
    mu = tautological_module(A, 0, 4)
    h = extend_module(mu, 6)
    assert h == (1, 2, 3, 4, 4, 4, 4)
    assert gotzmann_check(h).persistent_from == 4


@pytest.mark.parametrize("names,rels,q", [("xy", [], 2), ("xyz", ["x*z - y^2"], 2), ("xy", ["x*y"], 2),
                                          ("xyz", ["x^2", "y*z"], 2), ("xy", ["x^3 - y^3"], 3)])
def test_extension_obeys_macaulay(names, rels, q):
    A = io.algebra_from_dict(fixtures.algebra_doc(names, 6, relations=rels))
    h = extend_module(tautological_module(A, 0, q), 6)
    assert h == tuple(A.dim(d) for d in range(7))
    assert gotzmann_check(h).macaulay_ok


def test_generation():
    assert is_generated_in_lowest_degree(fixtures.build("O_P1")[2])
    assert not is_generated_in_lowest_degree(fixtures.build("O_plus_O(-2)")[2])
    assert not is_generated_in_lowest_degree(fixtures.build("zero")[2])
    with pytest.raises(HilbertError, match="not generated"):
        extend_module(fixtures.build("zero")[2], 4)


def test_extend_errors():
    _, A, mu = fixtures.build("O_P1", degree_bound=3)
    with pytest.raises(HilbertError):
        extend_module(mu, 1)
    with pytest.raises(HilbertError, match="degree bound"):
        extend_module(mu, 5)


@given(st.integers(0, 2**31))
def test_truncation_commutes_with_gauge(seed):
    rng = random.Random(seed)
    _, A, mu = fixtures.build("O_plus_O(-2)", degree_bound=2)
    g = GaugeElement.random(mu.alpha, Q, rng)
    for p_new in (0, 1, 2):
        lhs = truncate_module(gauge_act(g, mu), p_new)
        rhs = gauge_act(truncate_gauge(g, p_new), truncate_module(mu, p_new))
        assert lhs == rhs


def test_truncation_commutes_with_lambda0():
    _, A, mu = fixtures.build("O_P1", degree_bound=2)
    lam = GaugeElement.canonical(mu.alpha, Q, 2)
    assert truncate_module(gauge_act(lam, mu), 1) == gauge_act(truncate_gauge(lam, 1), truncate_module(mu, 1))


def test_pipeline_o_p1():
    _, A, mu = fixtures.build("O_P1")
    rep = hilbert.sheaf_stability_pipeline(mu, 1, 5)
    assert rep.generated
    assert rep.extension == (1, 2, 3, 4, 5, 6)
    assert rep.combined == "Stable"
    assert rep.certificate
    assert rep.first_failure is None


def test_pipeline_unstable():
    _, A, mu = fixtures.build("O_plus_O(-2)")
    rep = hilbert.sheaf_stability_pipeline(mu, 1, 5).to_dict()
    assert rep["combined"] == "Unstable"
    assert rep["firstFailure"] == "generation"
    assert rep["extendedHilbertFunction"] is None
    assert not rep["sheafCertificate"]


def test_pipeline_reports_noncommutative_input():
    A = free_algebra(2, 2, Q)
    alpha = DimensionVector(0, (1, 2, 4))
    gens = [{0: Q.array([[1], [0]]), 1: Q.array([[1, 0], [0, 1], [0, 0], [0, 0]])},
            {0: Q.array([[0], [1]]), 1: Q.array([[0, 0], [0, 0], [1, 0], [0, 1]])}]
    mu = word_module(A, alpha, gens, Q)
    rep = hilbert.sheaf_stability_pipeline(mu, 1, 2, primes=(2,)).to_dict()
    assert rep["algebraCommutative"] is False
    assert any("not commutative" in n for n in rep["notes"])
