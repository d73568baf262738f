import itertools
import random

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import settings

from mc_moduli import fixtures
from mc_moduli.dgla import Cochain, DimensionVector, GaugeElement, gauge_act
from mc_moduli.galgebra import free_algebra, polynomial_algebra
from mc_moduli.linalg import FieldSpec

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

Q = FieldSpec()
F2, F3, F101 = FieldSpec(2), FieldSpec(3), FieldSpec(101)


def word_module(A, alpha, gens, field):
    """Module over a free algebra (or k[x]) from arbitrary degree-one data.

    ``gens[k][i]`` is the matrix of the k-th generator V_i -> V_{i+1}; a word
    acts as the product of its letters, the rightmost letter first.
    """
    mu = Cochain.zero(A, alpha, 1)
    nvars = len(gens)
    for (j, (d,)), blk in mu.blocks.items():
        for w, word in enumerate(itertools.product(range(nvars), repeat=d)):
            m = field.eye(alpha[j])
            for pos, k in enumerate(reversed(word)):
                m = gens[k][j + pos] @ m
            blk[w] = field.reduce(m)
    return mu


def random_word_module(A, alpha, field, rng, nvars):
    gens = [{i: field.random_array((alpha[i + 1], alpha[i]), rng) for i in alpha.degrees()[:-1]}
            for _ in range(nvars)]
    return word_module(A, alpha, gens, field)


class ModuleFixture:
    """An (algebra, window) pair with a sampler for random Maurer-Cartan points."""

    def __init__(self, name, A, alpha, sampler):
        self.name, self.A, self.alpha, self._sampler = name, A, alpha, sampler

    def random_mc(self, rng):
        return self._sampler(rng)

    def __repr__(self):
        return f"<{self.name}>"


def _gauge_orbit_sampler(mu):
    def sample(rng):
        return gauge_act(GaugeElement.random(mu.alpha, mu.field, rng), mu)
    return sample


def module_fixtures(field):
    out = []
    A = free_algebra(2, 3, field)
    for dims in [(1, 2, 1), (1, 1, 1, 1)]:
        alpha = DimensionVector(0, dims)
        out.append(ModuleFixture(f"free2{dims}", A, alpha,
                                 lambda rng, A=A, alpha=alpha: random_word_module(A, alpha, field, rng, 2)))
    kx = polynomial_algebra(1, degree_bound=3, field=field)
    alpha = DimensionVector(1, (1, 2, 2))
    out.append(ModuleFixture("k[x](1,2,2)", kx, alpha,
                             lambda rng: random_word_module(kx, alpha, field, rng, 1)))
    name = str(field)
    for fx in ("O_P1", "simple"):
        _, Af, mu = fixtures.build(fx, name, degree_bound=3 if fx == "O_P1" else None)
        out.append(ModuleFixture(fx, Af, mu.alpha, _gauge_orbit_sampler(mu)))
    _, Af, mu = fixtures.build("quadric", name, degree_bound=3)
    out.append(ModuleFixture("quadric", Af, mu.alpha, _gauge_orbit_sampler(mu)))
    return out


@pytest.fixture(scope="session")
def fixtures_q():
    return module_fixtures(Q)


@pytest.fixture(scope="session")
def fixtures_f101():
    return module_fixtures(F101)


@pytest.fixture
def rng():
    return random.Random(20261018)


# -- hypothesis strategies ---------------------------------------------------


fields = st.sampled_from([Q, F2, F3, FieldSpec(5), F101])
prime_fields = st.sampled_from([F2, F3])


@st.composite
def matrices(draw, field=None, max_rows=6, max_cols=6):
    field = field or draw(fields)
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    lo, hi = (-4, 4) if field.is_rational else (0, field.p - 1)
    vals = draw(st.lists(st.integers(lo, hi), min_size=r * c, max_size=r * c))
    return field, field.array(np.array(vals, dtype=object).reshape(r, c)) if r else field.zeros((0, c))


@st.composite
def dimension_vectors(draw, max_len=4, max_dim=3, min_total=1):
    p = draw(st.integers(0, 2))
    dims = draw(st.lists(st.integers(0, max_dim), min_size=1, max_size=max_len))
    if sum(dims) < min_total:
        dims[0] = min_total
    return DimensionVector(p, tuple(dims))


# -- acceptance reporting ------------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    prev = _ACCEPTANCE.get(number)
    ok = rep.passed and (prev is None or prev[1])
    _ACCEPTANCE[number] = (title, ok, rep.duration if rep.when == "call" else 0.0)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({secs:.1f}s)")
