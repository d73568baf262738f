"""Named desk-scale instances, built from JSON descriptors so that the CLI and
the library see the same objects."""

from __future__ import annotations

from .dgla import Cochain, DimensionVector, direct_sum, tautological_module, zero_module
from .galgebra import GradedAlgebra
from .io import algebra_from_dict, cochain_to_dict


def algebra_doc(names="xy", degree_bound=5, field="Q", relations=()) -> dict:
    return {"schema": "mc-moduli/algebra/v1", "vars": [{"name": n, "degree": 1} for n in names],
            "relations": list(relations), "degreeBound": degree_bound, "field": field}


def _line(A):
    return tautological_module(A, 0, 1)


def _o_p1(A):
    return tautological_module(A, 0, 2)


def _o_plus_o_minus_2(A):
    return direct_sum(tautological_module(A, 0, 2), zero_module(A, DimensionVector(0, (0, 0, 1))))


def _simple(A):
    mu = zero_module(A, DimensionVector(0, (1, 1)))
    mu.blocks[(0, (1,))][0, 0, 0] = A.field.one
    return mu


def _zero(A):
    return zero_module(A, DimensionVector(0, (1, 1, 1)))


def _chain(A):
    # k[x] on [0, 2]: mu(x) = (1, 1), mu(x^2) = 1
    mu = zero_module(A, DimensionVector(0, (1, 1, 1)))
    one = A.field.one
    mu.blocks[(0, (1,))][0, 0, 0] = one
    mu.blocks[(1, (1,))][0, 0, 0] = one
    mu.blocks[(0, (2,))][0, 0, 0] = one
    return mu


def _quadric(A):
    return tautological_module(A, 0, 2)


FIXTURES = {
    # name: (algebra descriptor kwargs, module builder, description)
    "line": (dict(names="xy"), _line, "Gamma_[0,1] of k[x,y]; dims (1,2)"),
    "O_P1": (dict(names="xy"), _o_p1, "Gamma_[0,2] O on P^1: k[x,y] on its window [0,2]; dims (1,2,3)"),
    "O_plus_O(-2)": (dict(names="xy"), _o_plus_o_minus_2, "Gamma_[0,2](O + O(-2)); dims (1,2,4)"),
    "simple": (dict(names="xy", degree_bound=2), _simple, "k[x,y] on [0,1], mu(x)=1, mu(y)=0; dims (1,1)"),
    "zero": (dict(names="xy"), _zero, "zero action of k[x,y] on dims (1,1,1)"),
    "chain": (dict(names="x", degree_bound=3), _chain, "k[x] on [0,2] with mu(x)=(1,1), mu(x^2)=1"),
    "quadric": (dict(names="xyz", degree_bound=4, relations=["x*z - y^2"]), _quadric,
                "k[x,y,z]/(xz - y^2) on its window [0,2]; dims (1,3,5)"),
}


def build(name: str, field: str = "Q", degree_bound: int | None = None) -> tuple[dict, GradedAlgebra, Cochain]:
    """(algebra descriptor, algebra, module point) of a named fixture."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    kw, builder, _ = FIXTURES[name]
    kw = dict(kw, field=field)
    if degree_bound is not None:
        kw["degree_bound"] = degree_bound
    doc = algebra_doc(**kw)
    A = algebra_from_dict(doc)
    return doc, A, builder(A)


def module_doc(name: str, field: str = "Q") -> dict:
    return cochain_to_dict(build(name, field)[2])
