"""JSON descriptors for algebras and module points (strict, schema-validated)."""

from __future__ import annotations

import ast
import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .dgla import Cochain, DimensionVector
from .galgebra import (AlgebraError, Element, GradedAlgebra, _monomial_label, polynomial_algebra,
                       quotient_algebra)
from .linalg import FieldSpec


class DescriptorError(ValueError):
    """Input that does not parse against the documented schemas."""


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("mc_moduli").joinpath("schemas", f"{name}.v1.json").read_text()
    return json.loads(text)


def _validate(doc, name: str):
    try:
        jsonschema.validate(doc, schema(name))
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise DescriptorError(f"{name} descriptor invalid at {path}: {e.message}") from None


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DescriptorError(f"{path}: malformed JSON ({e})") from None
    except OSError as e:
        raise DescriptorError(f"{path}: {e.strerror}") from None


# -- polynomial strings ------------------------------------------------------


def parse_polynomial(text: str, names: list[str]) -> dict[tuple[int, ...], int]:
    """Integer polynomial in the named variables, as {exponent vector: coefficient}.

    Accepts + - * and ^ (or **) with nonnegative integer exponents.
    """
    idx = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise DescriptorError(f"cannot parse polynomial {text!r}") from None

    def const(c):
        return {(0,) * nvars: c} if c else {}

    def add(a, b, sign=1):
        out = dict(a)
        for m, c in b.items():
            out[m] = out.get(m, 0) + sign * c
            if out[m] == 0:
                del out[m]
        return out

    def mul(a, b):
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
                if out[m] == 0:
                    del out[m]
        return out

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in idx:
                raise DescriptorError(f"unknown variable {node.id!r} in {text!r}")
            e = [0] * nvars
            e[idx[node.id]] = 1
            return {tuple(e): 1}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return {m: -c for m, c in v.items()} if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and type(node.right.value) is int
                        and node.right.value >= 0):
                    raise DescriptorError(f"exponents must be nonnegative integers in {text!r}")
                base, out = walk(node.left), const(1)
                for _ in range(node.right.value):
                    out = mul(out, base)
                return out
            a, b = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return add(a, b)
            if isinstance(node.op, ast.Sub):
                return add(a, b, -1)
            if isinstance(node.op, ast.Mult):
                return mul(a, b)
        raise DescriptorError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)


# -- algebras -------------------------------------------------------------------


def algebra_from_dict(doc: dict) -> GradedAlgebra:
    _validate(doc, "algebra")
    names = [v["name"] for v in doc["vars"]]
    if len(set(names)) != len(names):
        raise DescriptorError("variable names must be distinct")
    degs = [v["degree"] for v in doc["vars"]]
    try:
        field = FieldSpec.parse(doc["field"])
        A = polynomial_algebra(len(names), degs, doc["degreeBound"], field, names)
    except ValueError as e:
        raise DescriptorError(str(e)) from None
    rels = []
    for text in doc.get("relations", []):
        poly = parse_polynomial(text, names)
        if not poly:
            continue
        tdeg = {sum(e * g for e, g in zip(m, degs)) for m in poly}
        if len(tdeg) != 1:
            raise DescriptorError(f"inhomogeneous relation {text!r}")
        d = tdeg.pop()
        if d > A.degree_bound:
            continue  # the ideal is invisible below the bound
        if d == 0:
            raise DescriptorError("constant relation generates the unit ideal")
        v = field.zeros(A.dim(d))
        for m, c in poly.items():
            v[A.labels[d].index(_monomial_label(m, names))] = field(c)
        rels.append(Element(d, v))
    if rels:
        try:
            A = quotient_algebra(A, rels)
        except AlgebraError as e:
            raise DescriptorError(str(e)) from None
    object.__setattr__(A, "name", _algebra_name(names, doc.get("relations", [])))
    object.__setattr__(A, "descriptor", dict(doc))
    return A


def _algebra_name(names, relations) -> str:
    base = f"k[{','.join(names)}]"
    return base + (f"/({', '.join(relations)})" if relations else "")


def load_algebra(path) -> GradedAlgebra:
    return algebra_from_dict(load_json(path))


# -- modules and cochains ----------------------------------------------------------


def _label_degree(A: GradedAlgebra, label: str) -> tuple[int, int]:
    for d in range(1, A.degree_bound + 1):
        if label in A.labels[d]:
            return d, A.labels[d].index(label)
    raise DescriptorError(f"{label!r} is not a basis element of a positive-degree piece of {A.name}")


def _matrix(field: FieldSpec, rows, shape, where: str) -> np.ndarray:
    if shape[0] == 0 or shape[1] == 0:
        if any(len(r) for r in rows):
            raise DescriptorError(f"{where}: block must be empty for a zero-dimensional piece")
        return field.zeros(shape)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise DescriptorError(f"{where}: expected a {shape[0]}x{shape[1]} matrix")
    try:
        return field.array([[Fraction(x) if isinstance(x, str) else x for x in r] for r in rows])
    except ZeroDivisionError as e:
        raise DescriptorError(f"{where}: {e}") from None


def cochain_from_dict(doc: dict, A: GradedAlgebra) -> Cochain:
    _validate(doc, "module")
    p, q = doc["window"]
    if q - p + 1 != len(doc["dims"]):
        raise DescriptorError("window and dims have different lengths")
    try:
        alpha = DimensionVector(p, tuple(doc["dims"]))
    except ValueError as e:
        raise DescriptorError(str(e)) from None
    if A.degree_bound < alpha.length:
        raise DescriptorError(f"algebra degree bound {A.degree_bound} < window length {alpha.length}")
    if "action" in doc and ("components" in doc or doc.get("degree", 1) != 1):
        raise DescriptorError("'action' describes a degree-1 point; use 'components' for other degrees")
    n = doc.get("degree", 1)
    c = Cochain.zero(A, alpha, n)
    entries = doc.get("action", [])
    seen = set()
    for k, ent in enumerate(entries):
        d, a = _label_degree(A, ent["element"])
        j = ent["source"]
        _place(c, (j, (d,)), (a,), ent["matrix"], f"action[{k}]", seen)
    for k, ent in enumerate(doc.get("components", [])):
        if len(ent["arguments"]) != n:
            raise DescriptorError(f"components[{k}]: expected {n} arguments")
        da = [_label_degree(A, lab) for lab in ent["arguments"]]
        comp = tuple(d for d, _ in da)
        _place(c, (ent["source"], comp), tuple(a for _, a in da), ent["matrix"], f"components[{k}]", seen)
    return c


def _place(c: Cochain, key, arg_index, rows, where, seen):
    if key not in c.blocks:
        raise DescriptorError(f"{where}: source degree {key[0]} and arguments leave the window")
    if (key, arg_index) in seen:
        raise DescriptorError(f"{where}: duplicate block")
    seen.add((key, arg_index))
    blk = c.blocks[key]
    c.blocks[key][arg_index] = _matrix(c.field, rows, blk.shape[-2:], where)


def load_cochain(path, A: GradedAlgebra) -> Cochain:
    return cochain_from_dict(load_json(path), A)


def _scalar_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return int(x)


def cochain_to_dict(c: Cochain) -> dict:
    A = c.A
    doc = {"schema": "mc-moduli/module/v1", "window": [c.alpha.p, c.alpha.q], "dims": list(c.alpha.dims)}
    entries = []
    for key in c.space.keys:
        j, comp = key
        blk = c.blocks[key]
        for idx in np.ndindex(*blk.shape[:-2]):
            m = blk[idx]
            if m.size == 0 or not np.any(m != 0):
                continue
            rows = [[_scalar_json(x) for x in r] for r in m.tolist()]
            labels = [A.labels[d][a] for d, a in zip(comp, idx)]
            if c.degree == 1:
                entries.append({"element": labels[0], "source": j, "matrix": rows})
            else:
                entries.append({"arguments": labels, "source": j, "matrix": rows})
    if c.degree == 1:
        doc["action"] = entries
    else:
        doc["degree"] = c.degree
        doc["components"] = entries
    return doc


def dump(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
