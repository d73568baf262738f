"""mc-moduli: command-line front end.

Every command prints one JSON report (or a plain-text rendering of it) with
the tool version and the resolved parameters. Exit status is 0 on success,
1 when the mathematics refuses (not a module, budget exceeded, ...), and 2
when the input does not parse.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

from . import __version__, fixtures, hilbert, io, stability
from .derived import build_dg_presentation, evaluate_ideal, mc_ideal, tangent_cohomology, verify_q_squared
from .dgla import DimensionVector, LSpace, is_module, mc_residual
from .scan import DEFAULT_POINT_BUDGET, scan_mc


class UsageError(Exception):
    """Bad arguments that argparse itself cannot catch; exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- inputs ------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _add_source(p, module=True):
    g = p.add_argument_group("input")
    g.add_argument("--fixture", choices=list(fixtures.FIXTURES), help="use a built-in fixture")
    g.add_argument("--field", default="Q", help="field for --fixture: Q or Fp:<p> (default Q)")
    g.add_argument("--degree-bound", type=int, help="override the fixture's degree bound")
    g.add_argument("--algebra", type=Path, help="algebra descriptor (JSON)")
    if module:
        g.add_argument("--module", type=Path, help="module-point descriptor (JSON)")
    else:
        g.add_argument("--window", type=int, nargs=2, metavar=("P", "Q"))
        g.add_argument("--dims", type=_int_list, help="comma-separated dimension vector")


def _load(args, need_module=True):
    """(algebra, module point or None, parameter dict)."""
    if args.fixture:
        if args.algebra:
            raise UsageError("--fixture and --algebra are exclusive")
        try:
            doc, A, mu = fixtures.build(args.fixture, args.field, args.degree_bound)
        except ValueError as e:  # bad field string or bound below the window
            raise io.DescriptorError(str(e)) from None
        params = {"fixture": args.fixture, "field": args.field, "algebra": doc}
        return A, mu, params
    if not args.algebra:
        raise UsageError("either --fixture or --algebra is required")
    A = io.load_algebra(args.algebra)
    params = {"algebra": A.descriptor}
    if need_module:
        if not getattr(args, "module", None):
            raise UsageError("--module is required with --algebra")
        doc = io.load_json(args.module)
        mu = io.cochain_from_dict(doc, A)
        params["module"] = doc
        return A, mu, params
    return A, None, params


def _alpha(args, mu):
    if getattr(args, "dims", None) is not None:
        p = args.window[0] if args.window else 0
        if args.window and args.window[1] - p + 1 != len(args.dims):
            raise UsageError("--window and --dims disagree")
        try:
            return DimensionVector(p, tuple(args.dims))
        except ValueError as e:
            raise UsageError(str(e)) from None
    if mu is not None:
        return mu.alpha
    raise UsageError("--dims is required")


def _character(spec: str, A, alpha):
    if spec == "extremal":
        return stability.extremal_character(alpha)
    if spec == "determinant":
        return stability.determinant_character(A, alpha)
    if spec.startswith("custom:"):
        try:
            weights = _int_list(spec[len("custom:"):])
        except argparse.ArgumentTypeError as e:
            raise UsageError(str(e)) from None
        return stability.custom_character(alpha, weights)
    raise UsageError(f"unknown character {spec!r}; use extremal, determinant or custom:<list>")


# -- commands ------------------------------------------------------------------


def cmd_fixture(args):
    if args.list:
        return {"fixtures": {k: v[2] for k, v in fixtures.FIXTURES.items()}}, {}
    if not args.name:
        raise UsageError("fixture name required (or --list)")
    doc, A, mu = fixtures.build(args.name, args.field, args.degree_bound)
    mdoc = io.cochain_to_dict(mu)
    written = []
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        for stem, d in (("algebra", doc), ("module", mdoc)):
            path = args.out_dir / f"{args.name}.{stem}.json"
            io.dump(d, path)
            written.append(str(path))
    return {"algebra": doc, "module": mdoc, "written": written}, {"name": args.name, "field": args.field}


def cmd_mc_check(args):
    A, mu, params = _load(args)
    res = mc_residual(mu) if mu.degree == 1 else None
    nonzero = int(sum((b != 0).sum() for b in res.blocks.values())) if res is not None else None
    return {"isModule": bool(mu.degree == 1 and is_module(mu)), "degree": mu.degree,
            "residualNonzeroEntries": nonzero, "dims": list(mu.alpha.dims),
            "window": [mu.alpha.p, mu.alpha.q]}, params


def cmd_ideal(args):
    A, mu, params = _load(args, need_module=False)
    alpha = _alpha(args, mu)
    params["window"], params["dims"] = [alpha.p, alpha.q], list(alpha.dims)
    ring, gens = mc_ideal(A, alpha)
    out = {"variables": list(ring.names), "generators": [ring.format(g) for g in gens],
           "count": len(gens)}
    if mu is not None:
        out["valuesAtModule"] = [str(v) for v in evaluate_ideal(ring, gens, mu)]
    return out, params


def cmd_dg_verify(args):
    A, mu, params = _load(args, need_module=False)
    alpha = _alpha(args, mu)
    params["window"], params["dims"] = [alpha.p, alpha.q], list(alpha.dims)
    pres = build_dg_presentation(A, alpha)
    out = {"qSquaredZero": verify_q_squared(pres), "degreeOk": pres.degree_ok(),
           "generators": [{"name": n, "degree": d} for n, d in zip(pres.ring.names, pres.ring.degrees)],
           "qImages": [pres.ring.format(img) for img in pres.q_images]}
    if args.mutate is not None:
        if not 0 <= args.mutate < len(pres.q_images):
            raise UsageError(f"--mutate index out of range 0..{len(pres.q_images) - 1}")
        out["mutatedQSquaredZero"] = verify_q_squared(pres.mutated(args.mutate))
        params["mutate"] = args.mutate
    return out, params


def cmd_ext(args):
    A, mu, params = _load(args)
    params["augmented"] = not args.unaugmented
    rep = tangent_cohomology(mu, augmented=not args.unaugmented)
    return rep.to_dict(), params


def _stability_params(args):
    try:
        primes = tuple(_int_list(args.fields))
    except argparse.ArgumentTypeError as e:
        raise UsageError(str(e)) from None
    if not primes:
        raise UsageError("--fields needs at least one prime")
    return primes


def cmd_stability(args):
    A, mu, params = _load(args)
    primes = _stability_params(args)
    theta = _character(args.character, A, mu.alpha)
    params.update(character=args.character, weights=list(theta.weights), fields=list(primes),
                  mode=args.mode, budget=args.budget)
    v = stability.check_stability(mu, theta, primes, args.mode, args.budget)
    out = v.to_dict()
    if v.status is stability.Status.STABLE:
        out["generatedInLowestDegree"] = hilbert.is_generated_in_lowest_degree(mu)
    return out, params


def cmd_pipeline(args):
    A, mu, params = _load(args)
    primes = _stability_params(args)
    rep = hilbert.sheaf_stability_pipeline(mu, args.p_prime, args.top, primes, args.mode, args.budget)
    return rep.to_dict(), params


def cmd_hilbert(args):
    sub = args.hcmd
    if sub == "eval":
        h = hilbert.HilbertPolynomial(tuple(args.coeffs))
        return {"values": {str(t): h(t) for t in args.at}}, {"coeffs": args.coeffs, "at": args.at}
    if sub == "primitive":
        h = hilbert.HilbertPolynomial(tuple(args.coeffs))
        return {"primitive": hilbert.is_primitive(h)}, {"coeffs": args.coeffs}
    if sub == "macaulay":
        r = hilbert.macaulay_rep(args.a, args.t)
        terms = [{"m": m, "i": i} for m, i in zip(r.terms, range(args.t, 0, -1))]
        return {"terms": terms, "bound": hilbert.macaulay_bound(args.a, args.t)}, \
            {"a": args.a, "t": args.t}
    if sub == "gotzmann":
        return hilbert.gotzmann_check(args.values, args.p).to_dict(), {"values": args.values, "p": args.p}
    if sub == "extend":
        A, mu, params = _load(args)
        params["top"] = args.top
        return {"hilbertFunction": list(hilbert.extend_module(mu, args.top)),
                "start": mu.alpha.p}, params
    return cmd_pipeline(args)


def cmd_scan_mc(args):
    A, mu, params = _load(args, need_module=False)
    alpha = _alpha(args, mu)
    params.update(window=[alpha.p, alpha.q], dims=list(alpha.dims), budget=args.budget, orbits=args.orbits)
    params["l1Dim"] = LSpace(A, alpha, 1).dim
    return scan_mc(A, alpha, args.budget, args.orbits).to_dict(), params


# -- parser and driver -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mc-moduli", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"mc-moduli {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fixture", parents=[common], help="emit a built-in fixture as descriptors")
    p.add_argument("name", nargs="?", choices=list(fixtures.FIXTURES))
    p.add_argument("--list", action="store_true")
    p.add_argument("--field", default="Q")
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--out-dir", type=Path)
    p.set_defaults(fn=cmd_fixture)

    p = sub.add_parser("mc-check", parents=[common], help="is the point a module?")
    _add_source(p)
    p.set_defaults(fn=cmd_mc_check)

    p = sub.add_parser("ideal", parents=[common], help="MC ideal generators")
    _add_source(p, module=False)
    p.set_defaults(fn=cmd_ideal)

    p = sub.add_parser("dg-verify", parents=[common], help="build the dg presentation and check q^2 = 0")
    _add_source(p, module=False)
    p.add_argument("--mutate", type=int, help="also check a copy with q(x^k) perturbed")
    p.set_defaults(fn=cmd_dg_verify)

    p = sub.add_parser("ext", parents=[common], help="tangent cohomology at a module point")
    _add_source(p)
    p.add_argument("--unaugmented", action="store_true")
    p.set_defaults(fn=cmd_ext)

    def stab_flags(p):
        p.add_argument("--fields", default="2,3", help="comma-separated primes (default 2,3)")
        p.add_argument("--mode", choices=("exact-lift", "finite-field"), default="exact-lift")
        p.add_argument("--budget", type=int, default=stability.DEFAULT_BUDGET,
                       help="largest total dimension scanned exhaustively")

    p = sub.add_parser("stability", parents=[common], help="King theta-stability")
    _add_source(p)
    p.add_argument("--character", default="extremal")
    stab_flags(p)
    p.set_defaults(fn=cmd_stability)

    def pipeline_flags(p):
        _add_source(p)
        p.add_argument("--p-prime", type=int, required=True)
        p.add_argument("--top", type=int, required=True, help="extend the Hilbert function to degree D")
        stab_flags(p)

    p = sub.add_parser("pipeline", parents=[common], help="module-to-sheaf stability pipeline")
    pipeline_flags(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("hilbert", help="Hilbert polynomials, Macaulay and Gotzmann")
    hs = p.add_subparsers(dest="hcmd", required=True, parser_class=_Parser)
    q = hs.add_parser("eval", parents=[common])
    q.add_argument("--coeffs", type=_int_list, required=True, help="a_0,a_1,... of sum a_i C(t,i)")
    q.add_argument("--at", type=_int_list, required=True)
    q = hs.add_parser("primitive", parents=[common])
    q.add_argument("--coeffs", type=_int_list, required=True)
    q = hs.add_parser("macaulay", parents=[common])
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--t", type=int, required=True)
    q = hs.add_parser("gotzmann", parents=[common])
    q.add_argument("--values", type=_int_list, required=True)
    q.add_argument("--p", type=int, default=0)
    q = hs.add_parser("extend", parents=[common])
    _add_source(q)
    q.add_argument("--top", type=int, required=True)
    q = hs.add_parser("pipeline", parents=[common])
    pipeline_flags(q)
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("scan-mc", parents=[common], help="count MC points over a prime field")
    _add_source(p, module=False)
    p.add_argument("--budget", type=int, default=DEFAULT_POINT_BUDGET)
    p.add_argument("--orbits", action="store_true")
    p.set_defaults(fn=cmd_scan_mc)
    return ap


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    return json.dumps(v) if isinstance(v, (list, dict, bool)) or v is None else str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return "\n".join(_text(report)) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"mc-moduli: error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    command = args.command + (f" {args.hcmd}" if args.command == "hilbert" else "")
    try:
        result, params = args.fn(args)
    except (UsageError, io.DescriptorError) as e:
        print(f"mc-moduli: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, ZeroDivisionError) as e:
        print(f"mc-moduli: {command}: {e}", file=sys.stderr)
        return 1
    report = {"tool": "mc-moduli", "version": __version__, "command": command,
              "parameters": params, "result": result}
    if not args.no_timestamp:
        report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    text = render(report, args.format)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
