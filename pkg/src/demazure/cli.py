"""Command-line interface.

Every command reads one JSON document (``--input PATH`` or standard input,
except where flags fully describe the input) and writes one report.  Reports
are deterministic: keys are sorted, collections are sorted and rationals are
rendered as ``"p/q"`` strings.

Exit codes: 0 success, 1 domain refusal, 2 malformed input.
"""

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .abelian import (
    AbelianGroup,
    DualVector,
    GroupElement,
    express_in_generators,
    subgroup_structure,
)
from .cone import Cone, hilbert_basis
from .derivation import (
    AlgebraElement,
    Derivation,
    HomogeneousDerivation,
    apply,
    decompose,
    exp_action,
    extract_lnd_pieces,
    fraction_str,
    is_locally_nilpotent,
    root_derivation,
)
from .errors import DomainError
from .monoid import AffineMonoid
from .roots import DemazureRoot, check_inclusion_in_saturation_roots, enumerate_roots
from .surface import (
    aut_generators_report,
    cone_from_normal_form,
    deletion_monoid,
    surface_normal_form,
    verify_root_equality,
)


class ParseError(Exception):
    """Malformed input; ``where`` locates the problem (``line:col`` or a JSON path)."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# -- input parsing ------------------------------------------------------------


def load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _int_list(value, path: str, length: Optional[int] = None) -> List[int]:
    if not isinstance(value, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in value
    ):
        raise ParseError(path, "expected a list of integers")
    if length is not None and len(value) != length:
        raise ParseError(path, f"expected {length} integers, got {len(value)}")
    return list(value)


def _require(doc: dict, key: str, path: str):
    if not isinstance(doc, dict):
        raise ParseError(path, "expected an object")
    if key not in doc:
        raise ParseError(path, f"missing key {key!r}")
    return doc[key]


def parse_group(doc, path: str = "$.group") -> AbelianGroup:
    rank = _require(doc, "rank", path)
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise ParseError(f"{path}.rank", "expected a non-negative integer")
    torsion = _int_list(doc.get("torsion", []), f"{path}.torsion")
    try:
        return AbelianGroup(rank, tuple(torsion))
    except DomainError as exc:
        raise ParseError(f"{path}.torsion", str(exc)) from None


def parse_element_doc(group: AbelianGroup, doc, path: str) -> GroupElement:
    if isinstance(doc, list):
        doc = {"free": doc}
    free = _int_list(_require(doc, "free", path), f"{path}.free", group.rank)
    torsion = _int_list(doc.get("torsion", []), f"{path}.torsion", len(group.torsion_orders))
    return group.element(free, torsion)


def element_doc(m: GroupElement) -> Dict[str, List[int]]:
    return {"free": list(m.free), "torsion": list(m.torsion)}


def parse_monoid(doc) -> AffineMonoid:
    if not isinstance(doc, dict):
        raise ParseError("$", "expected a monoid document object")
    group = parse_group(_require(doc, "group", "$"))
    gens_doc = _require(doc, "generators", "$")
    if not isinstance(gens_doc, list):
        raise ParseError("$.generators", "expected a list")
    gens = [parse_element_doc(group, g, f"$.generators[{i}]") for i, g in enumerate(gens_doc)]
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("$.name", "expected a string")
    return AffineMonoid(group, gens, name=name)


def monoid_doc(S: AffineMonoid) -> Dict[str, Any]:
    out = {
        "group": {"rank": S.group.rank, "torsion": list(S.group.torsion_orders)},
        "generators": [element_doc(g) for g in S.generators],
    }
    if S.name is not None:
        out["name"] = S.name
    return out


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(path, "expected a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ParseError(path, f"expected an integer or a 'p/q' string, got {value!r}")


def parse_polynomial(group: AbelianGroup, doc, path: str) -> AlgebraElement:
    if not isinstance(doc, list):
        raise ParseError(path, "expected a list of terms")
    terms: Dict[GroupElement, Fraction] = {}
    for i, term in enumerate(doc):
        p = f"{path}[{i}]"
        m = parse_element_doc(group, _require(term, "exponent", p), f"{p}.exponent")
        c = parse_rational(term.get("coefficient", 1), f"{p}.coefficient")
        terms[m] = terms.get(m, Fraction(0)) + c
    return AlgebraElement(group, terms)


def polynomial_doc(f: AlgebraElement) -> List[Dict[str, Any]]:
    return [{"exponent": element_doc(m), "coefficient": fraction_str(c)} for m, c in f.to_list()]


def parse_rays(value, path: str) -> List[List[int]]:
    if isinstance(value, str):
        try:
            value = [[int(x) for x in part.split(",")] for part in value.split(";") if part.strip()]
        except ValueError:
            raise ParseError(path, f"cannot read rays from {value!r}; use '1,0;1,2'") from None
    if not isinstance(value, list) or not value:
        raise ParseError(path, "expected a non-empty list of rays")
    rays = [_int_list(r, f"{path}[{i}]") for i, r in enumerate(value)]
    dim = len(rays[0])
    for i, r in enumerate(rays):
        if len(r) != dim:
            raise ParseError(f"{path}[{i}]", f"expected {dim} integers, got {len(r)}")
    return rays


# -- rendering -------------------------------------------------------------------


def root_doc(r: DemazureRoot) -> Dict[str, Any]:
    return {
        "alpha": element_doc(r.alpha),
        "ray": list(r.distinguished_ray.coords),
        "rays": [list(d.coords) for d in r.candidate_rays],
    }


def roots_by_ray_doc(roots: Sequence[DemazureRoot]) -> List[Dict[str, Any]]:
    groups: Dict[Tuple, List[GroupElement]] = {}
    for r in roots:
        for rho in r.candidate_rays:
            groups.setdefault(rho.coords, []).append(r.alpha)
    return [
        {"ray": list(k), "roots": [element_doc(a) for a in sorted(v, key=lambda a: a.key)]}
        for k, v in sorted(groups.items())
    ]


def derivation_doc(D: HomogeneousDerivation) -> Dict[str, Any]:
    return {
        "degree": element_doc(D.degree),
        "character": [fraction_str(c) for c in D.character.coords],
    }


def _digest(canonical) -> str:
    text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def make_report(command: str, arguments: dict, canonical_input, results: dict, warnings: List[str]):
    return {
        "command": command,
        "arguments": arguments,
        "input": canonical_input,
        "input_sha256": _digest(canonical_input),
        "results": results,
        "warnings": sorted(warnings),
    }


def _fmt_element(d: dict) -> str:
    free = ", ".join(map(str, d["free"]))
    if d["torsion"]:
        return f"({free}; {', '.join(map(str, d['torsion']))})"
    return f"({free})"


def _table_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"free", "torsion"}:
        return _fmt_element(v)
    if isinstance(v, list) and v and all(isinstance(x, dict) and set(x) == {"free", "torsion"} for x in v):
        return "{" + ", ".join(_fmt_element(x) for x in v) + "}"
    return json.dumps(v, sort_keys=True)


def render_table(report: dict) -> str:
    lines = [f"command: {report['command']}", f"input sha256: {report['input_sha256']}"]
    for key, value in sorted(report["arguments"].items()):
        lines.append(f"  {key}: {value}")

    def walk(prefix: str, value):
        if isinstance(value, dict) and not (set(value) == {"free", "torsion"}):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        elif isinstance(value, list) and value and all(isinstance(x, dict) and "ray" in x for x in value):
            for item in value:
                rest = {k: v for k, v in item.items() if k != "ray"}
                walk(f"{prefix}[ray {item['ray']}]", rest)
        else:
            lines.append(f"{prefix:<40} {_table_value(value)}")

    walk("", report["results"])
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------


def _completion_warning(S: AffineMonoid) -> List[str]:
    G = S.group
    zeros = (0,) * len(G.torsion_orders)
    basis = [G.element(tuple(int(i == j) for j in range(G.rank)), zeros) for i in range(G.rank)]
    if any(express_in_generators(G, S.generators, b) is None for b in basis + G.torsion_generators()):
        pres, _ = subgroup_structure(G, S.generators)
        return [
            f"the generators span a proper subgroup (isomorphic to {pres.group}) of {G}; "
            "dual monoid, saturation and roots are taken in the ambient group"
        ]
    return []


def cmd_info(doc) -> dict:
    S = parse_monoid(doc)
    warnings = _completion_warning(S)
    pres, _ = subgroup_structure(S.group, S.generators)
    results: Dict[str, Any] = {
        "group": str(S.group),
        "group_completion": str(pres.group),
        "pointed": S.is_pointed,
        "dual_pointed": S.dual_is_pointed,
        "dual_rays": [list(r.coords) for r in S.dual_rays],
        "units": [element_doc(u) for u in S.unit_subgroup],
    }
    try:
        results["saturation_generators"] = [element_doc(g) for g in S.saturation_generators()]
    except DomainError as exc:
        warnings.append(f"saturation generators unavailable: {exc}")
    return make_report("info", {}, monoid_doc(S), results, warnings)


def cmd_roots(doc, bound: int, method: str = "filtered") -> dict:
    S = parse_monoid(doc)
    warnings = _completion_warning(S)
    mine = enumerate_roots(S, bound, method=method)
    results: Dict[str, Any] = {"bound": bound, "roots": roots_by_ray_doc(mine)}
    try:
        report = check_inclusion_in_saturation_roots(S, bound)
        results["saturation_roots"] = roots_by_ray_doc(report.saturation_roots)
        results["inclusion"] = {
            "holds": report.holds,
            "equal": report.equal,
            "violations": [root_doc(r) for r in report.violations],
        }
    except DomainError as exc:
        warnings.append(f"inclusion check skipped: {exc}")
    return make_report("roots", {"bound": bound, "method": method}, monoid_doc(S), results, warnings)


def cmd_hilbert(rays: List[List[int]]) -> dict:
    C = Cone.generated_by(rays)
    H = hilbert_basis(C)
    results = {"cone_rays": [list(r) for r in C.rays], "hilbert_basis": [list(h) for h in H]}
    return make_report("hilbert", {}, {"rays": [list(r) for r in rays]}, results, [])


def _parse_derivation(S: AffineMonoid, spec, path: str = "$.derivation"):
    """Return ``(kind, object, canonical)``; kind is "homogeneous" or "images"."""
    if not isinstance(spec, dict):
        raise ParseError(path, "expected an object")
    if "root" in spec:
        rdoc = spec["root"]
        alpha = parse_element_doc(S.group, _require(rdoc, "alpha", f"{path}.root"), f"{path}.root.alpha")
        ray = _int_list(_require(rdoc, "ray", f"{path}.root"), f"{path}.root.ray", S.group.rank)
        if sum(a * b for a, b in zip(ray, alpha.free)) != -1:
            raise ParseError(f"{path}.root", "the ray must pair to -1 with alpha")
        D = root_derivation(DemazureRoot(alpha, DualVector(ray), (DualVector(ray),)), S)
        return "homogeneous", D, {"root": {"alpha": element_doc(alpha), "ray": ray}}
    if "degree" in spec:
        alpha = parse_element_doc(S.group, spec["degree"], f"{path}.degree")
        char = _require(spec, "character", path)
        if not isinstance(char, list) or len(char) != S.group.rank:
            raise ParseError(f"{path}.character", f"expected {S.group.rank} rationals")
        gamma = [parse_rational(c, f"{path}.character[{i}]") for i, c in enumerate(char)]
        D = HomogeneousDerivation(alpha, gamma, S)
        return "homogeneous", D, derivation_doc(D)
    if "images" in spec:
        imgs = spec["images"]
        if not isinstance(imgs, list):
            raise ParseError(f"{path}.images", "expected a list")
        table = {}
        for i, item in enumerate(imgs):
            p = f"{path}.images[{i}]"
            g = parse_element_doc(S.group, _require(item, "generator", p), f"{p}.generator")
            table[g] = parse_polynomial(S.group, _require(item, "image", p), f"{p}.image")
        canonical = {
            "images": [
                {"generator": element_doc(g), "image": polynomial_doc(table[g])}
                for g in sorted(table, key=lambda m: m.key)
            ]
        }
        return "images", table, canonical
    raise ParseError(path, "expected one of 'root', 'degree'/'character' or 'images'")


def cmd_derivation(doc, action: str) -> dict:
    S = parse_monoid(doc)
    kind, obj, canonical_spec = _parse_derivation(S, _require(doc, "derivation", "$"))
    canonical = dict(monoid_doc(S), derivation=canonical_spec)
    warnings: List[str] = []
    if kind == "images":
        D = decompose(S, obj)
    else:
        D = obj
    results: Dict[str, Any] = {}
    if action in ("apply", "exp"):
        f = parse_polynomial(S.group, _require(doc, "operand", "$"), "$.operand")
        canonical["operand"] = polynomial_doc(f)
        if action == "apply":
            results["image"] = polynomial_doc(apply(D, f))
        else:
            if isinstance(D, Derivation):
                if len(D.pieces) != 1:
                    raise DomainError("exp needs a homogeneous derivation (images give several pieces)")
                D = D.pieces[0]
            poly = exp_action(D, f)
            results["exp"] = [
                {"power": i, "coefficient": polynomial_doc(poly.coeffs[i])} for i in sorted(poly.coeffs)
            ]
    elif action == "decompose":
        pieces = D.pieces if isinstance(D, Derivation) else (D,)
        results["pieces"] = [derivation_doc(p) for p in pieces]
    elif action == "lnd-check":
        if isinstance(D, Derivation):
            results["pieces"] = [derivation_doc(p) for p in D.pieces]
            results["lnd_pieces"] = [derivation_doc(p) for p in extract_lnd_pieces(D)]
        else:
            v = is_locally_nilpotent(D)
            results["locally_nilpotent"] = v.locally_nilpotent
            if v.locally_nilpotent:
                results["scale"] = fraction_str(v.scale)
                results["root"] = root_doc(v.root)
            else:
                results["reason"] = v.reason
    return make_report("derivation", {"action": action}, canonical, results, warnings)


def cmd_surface(bound: int, d: Optional[int] = None, e: Optional[int] = None, rays=None) -> dict:
    if rays is None:
        sigma = cone_from_normal_form(d, e)
        canonical = {"d": d, "e": e}
    else:
        sigma = Cone.generated_by(rays)
        canonical = {"cone": [list(r) for r in rays]}
    nf = surface_normal_form(sigma)
    S = deletion_monoid(sigma)
    verdict = verify_root_equality(sigma, bound)
    aut = aut_generators_report(sigma, bound)
    results: Dict[str, Any] = {
        "normal_form": {"d": nf.d, "e": nf.e},
        "cone_rays": [list(r) for r in sigma.rays],
        "hilbert_basis": [list(h) for h in aut.hilbert_basis],
        "deletion_generators": [element_doc(g) for g in S.generators],
        "verdict": verdict.verdict,
        "affine_line_factor": verdict.affine_line_factor,
        "cone_roots": roots_by_ray_doc(verdict.sigma_roots),
        "monoid_roots": roots_by_ray_doc(verdict.monoid_roots),
        "lost_roots": [root_doc(r) for r in verdict.lost_roots],
        "witness": None,
        "aut_generators": {
            "torus_rank": aut.torus_rank,
            "root_actions": [
                {
                    "ray": list(rho),
                    "actions": [
                        {
                            "alpha": element_doc(a.root.alpha),
                            "comorphism": [
                                {"generator": list(h.free), "image": a.comorphism[h]}
                                for h in sorted(a.comorphism, key=lambda m: m.key)
                            ],
                        }
                        for a in acts
                    ],
                }
                for rho, acts in sorted(aut.actions.items())
            ],
        },
    }
    if verdict.witness_root is not None:
        results["witness"] = {
            "root": element_doc(verdict.witness_root.alpha),
            "ray": list(verdict.witness_root.distinguished_ray.coords),
            "generator": element_doc(verdict.witness_generator) if verdict.witness_generator else None,
        }
    return make_report("surface", {"bound": bound}, canonical, results, [])


# -- driver ------------------------------------------------------------------------


def _read_input(path: Optional[str]) -> Tuple[str, str]:
    if path is None or path == "-":
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise ParseError(path, f"cannot read input: {exc.strerror}") from None


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json", help="output format")
    common.add_argument("--input", metavar="PATH", help="input document (default: standard input)")

    parser = argparse.ArgumentParser(
        prog="demazure",
        description="Demazure roots, derivations and toric surfaces for cancellative monoids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="dual rays, units and saturation of a monoid")

    p = sub.add_parser("roots", parents=[common], help="roots of a monoid and of its saturation")
    p.add_argument("--bound", type=_non_negative, required=True, help="box radius for alpha")
    p.add_argument("--method", choices=("filtered", "exhaustive"), default="filtered")

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert basis of a cone")
    p.add_argument("--cone", help="rays as '1,0;1,2' (otherwise a {\"rays\": ...} document)")

    p = sub.add_parser("derivation", parents=[common], help="homogeneous derivations of k[S]")
    p.add_argument("action", choices=("apply", "exp", "decompose", "lnd-check"))

    p = sub.add_parser("surface", parents=[common], help="root-equality verdict for a toric surface")
    p.add_argument("--d", type=int, help="normal-form parameter d")
    p.add_argument("--e", type=int, help="normal-form parameter e")
    p.add_argument("--cone", help="rays as '0,1;2,-1'")
    p.add_argument("--bound", type=_non_negative, required=True, help="box radius for alpha")
    return parser


def run(args) -> dict:
    if args.command == "hilbert":
        if args.cone is not None:
            return cmd_hilbert(parse_rays(args.cone, "--cone"))
        text, source = _read_input(args.input)
        doc = load_json(text, source)
        return cmd_hilbert(parse_rays(_require(doc, "rays", "$"), "$.rays"))
    if args.command == "surface":
        if args.cone is not None:
            if args.d is not None or args.e is not None:
                raise ParseError("--cone", "give either --cone or --d/--e, not both")
            return cmd_surface(args.bound, rays=parse_rays(args.cone, "--cone"))
        if args.d is None or args.e is None:
            raise ParseError("--d/--e", "both --d and --e are required without --cone")
        try:
            cone_from_normal_form(args.d, args.e)
        except ValueError as exc:
            raise ParseError("--d/--e", str(exc)) from None
        return cmd_surface(args.bound, d=args.d, e=args.e)
    text, source = _read_input(args.input)
    doc = load_json(text, source)
    if args.command == "info":
        return cmd_info(doc)
    if args.command == "roots":
        return cmd_roots(doc, args.bound, args.method)
    if args.command == "derivation":
        return cmd_derivation(doc, args.action)
    raise AssertionError(args.command)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ParseError as exc:
        print(f"demazure: parse error at {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"demazure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.format == "table":
        print(render_table(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
