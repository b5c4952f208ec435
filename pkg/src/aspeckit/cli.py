"""Command line interface.

Exit codes: 0 success, 1 usage, 2 parse error, 3 validation or mathematical
domain error, 4 an undecided verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import basechange, ext, modules, spectrum
from .document import InputDocument, load_document, parse_document
from .errors import DomainError, InputError
from .linalg import Mat
from .ncalgebra import format_poly
from .parsing import parse_expr

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    command: str
    args: list
    payload: dict
    exit_code: int = EXIT_OK
    dot: str | None = None

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "args": self.args, "result": self.payload},
                          indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command} {' '.join(self.args)}".rstrip()]
        _render(self.payload, lines, 0)
        return "\n".join(lines) + "\n"


def _render(value, lines, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                _render(v, lines, depth + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item and not _is_flat(item):
                lines.append(f"{pad}-")
                _render(item, lines, depth + 1)
            else:
                lines.append(f"{pad}- {_inline(item)}")


def _is_flat(v) -> bool:
    """Lists nested only in lists print on one line."""
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, dict) and (not isinstance(x, list) or _is_flat(x)) for x in v)


def _inline(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict) and not v:
        return "{}"
    return str(v)


def _mat(m: Mat):
    return m.to_strings()


def _vec(v, field):
    return [field.format(x) for x in v]


def _module_payload(M: modules.ModuleRep) -> dict:
    return {
        "name": M.name,
        "field": M.field.name,
        "generators": list(M.presentation.generators),
        "relations": [format_poly(r) for r in M.presentation.relations],
        "dim": M.dim,
        "action": {g: _mat(X) for g, X in zip(M.presentation.generators, M.action)},
    }


def _local_ring_payload(R: spectrum.LocalRing) -> dict:
    return {
        "modules": [M.name for M in R.modules],
        "dim": R.dim,
        "basis": [_mat(m) for m in R.elements()],
        "warnings": list(R.warnings),
        "inverse_rounds": R.inverse_rounds,
        "inverses_enlarged": R.inverses_enlarged,
    }


def _verdict_payload(v: modules.SimplicityVerdict, field) -> dict:
    return {
        "status": v.status.value,
        "certificate": v.certificate,
        "witness": [_vec(b, field) for b in v.witness.basis] if v.witness is not None else None,
        "reason": v.reason,
        "layer": v.layer,
    }


class _Session:
    def __init__(self, doc: InputDocument):
        self.doc = doc
        self._universe = None
        self._topology = None

    def module(self, name) -> modules.ModuleRep:
        if name not in self.doc.modules:
            raise UsageError(f"unknown module {name!r}")
        return self.doc.modules[name]

    @property
    def universe(self) -> spectrum.Universe:
        if self._universe is None:
            if not self.doc.universe:
                raise UsageError("the document has an empty universe")
            self._universe = spectrum.Universe.of([self.doc.modules[n] for n in self.doc.universe])
        return self._universe

    @property
    def topology(self) -> spectrum.FiniteTopology:
        if self._topology is None:
            self._topology = spectrum.generate_topology(self.doc.subbasis, self.universe)
        return self._topology

    def open_spec(self, spec: str) -> int:
        if spec in ("-", "empty", "{}"):
            return 0
        if spec == "all":
            return self.universe.full
        names = [n for n in spec.split(",") if n]
        for n in names:
            if n not in self.doc.universe:
                raise UsageError(f"{n!r} is not a universe point")
        return self.universe.mask(names)

    def names(self, mask: int) -> list:
        return self.universe.members(mask)


def _cmd_validate(s: _Session, a):
    report = {}
    bad = False
    for name, M in s.doc.modules.items():
        v = [format_poly(r) for r in modules.validate(M)]
        report[name] = {"ok": not v, "violations": v}
        bad = bad or bool(v)
    return {"modules": report, "ok": not bad}, (EXIT_DOMAIN if bad else EXIT_OK)


def _cmd_simple(s: _Session, a):
    M = s.module(a.module)
    v = modules.is_simple(M)
    payload = {"module": M.name, **_verdict_payload(v, M.field)}
    return payload, (EXIT_UNKNOWN if v.unknown and a.strict else EXIT_OK)


def _cmd_hom(s: _Session, a):
    M, N = s.module(a.source), s.module(a.target)
    basis = modules.hom_matrices(M, N)
    return {"source": M.name, "target": N.name, "dim": len(basis), "basis": [_mat(b) for b in basis]}, EXIT_OK


def _cmd_iso(s: _Session, a):
    M, N = s.module(a.source), s.module(a.target)
    r = modules.is_isomorphic(M, N)
    payload = {"source": M.name, "target": N.name, "verdict": r.verdict,
               "witness": _mat(r.witness) if r.witness is not None else None}
    return payload, (EXIT_UNKNOWN if r.verdict == "unknown" and a.strict else EXIT_OK)


def _cmd_ext(s: _Session, a):
    M, N = s.module(a.source), s.module(a.target)
    r = ext.ext1(M, N)
    reps = [{g: _mat(D) for g, D in zip(M.presentation.generators, ext.split_components(v, M, N))}
            for v in r.representatives]
    return {"source": M.name, "target": N.name, "dim": r.dim, "der_dim": r.der_dim,
            "inner_dim": r.inner_dim, "representatives": reps}, EXIT_OK


def _cmd_quiver(s: _Session, a):
    q = ext.quiver(s.universe.points)
    payload = {"nodes": list(q.nodes),
               "arrows": [{"source": q.nodes[i], "target": q.nodes[j], "weight": w}
                          for (i, j), w in sorted(q.arrows.items())]}
    return payload, EXIT_OK, q.to_dot()


def _bitstring(mask: int, width: int) -> str:
    return "".join("1" if mask >> k & 1 else "0" for k in range(width))


def _cmd_dlocus(s: _Session, a):
    f = parse_expr(a.expr, s.doc.algebra)
    m = spectrum.d_locus(f, s.universe)
    return {"expr": format_poly(f), "points": s.names(m), "bits": _bitstring(m, s.universe.size)}, EXIT_OK


def _cmd_zlocus(s: _Session, a):
    if a.ideal in s.doc.ideals:
        gens = s.doc.ideals[a.ideal]
    else:
        gens = [parse_expr(e, s.doc.algebra) for e in a.ideal.split(",")]
    m = spectrum.z_locus(gens, s.universe)
    return {"ideal": [format_poly(g) for g in gens], "points": s.names(m),
            "bits": _bitstring(m, s.universe.size)}, EXIT_OK


def _topology_dot(s: _Session, t: spectrum.FiniteTopology, names) -> str:
    def label(o):
        return "{" + ",".join(names[k] for k in spectrum.bits(o)) + "}"

    lines = ["digraph topology {"]
    for o in t.opens:
        lines.append(f'  "{label(o)}";')
    for o in t.opens:
        for p in t.opens:
            if p != o and p & ~o == 0:
                between = any(q not in (o, p) and p & ~q == 0 and q & ~o == 0 for q in t.opens)
                if not between:
                    lines.append(f'  "{label(o)}" -> "{label(p)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_topology(s: _Session, a):
    t = s.topology
    payload = {"subbasis": [format_poly(f) for f in s.doc.subbasis],
               "opens": [s.names(o) for o in t.opens], "count": len(t.opens)}
    return payload, EXIT_OK, _topology_dot(s, t, s.universe.names())


def _cmd_closure(s: _Session, a):
    m = s.open_spec(",".join(a.names))
    c = spectrum.closure(m, s.topology)
    return {"points": s.names(m), "closure": s.names(c)}, EXIT_OK


def _cmd_localize(s: _Session, a):
    mods = [s.module(n) for n in a.modules]
    R = spectrum.localize(s.doc.algebra, mods)
    payload = _local_ring_payload(R)
    return payload, (EXIT_UNKNOWN if R.warnings and a.strict else EXIT_OK)


def _cmd_sections(s: _Session, a):
    m = s.open_spec(a.open)
    R = spectrum.sections(s.universe, m)
    payload = {"open": s.names(m), "is_open": s.topology.is_open(m), **_local_ring_payload(R)}
    return payload, (EXIT_UNKNOWN if R.warnings and a.strict else EXIT_OK)


def _cmd_limit(s: _Session, a):
    masks = list(dict.fromkeys(s.open_spec(p) for p in a.diagram.split(";")))
    diagram = spectrum.open_diagram(s.universe, masks)
    lim = spectrum.limit(diagram, s.universe.field)
    tops = [m for m in masks if all(o & ~m == 0 for o in masks)]
    payload = {"nodes": [s.names(m) for m in masks], "dim": lim.dim,
               "node_dims": [diagram.algebras[m].dim for m in masks],
               "top": s.names(tops[0]) if tops else None,
               "top_projection_rank": lim.projection_rank(tops[0]) if tops else None}
    return payload, EXIT_OK


def _cmd_sheafcheck(s: _Session, a):
    U = s.open_spec(a.open)
    t = s.topology
    if not t.is_open(U):
        raise UsageError(f"{s.names(U)} is not open")
    if a.cover:
        cover = [s.open_spec(c) for c in a.cover]
    else:
        proper = [o for o in t.opens_within(U) if o != U]
        union = 0
        for o in proper:
            union |= o
        cover = proper if union == U and proper else [U]
    r = spectrum.sheaf_check(s.universe, t, U, cover)
    payload = {"open": s.names(U), "cover": [s.names(c) for c in cover], "identity": r.identity,
               "gluing": r.gluing, "ok": r.ok, "sections_dim": r.sections_dim,
               "compatible_dim": r.compatible_dim, "image_dim": r.image_dim, "witness": r.witness}
    return payload, EXIT_OK


def _subscheme_payload(s: _Session, sub: spectrum.InducedSubscheme) -> dict:
    names = [s.universe.points[k].name for k in sub.parent_indices()]
    opens = [[names[k] for k in spectrum.bits(o)] for o in sub.topology.opens]
    return {"points": names, "opens": opens, "global_sections_dim": sub.global_sections().dim}


def _cmd_restrict(s: _Session, a):
    keep = s.open_spec(",".join(a.names))
    sub = spectrum.induced_subscheme(s.universe, s.topology, keep)
    return _subscheme_payload(s, sub), EXIT_OK


def _cmd_contract(s: _Session, a):
    if a.hom not in s.doc.homs:
        raise UsageError(f"unknown homomorphism {a.hom!r}")
    M = basechange.contract_along(s.doc.homs[a.hom], s.module(a.module))
    return _module_payload(M), EXIT_OK


def _cmd_complexify(s: _Session, a):
    return _module_payload(basechange.extend_scalars(s.module(a.module))), EXIT_OK


def _cmd_realify(s: _Session, a):
    return _module_payload(basechange.restrict_scalars(s.module(a.module))), EXIT_OK


def _cmd_conj(s: _Session, a):
    return _module_payload(basechange.conj_module(s.module(a.module))), EXIT_OK


def _cmd_kpoints(s: _Session, a):
    res = basechange.k_points_subscheme(s.universe, s.topology)
    payload = _subscheme_payload(s, res.subscheme)
    payload["verdicts"] = {name: {"k_point": kp, "base_simple": bs} for name, (kp, bs) in res.verdicts.items()}
    unknown = any(kp == "unknown" or bs == "unknown" for kp, bs in res.verdicts.values())
    return payload, (EXIT_UNKNOWN if unknown and a.strict else EXIT_OK)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--input", "-i", default=argparse.SUPPRESS, help="input document (JSON); '-' for stdin")
    p.add_argument("--format", "-f", choices=["text", "json", "dot"], default=argparse.SUPPRESS)
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="exit with code 4 when a verdict is undecided")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aspec", description="Exact computations with modules, Ext, and finite spectra.")
    parser.add_argument("--input", "-i", default=None, help="input document (JSON); '-' for stdin")
    parser.add_argument("--format", "-f", choices=["text", "json", "dot"], default="text")
    parser.add_argument("--strict", action="store_true", default=False,
                        help="exit with code 4 when a verdict is undecided")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, *args, help=None):
        p = sub.add_parser(name, help=help)
        for arg, kw in args:
            p.add_argument(arg, **kw)
        _common(p)
        p.set_defaults(func=func, positionals=[arg for arg, _ in args])
        return p

    one = ("module", {})
    pair = [("source", {}), ("target", {})]
    add("validate", _cmd_validate, help="check every module against the relations")
    add("simple", _cmd_simple, one, help="simplicity verdict with certificate or witness")
    add("hom", _cmd_hom, *pair, help="basis of Hom(M, N)")
    add("iso", _cmd_iso, *pair, help="isomorphism test with witness")
    add("ext", _cmd_ext, *pair, help="dimension of Ext^1(M, N)")
    add("quiver", _cmd_quiver, help="Ext quiver of the universe")
    add("dlocus", _cmd_dlocus, ("expr", {}), help="points where an element acts invertibly")
    add("zlocus", _cmd_zlocus, ("ideal", {}), help="points annihilated by an ideal")
    add("topology", _cmd_topology, help="topology generated by the sub-basis")
    add("closure", _cmd_closure, ("names", {"nargs": "*"}), help="closure of a set of points")
    add("localize", _cmd_localize, ("modules", {"nargs": "+"}), help="local function ring at a sum of modules")
    add("sections", _cmd_sections, ("open", {}), help="sections over a set of points")
    add("limit", _cmd_limit, ("diagram", {}), help="inverse limit over ';'-separated point sets")
    p = add("sheafcheck", _cmd_sheafcheck, ("open", {}), help="sheaf axioms for an open set")
    p.add_argument("--cover", nargs="+", default=None)
    add("restrict", _cmd_restrict, ("names", {"nargs": "*"}), help="induced subscheme on the given points")
    add("contract", _cmd_contract, ("hom", {}), one, help="contract a module along a homomorphism")
    add("complexify", _cmd_complexify, one, help="extend scalars from QQ to QQ(i)")
    add("realify", _cmd_realify, one, help="restrict scalars from QQ(i) to QQ")
    add("conj", _cmd_conj, one, help="conjugate module")
    add("kpoints", _cmd_kpoints, help="subscheme of rational points")
    return parser


DOT_COMMANDS = {"quiver", "topology"}


def run_command(doc: InputDocument, args: argparse.Namespace) -> CommandResult:
    """Dispatch one parsed command against a loaded document."""
    session = _Session(doc)
    out = args.func(session, args)
    payload, code = out[0], out[1]
    dot = out[2] if len(out) > 2 else None
    argv = []
    for key in args.positionals:
        value = getattr(args, key)
        argv.extend(value if isinstance(value, list) else [value])
    return CommandResult(args.command, argv, payload, code, dot)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        if args.input is None:
            raise UsageError("--input is required")
        if args.format == "dot" and args.command not in DOT_COMMANDS:
            raise UsageError(f"--format dot is only available for {', '.join(sorted(DOT_COMMANDS))}")
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        check = args.command != "validate"
        if args.input == "-":
            doc = parse_document(sys.stdin.read(), check=check)
        else:
            doc = load_document(args.input, check=check)
        result = run_command(doc, args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "json":
        sys.stdout.write(result.to_json())
    elif args.format == "dot":
        sys.stdout.write(result.dot)
    else:
        sys.stdout.write(result.to_text())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
