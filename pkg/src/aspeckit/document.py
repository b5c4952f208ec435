"""The JSON input document.

Example::

    {
      "field": "QQ",
      "algebra": {"generators": ["x", "y"], "commutative": true, "relations": []},
      "modules": {"M00": {"x": [["0"]], "y": [["0"]]}},
      "homs": {"phi": {"source": {"generators": ["u"]}, "images": {"u": "x^2"}}},
      "universe": ["M00"],
      "subbasis": ["x", "x - 1"],
      "ideals": {"a": ["x*(x - 1)"]}
    }

Matrix entries are scalar literals (strings such as ``"1/2+3/4*i"``; plain
integers are accepted too).  Homomorphisms map their own ``source`` algebra
into the document algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .errors import DocumentError, InputError, ValidationError
from .linalg import Mat
from .modules import ModuleRep, validate
from .ncalgebra import AlgHom, NcPoly, Presentation, commutative_preset
from .parsing import parse_expr, parse_scalar
from .scalars import Field, field_from_name


@dataclass
class InputDocument:
    field: Field
    algebra: Presentation
    modules: dict = dc_field(default_factory=dict)
    homs: dict = dc_field(default_factory=dict)
    universe: tuple = ()
    subbasis: tuple = ()
    ideals: dict = dc_field(default_factory=dict)

    def module(self, name: str) -> ModuleRep:
        try:
            return self.modules[name]
        except KeyError:
            raise KeyError(f"unknown module {name!r}") from None


def _expect(cond, message):
    if not cond:
        raise DocumentError(message)


def _algebra(spec, field: Field, where: str) -> Presentation:
    _expect(isinstance(spec, dict), f"{where}: expected an object")
    gens = spec.get("generators")
    _expect(isinstance(gens, list) and all(isinstance(g, str) for g in gens),
            f"{where}: 'generators' must be a list of names")
    try:
        if spec.get("commutative", False):
            pres = commutative_preset(len(gens), field, gens)
        else:
            pres = Presentation(field, tuple(gens))
    except ValueError as e:
        raise DocumentError(f"{where}: {e}") from None
    rels = spec.get("relations", [])
    _expect(isinstance(rels, list), f"{where}: 'relations' must be a list")
    extra = [_expr(r, pres, f"{where} relation") for r in rels]
    return pres.quotient(extra)


def _expr(text, pres: Presentation, where: str) -> NcPoly:
    _expect(isinstance(text, str), f"{where}: expected an expression string")
    try:
        return parse_expr(text, pres)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from None


def _matrix(rows, field: Field, where: str) -> Mat:
    _expect(isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows),
            f"{where}: expected a nonempty list of rows")
    n = len(rows)
    _expect(all(len(r) == n for r in rows), f"{where}: matrix must be square")
    try:
        return Mat([[parse_scalar(x, field) for x in r] for r in rows], field)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from None


def _resolve(name, table, where):
    _expect(isinstance(name, str), f"{where}: expected a name")
    if name not in table:
        raise DocumentError(f"{where}: unresolved name {name!r}")
    return name


def parse_document(text: str, *, check: bool = True) -> InputDocument:
    """Parse and resolve a document; with ``check`` every module must satisfy the relations."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}") from None
    _expect(isinstance(raw, dict), "document must be a JSON object")
    _expect("field" in raw and isinstance(raw["field"], str), "missing 'field'")
    try:
        field = field_from_name(raw["field"])
    except ValueError as e:
        raise DocumentError(str(e)) from None
    _expect("algebra" in raw, "missing 'algebra'")
    pres = _algebra(raw["algebra"], field, "algebra")

    modules = {}
    mods_raw = raw.get("modules", {})
    _expect(isinstance(mods_raw, dict), "'modules' must be an object")
    for name, spec in mods_raw.items():
        _expect(isinstance(spec, dict), f"module {name}: expected an object of action matrices")
        for g in spec:
            _expect(g in pres.generators, f"module {name}: unknown generator {g!r}")
        for g in pres.generators:
            _expect(g in spec, f"module {name}: missing action of {g!r}")
        mats = [_matrix(spec[g], field, f"module {name}, generator {g}") for g in pres.generators]
        _expect(len({m.nrows for m in mats}) <= 1, f"module {name}: action matrices differ in size")
        _expect(mats, f"module {name}: the algebra has no generators")
        modules[name] = ModuleRep(name, pres, mats[0].nrows, tuple(mats))

    homs = {}
    homs_raw = raw.get("homs", {})
    _expect(isinstance(homs_raw, dict), "'homs' must be an object")
    for name, spec in homs_raw.items():
        _expect(isinstance(spec, dict) and "source" in spec and "images" in spec,
                f"hom {name}: needs 'source' and 'images'")
        src = _algebra(spec["source"], field, f"hom {name} source")
        images = spec["images"]
        _expect(isinstance(images, dict) and set(images) == set(src.generators),
                f"hom {name}: 'images' must give one expression per source generator")
        homs[name] = AlgHom(src, pres, tuple(_expr(images[g], pres, f"hom {name} image of {g}")
                                             for g in src.generators))

    universe = raw.get("universe", list(modules))
    _expect(isinstance(universe, list), "'universe' must be a list")
    universe = tuple(_resolve(n, modules, "universe") for n in universe)
    _expect(len(set(universe)) == len(universe), "universe lists a module twice")

    subbasis = raw.get("subbasis", [])
    _expect(isinstance(subbasis, list), "'subbasis' must be a list")
    subbasis = tuple(_expr(s, pres, "subbasis") for s in subbasis)

    ideals = {}
    ideals_raw = raw.get("ideals", {})
    _expect(isinstance(ideals_raw, dict), "'ideals' must be an object")
    for name, gens in ideals_raw.items():
        _expect(isinstance(gens, list), f"ideal {name}: expected a list of expressions")
        ideals[name] = tuple(_expr(g, pres, f"ideal {name}") for g in gens)

    doc = InputDocument(field, pres, modules, homs, universe, subbasis, ideals)
    if check:
        failures = {name: [str(r) for r in validate(M)] for name, M in modules.items()}
        failures = {k: v for k, v in failures.items() if v}
        if failures:
            detail = "; ".join(f"{k} violates {', '.join(v)}" for k, v in failures.items())
            raise ValidationError(f"invalid modules: {detail}", failures)
    return doc


def load_document(path: str, *, check: bool = True) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}") from None
    return parse_document(text, check=check)
