"""Free associative algebras, finite presentations and homomorphisms.

Polynomials are never rewritten modulo relations: whether ``p = 0`` holds in
a presented algebra is only ever asked of a concrete module, by evaluating.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .errors import CompositionMismatch, FieldMismatch, SizeMismatch
from .linalg import Mat
from .scalars import QQI, Field

Word = tuple  # tuple of generator indices; () is the unit monomial


def _word_key(w: Word):
    return (len(w), w)


class NcPoly:
    """A noncommutative polynomial: a finite map from words to nonzero scalars."""

    __slots__ = ("field", "gens", "terms")

    def __init__(self, field: Field, gens: Sequence[str], terms: Mapping[Word, object] | None = None):
        self.field = field
        self.gens = tuple(gens)
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if any(not 0 <= g < len(self.gens) for g in w):
                raise ValueError(f"word {w} uses an unknown generator index")
            c = field(c)
            if c:
                clean[w] = clean.get(w, field.zero) + c
                if not clean[w]:
                    del clean[w]
        self.terms = clean

    @classmethod
    def const(cls, c, field: Field, gens: Sequence[str]) -> "NcPoly":
        return cls(field, gens, {(): c})

    @classmethod
    def gen(cls, index: int, field: Field, gens: Sequence[str]) -> "NcPoly":
        return cls(field, gens, {(index,): 1})

    def _same(self, other: "NcPoly"):
        if self.field != other.field:
            raise FieldMismatch(f"polynomials over {self.field} and {other.field}")
        if self.gens != other.gens:
            raise FieldMismatch(f"polynomials over generators {self.gens} and {other.gens}")

    def _coerce(self, other):
        if isinstance(other, NcPoly):
            self._same(other)
            return other
        return NcPoly.const(other, self.field, self.gens)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, self.field.zero) + c
        return NcPoly(self.field, self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.field, self.gens, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        zero = self.field.zero
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                terms[w] = terms.get(w, zero) + c1 * c2
        return NcPoly(self.field, self.gens, terms)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = NcPoly.const(1, self.field, self.gens)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "NcPoly":
        c = self.field(c)
        return NcPoly(self.field, self.gens, {w: c * v for w, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def coefficient(self, word: Word):
        return self.terms.get(tuple(word), self.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def over(self, field: Field) -> "NcPoly":
        return NcPoly(field, self.gens, self.terms)

    def is_rational(self) -> bool:
        if self.field == QQI:
            return all(QQI.is_rational(c) for c in self.terms.values())
        return True

    def conjugate(self) -> "NcPoly":
        return NcPoly(self.field, self.gens, {w: self.field.conj(c) for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.field == other.field and self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.gens, frozenset(self.terms.items())))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"NcPoly({format_poly(self)!r}, {self.field})"


def _format_coeff(c, field: Field):
    """Split a coefficient into (sign, text-or-None); None means the coefficient is 1."""
    text = field.format(c)
    if field == QQI and c.re and c.im:
        return "+", f"({text})"
    if text.startswith("-"):
        text = text[1:]
        sign = "-"
    else:
        sign = "+"
    return sign, (None if text == "1" else text)


def format_poly(p: NcPoly) -> str:
    """Canonical text: length-lex term order, ``*`` between factors, no exponents."""
    if not p.terms:
        return "0"
    parts = []
    for w, c in p.sorted_terms():
        sign, coeff = _format_coeff(c, p.field)
        word = "*".join(p.gens[g] for g in w)
        if not word:
            body = coeff or "1"
        elif coeff is None:
            body = word
        else:
            body = f"{coeff}*{word}"
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


@dataclass(frozen=True)
class Presentation:
    """A finitely presented associative algebra ``field<gens> / (relations)``."""

    field: Field
    generators: tuple
    relations: tuple = dc_field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        if self.field == QQI and "i" in self.generators:
            raise ValueError("'i' is reserved for the imaginary unit over QQ(i)")
        for r in self.relations:
            if r.field != self.field or r.gens != self.generators:
                raise FieldMismatch(f"relation {r} does not match the presentation")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def gen(self, name_or_index) -> NcPoly:
        idx = name_or_index if isinstance(name_or_index, int) else self.generators.index(name_or_index)
        return NcPoly.gen(idx, self.field, self.generators)

    def gens(self) -> list[NcPoly]:
        return [self.gen(i) for i in range(self.ngens)]

    def const(self, c) -> NcPoly:
        return NcPoly.const(c, self.field, self.generators)

    def zero(self) -> NcPoly:
        return NcPoly(self.field, self.generators)

    def quotient(self, extra: Sequence[NcPoly]) -> "Presentation":
        """The presentation with ``extra`` appended to the relations."""
        return Presentation(self.field, self.generators, self.relations + tuple(extra))

    def over(self, field: Field) -> "Presentation":
        return Presentation(field, self.generators, tuple(r.over(field) for r in self.relations))

    def has_rational_relations(self) -> bool:
        return all(r.is_rational() for r in self.relations)


def free_algebra(names: Sequence[str], field: Field) -> Presentation:
    return Presentation(field, tuple(names))


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{k}" for k in range(1, n + 1)]


def commutative_preset(n: int, field: Field, names: Sequence[str] | None = None) -> Presentation:
    """The polynomial ring in ``n`` variables: all commutators as relations."""
    if n < 1:
        raise ValueError("need at least one variable")
    names = tuple(names) if names is not None else tuple(default_names(n))
    if len(names) != n:
        raise ValueError("wrong number of generator names")
    xs = [NcPoly.gen(k, field, names) for k in range(n)]
    rels = tuple(xs[a] * xs[b] - xs[b] * xs[a] for a in range(n) for b in range(a + 1, n))
    return Presentation(field, names, rels)


def eval_poly(p: NcPoly, assignment: Sequence[Mat] | Mapping[str, Mat], size: int | None = None) -> Mat:
    """Evaluate ``p`` by substituting square matrices for the generators.

    Words act in the order written, so ``x*y`` evaluates to ``X @ Y``.
    """
    if isinstance(assignment, Mapping):
        mats = [assignment[g] for g in p.gens]
    else:
        mats = list(assignment)
    if len(mats) != len(p.gens):
        raise SizeMismatch(f"{len(mats)} matrices for {len(p.gens)} generators")
    field = p.field
    if mats:
        d = mats[0].nrows
    elif size is not None:
        d = size
    else:
        raise SizeMismatch("matrix size unknown for an algebra without generators")
    for m in mats:
        if m.shape != (d, d):
            raise SizeMismatch(f"assignment of shape {m.shape}, expected {(d, d)}")
        if m.field != field:
            raise FieldMismatch(f"matrix over {m.field} for polynomial over {field}")
    cache: dict[Word, Mat] = {(): Mat.identity(d, field)}

    def word_value(w: Word) -> Mat:
        if w in cache:
            return cache[w]
        v = word_value(w[:-1]) @ mats[w[-1]]
        cache[w] = v
        return v

    out = Mat.zeros(d, d, field)
    for w, c in p.sorted_terms():
        out = out + word_value(w).scale(c)
    return out


@dataclass(frozen=True)
class AlgHom:
    """An algebra map given by the images of the source generators."""

    source: Presentation
    target: Presentation
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.ngens:
            raise ValueError(f"{len(self.images)} images for {self.source.ngens} generators")
        if self.source.field != self.target.field:
            raise FieldMismatch("source and target over different fields")
        for im in self.images:
            if im.field != self.target.field or im.gens != self.target.generators:
                raise FieldMismatch(f"image {im} is not a polynomial over the target")

    @classmethod
    def identity(cls, pres: Presentation) -> "AlgHom":
        return cls(pres, pres, tuple(pres.gens()))

    def image_of(self, name: str) -> NcPoly:
        return self.images[self.source.generators.index(name)]


def hom_apply(phi: AlgHom, p: NcPoly) -> NcPoly:
    """Substitute generator images into ``p`` and expand."""
    if p.field != phi.source.field:
        raise FieldMismatch(f"polynomial over {p.field}, homomorphism over {phi.source.field}")
    if p.gens != phi.source.generators:
        raise FieldMismatch("polynomial is not over the source generators")
    target = phi.target
    out = target.zero()
    powers: dict[Word, NcPoly] = {(): target.const(1)}

    def word_image(w: Word) -> NcPoly:
        if w not in powers:
            powers[w] = word_image(w[:-1]) * phi.images[w[-1]]
        return powers[w]

    for w, c in p.sorted_terms():
        out = out + word_image(w).scale(c)
    return out


def hom_compose(psi: AlgHom, phi: AlgHom) -> AlgHom:
    """``psi`` after ``phi``."""
    if phi.target != psi.source:
        raise CompositionMismatch("target of the first map is not the source of the second")
    return AlgHom(phi.source, psi.target, tuple(hom_apply(psi, im) for im in phi.images))

