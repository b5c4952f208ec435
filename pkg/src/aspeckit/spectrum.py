"""Loci, topologies, localization rings and sections on a finite module universe.

Subsets of a universe are bitmasks: bit k stands for the k-th point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Callable, Hashable, Iterable, Sequence

from .errors import DomainError, NonFunctorialDiagram, NotSimpleSummand, PresentationMismatch
from .linalg import (Mat, SubalgebraBasis, Subspace, inverse, is_invertible, nullspace, product_closure,
                     rank)
from .modules import ModuleRep, checked, end_ring, is_isomorphic, is_simple
from .ncalgebra import NcPoly, Presentation
from .scalars import Field

log = logging.getLogger(__name__)

MAX_POINTS = 64


def bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask >> k:
        if mask >> k & 1:
            out.append(k)
        k += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for k in indices:
        m |= 1 << k
    return m


@dataclass(frozen=True)
class Universe:
    """An ordered finite set of modules over one presentation."""

    presentation: Presentation
    points: tuple

    @classmethod
    def of(cls, points: Sequence[ModuleRep], *, reject_duplicates: bool = True, cap: int = MAX_POINTS) -> "Universe":
        points = tuple(points)
        if not points:
            raise ValueError("empty universe")
        if len(points) > cap:
            raise ValueError(f"universe of {len(points)} points exceeds the cap of {cap}")
        pres = points[0].presentation
        names = set()
        for M in points:
            if M.presentation != pres:
                raise PresentationMismatch(f"{M.name} is over a different presentation")
            if M.name in names:
                raise ValueError(f"duplicate point name {M.name!r}")
            names.add(M.name)
            checked(M)
        if reject_duplicates:
            for a in range(len(points)):
                for b in range(a + 1, len(points)):
                    if is_isomorphic(points[a], points[b]).verdict == "yes":
                        raise DomainError(f"points {points[a].name} and {points[b].name} are isomorphic")
        return cls(pres, points)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def field(self) -> Field:
        return self.presentation.field

    def names(self) -> tuple:
        return tuple(M.name for M in self.points)

    def index(self, name: str) -> int:
        for k, M in enumerate(self.points):
            if M.name == name:
                return k
        raise KeyError(name)

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self.index(n) for n in names)

    def members(self, mask: int) -> list[str]:
        return [self.points[k].name for k in bits(mask)]

    def restrict(self, mask: int) -> "Universe":
        return Universe(self.presentation, tuple(self.points[k] for k in bits(mask)))


def d_locus(f: NcPoly, u: Universe) -> int:
    """Points on which f acts with zero kernel."""
    return mask_of(k for k, M in enumerate(u.points) if is_invertible(M.evaluate(f)))


def z_locus(gens: Sequence[NcPoly], u: Universe) -> int:
    """Points annihilated by every generator of the ideal."""
    return mask_of(k for k, M in enumerate(u.points) if all(M.evaluate(g).is_zero() for g in gens))


@dataclass(frozen=True)
class FiniteTopology:
    width: int
    opens: tuple  # sorted masks, including 0 and the full set

    @property
    def full(self) -> int:
        return (1 << self.width) - 1

    def is_open(self, mask: int) -> bool:
        return mask in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.opens)

    def closed_sets(self) -> list[int]:
        return sorted(self.full & ~o for o in self.opens)

    def opens_within(self, mask: int) -> list[int]:
        return [o for o in self.opens if o & ~mask == 0]


def _union_close(masks: Iterable[int]) -> set[int]:
    out = set(masks)
    frontier = list(out)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(out):
                c = a | b
                if c not in out:
                    out.add(c)
                    nxt.append(c)
        frontier = nxt
    return out


def topology_from_subbasis(masks: Iterable[int], width: int) -> FiniteTopology:
    """Topology generated by a family of subsets: finite intersections, then unions."""
    full = (1 << width) - 1
    basis = {full}
    for m in masks:
        basis |= {b & m for b in basis}
    opens = _union_close(basis) | {0, full}
    return FiniteTopology(width, tuple(sorted(opens)))


def generate_topology(subbasis: Sequence[NcPoly], u: Universe) -> FiniteTopology:
    return topology_from_subbasis((d_locus(f, u) for f in subbasis), u.size)


def closure(mask: int, t: FiniteTopology) -> int:
    """Smallest closed set containing ``mask``."""
    out = t.full
    for c in t.closed_sets():
        if mask & ~c == 0:
            out &= c
    return out


@dataclass(frozen=True)
class LocalRing:
    """A subalgebra of the block-diagonal matrices on a direct sum of modules."""

    modules: tuple
    sizes: tuple
    offsets: tuple
    algebra: SubalgebraBasis
    indices: tuple = ()
    warnings: tuple = ()
    inverse_rounds: int = 0
    inverses_enlarged: bool = False

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def field(self) -> Field:
        return self.algebra.field

    def is_zero_ring(self) -> bool:
        return not self.modules

    def block(self, m: Mat, k: int) -> Mat:
        o, s = self.offsets[k], self.sizes[k]
        return m.block(o, o, s, s)

    def elements(self) -> list[Mat]:
        return self.algebra.matrices()

    def block_diagonal_space(self) -> Subspace:
        vecs = []
        D = self.d
        for o, s in zip(self.offsets, self.sizes):
            for a in range(s):
                for b in range(s):
                    vecs.append(Mat.unit(o + a, o + b, D, self.field).flat())
        return Subspace.span(vecs, D * D, self.field)


def zero_ring(field: Field) -> LocalRing:
    return LocalRing((), (), (), SubalgebraBasis(0, Subspace.zero(0, field), True))


def _embed(m: Mat, offset: int, total: int) -> Mat:
    field = m.field
    blocks = []
    if offset:
        blocks.append(Mat.zeros(offset, offset, field))
    blocks.append(m)
    rest = total - offset - m.nrows
    if rest:
        blocks.append(Mat.zeros(rest, rest, field))
    return Mat.block_diag(blocks, field)


def localize(presentation: Presentation, modules: Sequence[ModuleRep], indices: Sequence[int] = (),
             *, max_rounds: int = 16) -> LocalRing:
    """The local function ring at the direct sum of ``modules``.

    Starts from the image of the algebra in the block-diagonal endomorphisms
    and adjoins inverses of elements lying in the sum of the endomorphism rings
    of the summands with every block nonzero, until the dimension is stable.
    """
    modules = list(modules)
    if not modules:
        return zero_ring(presentation.field)
    field = presentation.field
    warnings = []
    for M in modules:
        if M.presentation != presentation:
            raise PresentationMismatch(f"{M.name} is not a module over the given presentation")
        verdict = is_simple(M)
        if verdict.not_simple:
            raise NotSimpleSummand(f"{M.name} is not simple")
        if verdict.unknown:
            warnings.append(f"simplicity of {M.name} is undecided: {verdict.reason}")
            log.warning(warnings[-1])
    sizes = tuple(M.dim for M in modules)
    offsets = tuple(sum(sizes[:k]) for k in range(len(sizes)))
    D = sum(sizes)
    gens = [Mat.block_diag([M.action[g] for M in modules], field) for g in range(presentation.ngens)]
    B = product_closure(gens, include_identity=True, d=D, field=field)

    dm_vecs = []
    for M, o in zip(modules, offsets):
        for e in end_ring(M).matrices():
            dm_vecs.append(_embed(e, o, D).flat())
    dm = Subspace.span(dm_vecs, D * D, field)

    def all_blocks_nonzero(m: Mat) -> bool:
        return all(not m.block(o, o, s, s).is_zero() for o, s in zip(offsets, sizes))

    rounds = 0
    enlarged = False
    while rounds < max_rounds:
        rounds += 1
        common = B.basis.intersection(dm)
        mats = [Mat.from_flat(v, D, D, field) for v in common.basis]
        candidates = list(mats)
        if len(mats) > 1:
            total = mats[0]
            for m in mats[1:]:
                total = total + m
            candidates.append(total)
        new = []
        for s in candidates:
            if all_blocks_nonzero(s) and is_invertible(s):
                inv = inverse(s)
                if not B.contains(inv):
                    new.append(inv)
        if not new:
            break
        enlarged = True
        B = product_closure(B.matrices() + new, include_identity=True, d=D, field=field)
    return LocalRing(tuple(modules), sizes, offsets, B, tuple(indices), tuple(warnings), rounds, enlarged)


def sections(u: Universe, mask: int) -> LocalRing:
    """Sections over a subset: the local function ring at all of its points."""
    idx = bits(mask)
    if not idx:
        return zero_ring(u.field)
    return localize(u.presentation, [u.points[k] for k in idx], idx)


def restriction_map(source: LocalRing, target_indices: Sequence[int]) -> Callable[[Mat], Mat]:
    """Block projection from sections over U to sections over a subset of U."""
    pos = [source.indices.index(k) for k in target_indices]
    field = source.field

    def rho(m: Mat) -> Mat:
        if not pos:
            return Mat.zeros(0, 0, field)
        return Mat.block_diag([source.block(m, p) for p in pos], field)

    return rho


@dataclass
class SectionsDiagram:
    """Algebras indexed by a finite poset, with maps along ``src -> dst`` edges."""

    algebras: dict
    maps: dict = dc_field(default_factory=dict)  # (src, dst) -> callable on matrices
    coords: dict = dc_field(default_factory=dict)  # optional precomputed coordinate matrices per edge

    @property
    def nodes(self) -> list:
        return list(self.algebras)

    def coordinate_matrix(self, src: Hashable, dst: Hashable) -> list[tuple]:
        """Column k holds the coordinates of the image of basis element k of ``src``."""
        if (src, dst) in self.coords:
            return self.coords[(src, dst)]
        rho = self.maps[(src, dst)]
        target = self.algebras[dst]
        cols = []
        for b in self.algebras[src].matrices():
            img = rho(b)
            if not target.contains(img):
                raise NonFunctorialDiagram(f"map {src} -> {dst} leaves the target algebra")
            cols.append(target.coordinates(img))
        return cols

    def check(self):
        """Verify that every map is a unital ring map and that triangles commute."""
        for (src, dst), rho in self.maps.items():
            A, T = self.algebras[src], self.algebras[dst]
            mats = A.matrices()
            self.coordinate_matrix(src, dst)
            if A.d and T.d and rho(Mat.identity(A.d, A.field)) != Mat.identity(T.d, T.field):
                raise NonFunctorialDiagram(f"map {src} -> {dst} is not unital")
            for a in mats:
                for b in mats:
                    if rho(a @ b) != rho(a) @ rho(b):
                        raise NonFunctorialDiagram(f"map {src} -> {dst} is not multiplicative")
        for (a, b), f in self.maps.items():
            for (b2, c), g in self.maps.items():
                if b2 != b or (a, c) not in self.maps:
                    continue
                h = self.maps[(a, c)]
                for m in self.algebras[a].matrices():
                    if g(f(m)) != h(m):
                        raise NonFunctorialDiagram(f"maps {a} -> {b} -> {c} and {a} -> {c} differ")


@dataclass(frozen=True)
class LimitResult:
    nodes: tuple
    offsets: dict
    algebras: dict
    space: Subspace  # compatible tuples, in concatenated basis coordinates

    @property
    def dim(self) -> int:
        return self.space.dim

    def component(self, vec, node) -> Mat:
        A = self.algebras[node]
        o = self.offsets[node]
        return A.element(vec[o:o + A.dim])

    def projection_rank(self, node) -> int:
        A = self.algebras[node]
        if not self.space.basis or not A.dim:
            return 0
        o = self.offsets[node]
        return rank(Mat([v[o:o + A.dim] for v in self.space.basis], self.space.field, A.dim))

    def is_closed(self) -> bool:
        e = self.space.echelon()
        vecs = self.space.basis
        for x in vecs:
            for y in vecs:
                prod = []
                for node in self.nodes:
                    A = self.algebras[node]
                    if A.dim:
                        prod.extend(A.coordinates(self.component(x, node) @ self.component(y, node)))
                if any(e.reduce(prod)):
                    return False
        return True


def limit(diagram: SectionsDiagram, field: Field, *, check: bool = True) -> LimitResult:
    """Inverse limit: tuples of elements compatible along every map."""
    if check:
        diagram.check()
    nodes = tuple(diagram.nodes)
    offsets = {}
    total = 0
    for n in nodes:
        offsets[n] = total
        total += diagram.algebras[n].dim
    rows = []
    zero = field.zero
    for (src, dst) in diagram.maps:
        cols = diagram.coordinate_matrix(src, dst)
        T = diagram.algebras[dst]
        for r in range(T.dim):
            row = [zero] * total
            for k, col in enumerate(cols):
                row[offsets[src] + k] = col[r]
            row[offsets[dst] + r] = row[offsets[dst] + r] - field.one
            rows.append(row)
    if rows:
        space = nullspace(Mat(rows, field, total))
    else:
        space = Subspace.full(total, field)
    result = LimitResult(nodes, offsets, dict(diagram.algebras), space)
    if check and not result.is_closed():
        raise NonFunctorialDiagram("compatible tuples are not closed under multiplication")
    return result


class SectionsCache:
    """Memoized sections over subsets of one universe."""

    def __init__(self, u: Universe):
        self.u = u
        self._cache: dict[int, LocalRing] = {}
        self._maps: dict[tuple, Callable[[Mat], Mat]] = {}
        self._coords: dict[tuple, list] = {}

    def __call__(self, mask: int) -> LocalRing:
        if mask not in self._cache:
            self._cache[mask] = sections(self.u, mask)
        return self._cache[mask]

    def restriction(self, src: int, dst: int) -> Callable[[Mat], Mat]:
        """Block projection, verified once to be a unital ring map into the target sections."""
        if dst & ~src:
            raise ValueError("restriction target is not a subset")
        key = (src, dst)
        if key not in self._maps:
            rho = restriction_map(self(src), bits(dst))
            SectionsDiagram({src: self(src).algebra, dst: self(dst).algebra}, {key: rho}).check()
            self._maps[key] = rho
        return self._maps[key]

    def coordinates(self, src: int, dst: int) -> list[tuple]:
        """Coordinate columns of the restriction map on the section bases."""
        key = (src, dst)
        if key not in self._coords:
            rho = self.restriction(src, dst)
            self._coords[key] = SectionsDiagram({src: self(src).algebra, dst: self(dst).algebra},
                                                {key: rho}).coordinate_matrix(src, dst)
        return self._coords[key]


def open_diagram(u: Universe, masks: Sequence[int], cache: SectionsCache | None = None) -> SectionsDiagram:
    """The sections diagram on a family of subsets ordered by inclusion."""
    cache = cache or SectionsCache(u)
    masks = list(dict.fromkeys(masks))
    diagram = SectionsDiagram({m: cache(m).algebra for m in masks})
    for a in masks:
        for b in masks:
            if a != b and b & ~a == 0:
                diagram.maps[(a, b)] = cache.restriction(a, b)
                diagram.coords[(a, b)] = cache.coordinates(a, b)
    return diagram


@dataclass(frozen=True)
class SheafReport:
    identity: bool
    gluing: bool
    sections_dim: int
    compatible_dim: int
    image_dim: int
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.identity and self.gluing


def sheaf_check(u: Universe, t: FiniteTopology, U: int, cover: Sequence[int],
                cache: SectionsCache | None = None) -> SheafReport:
    """Identity and gluing axioms for sections over ``U`` and the given open cover."""
    cover = list(cover)
    for c in cover:
        if not t.is_open(c):
            raise ValueError(f"cover element {u.members(c)} is not open")
        if c & ~U:
            raise ValueError(f"cover element {u.members(c)} is not inside the open set")
    union = 0
    for c in cover:
        union |= c
    if union != U:
        raise ValueError("cover does not cover the open set")
    cache = cache or SectionsCache(u)
    field = u.field
    top = cache(U)

    algebras = {}
    maps = {}
    coords = {}
    targets = {}
    for k, c in enumerate(cover):
        algebras[("cover", k)] = cache(c).algebra
        targets[("cover", k)] = c
    for k in range(len(cover)):
        for l in range(k + 1, len(cover)):
            inter = cover[k] & cover[l]
            node = ("overlap", k, l)
            algebras[node] = cache(inter).algebra
            targets[node] = inter
            for j in (k, l):
                edge = (("cover", j), node)
                maps[edge] = cache.restriction(cover[j], inter)
                coords[edge] = cache.coordinates(cover[j], inter)
    # the maps were verified by the cache and compatible tuples of ring maps form a subalgebra
    diagram = SectionsDiagram(algebras, maps, coords)
    lim = limit(diagram, field, check=False)

    # restriction of global sections into the product, in limit coordinates
    columns = []
    for node in lim.nodes:
        if lim.algebras[node].dim:
            columns.append(cache.coordinates(U, targets[node]))
    images = [[x for cols in columns for x in cols[b]] for b in range(top.dim)]
    total = sum(A.dim for A in lim.algebras.values())
    image_rank = rank(Mat(images, field, total)) if images and total else 0
    if images and not all(lim.space.contains(v) for v in images):
        return SheafReport(False, False, top.dim, lim.dim, image_rank, "restricted sections are not compatible")
    identity = image_rank == top.dim
    gluing = image_rank == lim.dim
    witness = None
    if not identity:
        witness = f"restriction has a kernel of dimension {top.dim - image_rank}"
    elif not gluing:
        witness = f"{lim.dim - image_rank} independent compatible families do not glue"
    return SheafReport(identity, gluing, top.dim, lim.dim, image_rank, witness)


@dataclass(frozen=True)
class InducedSubscheme:
    parent: Universe
    keep: int
    universe: Universe | None  # None when nothing is kept
    topology: FiniteTopology

    def parent_indices(self) -> list[int]:
        return bits(self.keep)

    def sections(self, mask: int) -> LocalRing:
        if self.universe is None or not mask:
            return zero_ring(self.parent.field)
        return sections(self.universe, mask)

    def global_sections(self) -> LocalRing:
        return self.sections(self.topology.full)


def _compress(mask: int, kept: Sequence[int]) -> int:
    return mask_of(j for j, k in enumerate(kept) if mask >> k & 1)


def induced_subscheme(u: Universe, t: FiniteTopology, keep: int) -> InducedSubscheme:
    """Restrict the universe to ``keep`` with the subspace topology."""
    kept = bits(keep & u.full)
    opens = sorted({_compress(o & keep, kept) for o in t.opens} | {0, (1 << len(kept)) - 1})
    sub = u.restrict(keep) if kept else None
    return InducedSubscheme(u, keep & u.full, sub, FiniteTopology(len(kept), tuple(opens)))
