"""Ext^1 between finite-dimensional modules as derivations modulo inner derivations.

An extension 0 -> N -> E -> M -> 0 of right modules is given on E = M + N by
the block action ``[[X^M_g, D_g], [0, X^N_g]]``.  The family (D_g) defines a
module exactly when every relation evaluates to zero on the top-right block;
changing the splitting by Phi replaces D_g with ``D_g + Phi X^N_g - X^M_g Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InnerNotContained
from .linalg import Mat, Subspace, nullspace
from .modules import ModuleRep, _same_presentation


def _word_values(mod: ModuleRep, cache: dict, w: tuple) -> Mat:
    if w not in cache:
        cache[w] = _word_values(mod, cache, w[:-1]) @ mod.action[w[-1]] if w else Mat.identity(mod.dim, mod.field)
    return cache[w]


@dataclass(frozen=True)
class DerivationSpace:
    """Tuples (D_g) of d_M x d_N matrices, flattened generator by generator."""

    source: ModuleRep
    target: ModuleRep
    basis: Subspace

    @property
    def dim(self) -> int:
        return self.basis.dim

    def components(self, v) -> list[Mat]:
        return split_components(v, self.source, self.target)


def split_components(v, M: ModuleRep, N: ModuleRep) -> list[Mat]:
    block = M.dim * N.dim
    return [Mat.from_flat(v[g * block:(g + 1) * block], M.dim, N.dim, M.field)
            for g in range(M.presentation.ngens)]


def derivation_space(M: ModuleRep, N: ModuleRep) -> DerivationSpace:
    _same_presentation(M, N)
    pres = M.presentation
    field = M.field
    dm, dn = M.dim, N.dim
    block = dm * dn
    ncols = pres.ngens * block
    zero = field.zero
    mcache: dict = {}
    ncache: dict = {}
    rows = []
    for rel in pres.relations:
        # rel_rows[(a, b)] is the linear form giving entry (a, b) of the expanded relation
        rel_rows = [[zero] * ncols for _ in range(block)]
        for word, c in rel.sorted_terms():
            for j, g in enumerate(word):
                L = _word_values(M, mcache, word[:j])
                R = _word_values(N, ncache, word[j + 1:])
                base = g * block
                for a in range(dm):
                    for s in range(dm):
                        ls = L.data[a][s]
                        if not ls:
                            continue
                        cls_ = c * ls
                        for t in range(dn):
                            rrow = R.data[t]
                            col = base + s * dn + t
                            for b in range(dn):
                                r = rrow[b]
                                if r:
                                    row = rel_rows[a * dn + b]
                                    row[col] = row[col] + cls_ * r
        rows.extend(r for r in rel_rows if any(r))
    if not rows:
        basis = Subspace.full(ncols, field)
    else:
        basis = nullspace(Mat(rows, field, ncols))
    return DerivationSpace(M, N, basis)


def inner_space(M: ModuleRep, N: ModuleRep) -> Subspace:
    """Span of ``g -> Phi X^N_g - X^M_g Phi`` over all linear maps Phi."""
    _same_presentation(M, N)
    field = M.field
    dm, dn = M.dim, N.dim
    vecs = []
    for a in range(dm):
        for b in range(dn):
            phi = Mat.from_flat([field.one if k == a * dn + b else field.zero for k in range(dm * dn)],
                                dm, dn, field)
            vec = []
            for XM, XN in zip(M.action, N.action):
                vec.extend((phi @ XN - XM @ phi).flat())
            vecs.append(vec)
    return Subspace.span(vecs, M.presentation.ngens * dm * dn, field)


@dataclass(frozen=True)
class ExtResult:
    dim: int
    der_dim: int
    inner_dim: int
    representatives: tuple  # derivation vectors completing a basis of Inner to one of Der


def ext1(M: ModuleRep, N: ModuleRep) -> ExtResult:
    der = derivation_space(M, N)
    inner = inner_space(M, N)
    if not der.basis.contains_space(inner):
        raise InnerNotContained(f"inner derivations {M.name} -> {N.name} are not derivations")
    reps = der.basis.complement_basis(inner)
    return ExtResult(der.dim - inner.dim, der.dim, inner.dim, reps)


@dataclass(frozen=True)
class Quiver:
    nodes: tuple
    arrows: dict  # (i, j) -> dim Ext^1(node_i, node_j), zero weights omitted

    def to_dot(self) -> str:
        lines = ["digraph quiver {"]
        for name in self.nodes:
            lines.append(f'  "{name}";')
        for (i, j), w in sorted(self.arrows.items()):
            lines.append(f'  "{self.nodes[i]}" -> "{self.nodes[j]}" [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def quiver(universe) -> Quiver:
    mods = list(universe)
    arrows = {}
    for i, M in enumerate(mods):
        for j, N in enumerate(mods):
            w = ext1(M, N).dim
            if w:
                arrows[(i, j)] = w
    return Quiver(tuple(M.name for M in mods), arrows)
