"""Seeded module corpora shared by the acceptance and oracle tests."""

from __future__ import annotations

import random

from aspeckit.linalg import Mat
from aspeckit.modules import ModuleRep, companion_matrix, direct_sum, point_module
from aspeckit.ncalgebra import commutative_preset, free_algebra
from aspeckit.scalars import QQ


def _entry(rng, F, lo=-2, hi=2):
    if F.characteristic:
        return F(rng.randrange(F.characteristic))
    return F(rng.randint(lo, hi))


def random_matrix(rng, d, F, lo=-2, hi=2):
    return Mat([[_entry(rng, F, lo, hi) for _ in range(d)] for _ in range(d)], F)


def block_triangular(rng, mats, F):
    d = mats[0].nrows
    k = rng.randint(1, d - 1)
    return [Mat([[m.data[i][j] if not (i >= k and j < k) else F.zero for j in range(d)] for i in range(d)], F)
            for m in mats]


def random_module(rng, d, F, kind=None, name="M"):
    """A module of dimension d over F; the kind picks the algebra and the shape of the action."""
    kind = kind or rng.choice(["free", "free", "triangular", "companion", "sum", "sparse"])
    free = free_algebra(["x", "y"], F)
    if kind == "companion" or (kind == "sum" and d < 2):
        A = commutative_preset(1, F)
        return ModuleRep.from_matrices(A, [companion_matrix([_entry(rng, F) for _ in range(d)], F)], name)
    if kind == "triangular" and d > 1:
        return ModuleRep.from_matrices(free, block_triangular(rng, [random_matrix(rng, d, F) for _ in range(2)], F), name)
    if kind == "sum" and d > 1:
        k = rng.randint(1, d - 1)
        a = random_module(rng, k, F, "free")
        b = random_module(rng, d - k, F, "free")
        return direct_sum([a, b], name)
    if kind == "sparse":
        mats = []
        for _ in range(2):
            m = random_matrix(rng, d, F)
            mats.append(Mat([[x if rng.random() < 0.35 else F.zero for x in row] for row in m.data], F))
        return ModuleRep.from_matrices(free, mats, name)
    return ModuleRep.from_matrices(free, [random_matrix(rng, d, F) for _ in range(2)], name)


def rational_corpus(n=50, seed=7, max_dim=3):
    """Modules over QQ with rational relations, dimension at most max_dim."""
    rng = random.Random(seed)
    out = []
    kinds = ["free", "triangular", "companion", "sum", "sparse"]
    for k in range(n):
        d = rng.randint(1, max_dim)
        out.append(random_module(rng, d, QQ, kinds[k % len(kinds)], name=f"R{k}"))
    # regression pins: companion of x^2 + 1 and a commuting point
    out[0] = ModuleRep.from_matrices(commutative_preset(1, QQ), [companion_matrix([1, 0], QQ)], "R0")
    out[1] = point_module([3, -1], commutative_preset(2, QQ), "R1")
    return out


def finite_field_corpus(p, dims, per_dim, seed):
    rng = random.Random(seed * 1000 + p)
    kinds = ["free", "triangular", "companion", "sum", "sparse"]
    out = []
    for d in dims:
        for k in range(per_dim):
            out.append(random_module(rng, d, GF_cache(p), kinds[k % len(kinds)], name=f"F{p}_{d}_{k}"))
    return out


def GF_cache(p):
    from aspeckit.scalars import GF
    return GF(p)
