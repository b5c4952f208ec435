import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from aspeckit.errors import PresentationMismatch
from aspeckit.ext import derivation_space, ext1, inner_space, quiver
from aspeckit.linalg import Mat
from aspeckit.modules import ModuleRep, point_module
from aspeckit.ncalgebra import commutative_preset, free_algebra
from aspeckit.scalars import QQ

QXY = commutative_preset(2, QQ)
FREE = free_algebra(["x", "y"], QQ)
QX = commutative_preset(1, QQ)


def pts(pres, *coords):
    return [point_module(list(c), pres) for c in coords]


def test_derivation_space_examples():
    P00, P10 = pts(QXY, (0, 0), (1, 0))
    assert derivation_space(P00, P00).dim == 2
    assert derivation_space(P00, P10).dim == 1
    F00, F10 = pts(FREE, (0, 0), (1, 0))
    assert derivation_space(F00, F10).dim == 2


def test_derivation_space_for_distinct_points_kills_y_component():
    P00, P10 = pts(QXY, (0, 0), (1, 0))
    der = derivation_space(P00, P10)
    # the commutator forces D_y = 0
    for v in der.basis.basis:
        Dx, Dy = der.components(v)
        assert Dy.is_zero()


def test_inner_space_examples():
    P00, P10 = pts(QXY, (0, 0), (1, 0))
    assert inner_space(P00, P00).dim == 0
    assert inner_space(P00, P10).dim == 1
    J = ModuleRep.from_matrices(QX, [Mat([[QQ(0), QQ(1)], [QQ(0), QQ(0)]], QQ)], "J")
    # ad map Phi -> Phi X - X Phi on 2x2 matrices, as a sympy matrix acting on flattened Phi
    X = sympy.Matrix([[0, 1], [0, 0]])
    cols = []
    for k in range(4):
        E = sympy.zeros(2, 2)
        E[k // 2, k % 2] = 1
        cols.append(list(E * X - X * E))
    assert inner_space(J, J).dim == sympy.Matrix(cols).T.rank() == 2


def test_ext_examples():
    P00, P10 = pts(QXY, (0, 0), (1, 0))
    assert ext1(P00, P00).dim == 2
    assert ext1(P00, P10).dim == 0
    F00, F10 = pts(FREE, (0, 0), (1, 0))
    r = ext1(F00, F10)
    assert (r.dim, r.der_dim, r.inner_dim) == (1, 2, 1)
    assert len(r.representatives) == 1


def test_presentation_mismatch():
    with pytest.raises(PresentationMismatch):
        ext1(pts(QXY, (0, 0))[0], pts(FREE, (0, 0))[0])


def test_quiver_examples():
    q = quiver(pts(QXY, (0, 0), (1, 0)))
    assert q.arrows == {(0, 0): 2, (1, 1): 2}
    q = quiver(pts(FREE, (0, 0), (1, 0)))
    assert q.arrows == {(0, 0): 2, (1, 1): 2, (0, 1): 1, (1, 0): 1}
    q = quiver(pts(QX, (4,)))
    assert q.arrows == {(0, 0): 1}
    dot = quiver(pts(QXY, (0, 0), (1, 0))).to_dot()
    assert dot.startswith("digraph quiver {") and dot.count('[label="2"]') == 2


def test_jordan_self_extensions():
    J = ModuleRep.from_matrices(QX, [Mat([[QQ(0), QQ(1)], [QQ(0), QQ(0)]], QQ)], "J")
    r = ext1(J, J)
    # k[x]-modules: Ext^1(k[x]/x^2, k[x]/x^2) = Hom(k[x]/x^2, k[x]/x^2) has dimension 2
    assert r.dim == 2


def _word_value(mod, word):
    m = Mat.identity(mod.dim, mod.field)
    for g in word:
        m = m @ mod.action[g]
    return m


def _delta(D, M, N, word):
    """Derivation on a word by the Leibniz expansion at every letter."""
    total = Mat.zeros(M.dim, N.dim, M.field)
    for j, g in enumerate(word):
        total = total + _word_value(M, word[:j]) @ D[g] @ _word_value(N, word[j + 1:])
    return total


def _random_module(rng, pres, d):
    while True:
        mats = [Mat([[QQ(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)], QQ) for _ in range(pres.ngens)]
        if pres.relations:
            # commuting family: polynomials in one random matrix
            base = mats[0]
            mats = [base @ base.scale(QQ(k)) + base.scale(QQ(k + 1)) for k in range(pres.ngens)]
        return ModuleRep.from_matrices(pres, mats)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.integers(1, 2), st.booleans())
def test_leibniz_consistency_and_relations(seed, dm, dn, commutative):
    rng = random.Random(seed)
    pres = QXY if commutative else FREE
    M, N = _random_module(rng, pres, dm), _random_module(rng, pres, dn)
    der = derivation_space(M, N)
    inner = inner_space(M, N)
    assert der.basis.contains_space(inner)
    for v in der.basis.basis:
        D = der.components(v)
        for r in pres.relations:
            total = Mat.zeros(dm, dn, QQ)
            for w, c in r.terms.items():
                total = total + _delta(D, M, N, w).scale(c)
            assert total.is_zero()
        word = tuple(rng.randrange(2) for _ in range(rng.randint(1, 3)))
        values = set()
        for split in range(len(word) + 1):
            u, w = word[:split], word[split:]
            values.add(_delta(D, M, N, u) @ _word_value(N, w) + _word_value(M, u) @ _delta(D, M, N, w))
        assert len(values) == 1


@settings(max_examples=30)
@given(st.integers(1, 3), st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_commutative_ext_table(n, coords):
    pres = commutative_preset(n, QQ)
    P = point_module([Fraction(c, 2) for c in coords[:n]], pres)
    Q = point_module([Fraction(c, 3) for c in coords[3:3 + n]], pres)
    assert ext1(P, P).dim == n
    expected = n if P.action == Q.action else 0
    assert ext1(P, Q).dim == expected
