import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from aspeckit.errors import DomainError, NotSimpleSummand
from aspeckit.linalg import Mat, inverse, is_invertible
from aspeckit.modules import ModuleRep, companion_matrix, point_module
from aspeckit.ncalgebra import commutative_preset
from aspeckit.parsing import parse_expr
from aspeckit.scalars import QQ, QQI, GaussianRational
from aspeckit.spectrum import (SectionsCache, SectionsDiagram, Universe, bits, closure, d_locus, generate_topology,
                               induced_subscheme, limit, localize, open_diagram, restriction_map,
                               sections, sheaf_check, topology_from_subbasis, z_locus)

QX = commutative_preset(1, QQ)


def E(text, pres=QX):
    return parse_expr(text, pres)


def line_universe(values, pres=QX):
    return Universe.of([point_module([v], pres, f"P{v}") for v in values])


U3 = line_universe([0, 1, 2])


def test_d_locus_examples():
    assert bits(d_locus(E("x"), U3)) == [1, 2]
    assert bits(d_locus(E("x*(x - 1)"), U3)) == [2]
    assert d_locus(E("1"), U3) == U3.full


def test_z_locus_examples():
    assert bits(z_locus([E("x*(x - 1)")], U3)) == [0, 1]
    assert z_locus([E("1")], U3) == 0
    assert z_locus([E("0")], U3) == U3.full


def test_generate_topology_examples():
    t = generate_topology([E("x"), E("x - 1")], U3)
    assert set(t.opens) == {0, 0b100, 0b101, 0b110, 0b111}
    assert generate_topology([], U3).opens == (0, 0b111)
    assert generate_topology([E("1")], U3).opens == (0, 0b111)


def _brute_closure(mask, opens, width):
    full = (1 << width) - 1
    closed = [full & ~o for o in opens]
    best = full
    for c in closed:
        if mask & ~c == 0 and bin(c).count("1") < bin(best).count("1"):
            best = c
    return best


def test_closure_examples():
    t = generate_topology([E("x"), E("x - 1")], U3)
    # the only closed set containing the point 2 is the whole universe
    assert closure(0b100, t) == _brute_closure(0b100, t.opens, 3) == 0b111
    assert closure(0b001, t) == 0b001
    assert closure(t.full, t) == t.full
    assert closure(0, t) == 0


@given(st.lists(st.integers(0, 15), max_size=4), st.integers(0, 15))
def test_topology_closed_under_operations(masks, probe):
    t = topology_from_subbasis(masks, 4)
    s = set(t.opens)
    assert 0 in s and 15 in s
    assert all(a & b in s and a | b in s for a in s for b in s)
    assert all(m in s for m in masks)
    c = closure(probe, t)
    assert c == _brute_closure(probe, t.opens, 4)
    assert probe & ~c == 0 and (t.full & ~c) in s


def test_localize_examples():
    assert localize(QX, [point_module([0], QX)]).dim == 1
    R = localize(QX, [point_module([0], QX), point_module([1], QX)])
    assert R.dim == 2 and R.algebra.contains(Mat.diag([QQ(1), QQ(0)], QQ))
    C = ModuleRep.from_matrices(QX, [companion_matrix([1, 0], QQ)], "C")
    R = localize(QX, [C])
    X = C.action[0]
    assert R.dim == 2 and R.algebra.contains(X) and R.algebra.contains(X @ X + Mat.identity(2, QQ))


def test_localize_rejects_non_simple():
    J = ModuleRep.from_matrices(QX, [Mat([[QQ(0), QQ(1)], [QQ(0), QQ(0)]], QQ)], "J")
    with pytest.raises(NotSimpleSummand):
        localize(QX, [J])


def test_sections_examples():
    u = line_universe([0, 1])
    assert sections(u, 0b11).dim == 2
    single = sections(u, 0b01)
    assert single.dim == 1
    rho = restriction_map(sections(u, 0b11), [0])
    assert rho(Mat.diag([QQ(5), QQ(7)], QQ)) == Mat([[QQ(5)]], QQ)
    assert sections(u, 0).is_zero_ring() and sections(u, 0).dim == 0


def test_limit_examples():
    u = line_universe([0, 1])
    cache = SectionsCache(u)
    top = limit(open_diagram(u, [0b11, 0b01, 0b10], cache), QQ)
    assert top.dim == 2 and top.projection_rank(0b11) == 2
    product = limit(open_diagram(u, [0b01, 0b10], cache), QQ)
    assert product.dim == 2
    # equalizer over an empty overlap
    diagram = SectionsDiagram(
        {"a": cache(0b01).algebra, "b": cache(0b10).algebra, "ab": cache(0).algebra},
        {("a", "ab"): cache.restriction(0b01, 0), ("b", "ab"): cache.restriction(0b10, 0)})
    assert limit(diagram, QQ).dim == sections(u, 0b11).dim


def test_non_functorial_diagram_rejected():
    from aspeckit.errors import NonFunctorialDiagram
    u = line_universe([0, 1])
    cache = SectionsCache(u)
    bad = SectionsDiagram({"a": cache(0b11).algebra, "b": cache(0b01).algebra},
                          {("a", "b"): lambda m: m.block(0, 0, 1, 1).scale(QQ(2))})
    with pytest.raises(NonFunctorialDiagram):
        limit(bad, QQ)


def test_sheaf_check_examples():
    u = line_universe([0, 1])
    t = topology_from_subbasis([0b01, 0b10], 2)
    rep = sheaf_check(u, t, 0b11, [0b01, 0b10])
    assert rep.ok and rep.sections_dim == rep.compatible_dim == 2
    assert sheaf_check(u, t, 0b11, [0b11]).ok
    assert sheaf_check(u, t, 0, []).ok


def test_induced_subscheme_examples():
    t = generate_topology([E("x"), E("x - 1")], U3)
    Z = induced_subscheme(U3, t, z_locus([E("x*(x - 1)")], U3))
    assert Z.universe.size == 2 and Z.global_sections().dim == 2
    Y = induced_subscheme(U3, t, d_locus(E("x"), U3))
    gs = Y.global_sections()
    assert gs.dim == 2
    X = Mat.block_diag([M.action[0] for M in gs.modules], QQ)
    assert is_invertible(X) and gs.algebra.contains(inverse(X))
    same = induced_subscheme(U3, t, U3.full)
    assert same.topology.opens == t.opens and same.global_sections().dim == 3


def test_universe_rejects_isomorphic_points():
    with pytest.raises(DomainError):
        Universe.of([point_module([0], QX, "a"), point_module([0], QX, "b")])


def test_density_for_absolutely_simple_points():
    A = commutative_preset(1, QQI)
    I = GaussianRational(0, 1)
    mods = [point_module([c], A, f"p{k}") for k, c in enumerate([0, 1, I])]
    for r in range(1, 4):
        assert localize(A, mods[:r]).dim == r
    from aspeckit.ncalgebra import free_algebra
    free = free_algebra(["x", "y"], QQ)
    S = ModuleRep.from_matrices(free, [Mat.unit(0, 1, 2, QQ), Mat.unit(1, 0, 2, QQ)], "S")
    P = point_module([3, 4], free, "P")
    assert localize(free, [S, P]).dim == 4 + 1


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4, unique=True), st.integers(0, 10 ** 6))
def test_localize_invariants(values, seed):
    rng = random.Random(seed)
    mods = [point_module([v], QX, f"P{v}") for v in values]
    if rng.random() < 0.5:
        mods.append(ModuleRep.from_matrices(QX, [companion_matrix([1, 0], QQ)], "C"))
    R = localize(QX, mods)
    assert R.algebra.is_closed()
    assert R.algebra.contains(Mat.identity(R.d, QQ))
    assert R.block_diagonal_space().contains_space(R.algebra.basis)
    assert not R.inverses_enlarged
    for m in R.elements():
        if is_invertible(m):
            assert R.algebra.contains(inverse(m))


@given(st.lists(st.integers(-2, 2), min_size=2, max_size=4), st.lists(st.integers(-2, 2), min_size=2, max_size=4))
def test_d_locus_multiplicative(fc, gc):
    u = line_universe([-1, 0, 1, 2])
    x = E("x")
    f = sum((x ** k * c for k, c in enumerate(fc)), E("0"))
    g = sum((x ** k * c for k, c in enumerate(gc)), E("0"))
    assert d_locus(f * g, u) == d_locus(f, u) & d_locus(g, u)
    assert d_locus(E("1"), u) == u.full and d_locus(E("0"), u) == 0


def test_restriction_maps_are_unital_ring_maps():
    C = ModuleRep.from_matrices(QX, [companion_matrix([1, 0], QQ)], "C")
    u = Universe.of([point_module([0], QX, "P0"), C, point_module([2], QX, "P2")])
    cache = SectionsCache(u)
    for src in range(8):
        for dst in range(8):
            if dst & ~src == 0 and dst:
                rho = cache.restriction(src, dst)
                A = cache(src).algebra
                assert rho(Mat.identity(A.d, QQ)) == Mat.identity(cache(dst).d, QQ)
                for a, b in itertools.product(A.matrices(), repeat=2):
                    assert rho(a @ b) == rho(a) @ rho(b)
