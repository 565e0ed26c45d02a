import pytest

from homext.chaincx import (ChainComplex, ChainMap, ClassKind, ComplexClassKind, chain_map_group,
                            class_membership, cokernel_cx, cycles, disk, dualize_cx, from_disk, homology,
                            identity_cx, is_exact, is_hom_F_exact, is_homotopic_to_zero, kernel_cx,
                            pullback_cx, pushout_cx, quotient, sphere, to_disk, to_sphere)
from homext.errors import MalformedInputError, PreconditionError
from homext.modcat import Module, Morphism, TestClass, identity


@pytest.fixture
def doubling(z4) -> ChainComplex:
    """ Z/4 <-2- Z/4 <-2- Z/4 in degrees 0..2. """
    four = Module.free(z4)
    twice = Morphism(four, four, [[2]])
    return ChainComplex(z4, 0, 2, (four, four, four), (twice, twice))


def test_complex_validation(z4, free_z4, z2_over_z4):
    with pytest.raises(MalformedInputError):
        ChainComplex(z4, 0, 1, (free_z4,), ())
    with pytest.raises(MalformedInputError):
        ChainComplex(z4, 0, 1, (free_z4, z2_over_z4), (identity(free_z4),))
    with pytest.raises(PreconditionError):
        ChainComplex(z4, 0, 2, (free_z4,) * 3, (identity(free_z4),) * 2)


def test_homology_of_doubling(doubling):
    assert [str(homology(doubling, m)) for m in doubling.support] == ["Z/2", "0", "Z/2"]
    assert not is_exact(doubling)
    assert cycles(doubling, 2)[0].factors == (2,)
    assert quotient(doubling, 0)[0].factors == (2,)


def test_outside_support_is_zero(doubling):
    assert doubling.module(5).is_zero
    assert doubling.diff(0).is_zero()


def test_chain_map_must_commute(z4, free_z4, z2_over_z4):
    d = disk(free_z4, 1)
    with pytest.raises(MalformedInputError):
        ChainMap(d, d, {1: identity(free_z4)})
    # missing components are zero
    f = ChainMap(d, sphere(free_z4, 1), {1: identity(free_z4)})
    assert f.component(0).is_zero()


def test_chain_map_group_into_sphere(z4, free_z4):
    group = chain_map_group(disk(free_z4, 1), sphere(free_z4, 1))
    assert group.order == 4
    assert len({f.key() for f in group.elements()}) == 4


def test_disk_identity_is_nullhomotopic(free_z4, z2_over_z4):
    assert is_homotopic_to_zero(identity_cx(disk(free_z4, 1)))
    assert not is_homotopic_to_zero(identity_cx(sphere(z2_over_z4, 0)))


def test_disk_and_sphere_shapes(z2_over_z4):
    d = disk(z2_over_z4, 3)
    assert (d.lo, d.hi) == (2, 3)
    assert is_exact(d)
    assert not is_exact(sphere(z2_over_z4, 3))


def test_adjunction_maps(doubling, free_z4):
    f = identity(free_z4)
    into = to_disk(f, doubling, 1)
    assert into.component(0) == f
    assert into.component(1) == doubling.diff(1)
    out = from_disk(f, doubling, 2)
    assert out.component(1) == doubling.diff(2)
    q_mod, q = quotient(doubling, 0)
    assert to_sphere(identity(q_mod), doubling, 0).component(0) == q


def test_kernel_and_cokernel_of_chain_maps(doubling):
    twice = ChainMap(doubling, doubling, {m: 2 * identity(doubling.module(m)) for m in doubling.support})
    k, incl = kernel_cx(twice)
    q, proj = cokernel_cx(twice)
    assert [k.module(m).factors for m in k.support] == [(2,)] * 3
    assert [q.module(m).factors for m in q.support] == [(2,)] * 3
    assert (twice @ incl).is_zero()
    assert (proj @ twice).is_zero()


def test_pullback_and_pushout_of_complexes(doubling):
    ident = identity_cx(doubling)
    pb = pullback_cx(ident, ident)
    assert ident @ pb.p_a == ident @ pb.p_b
    w = pb.factor(ident, ident)
    assert pb.p_a @ w == ident and pb.p_b @ w == ident
    po = pushout_cx(ident, ident)
    assert po.i_a == po.i_b


def test_dual_of_disk(z2_over_z4):
    for m in (-1, 0, 2):
        assert dualize_cx(disk(z2_over_z4, m)) == disk(z2_over_z4, 1 - m)


def test_dual_of_chain_map_is_involutive(doubling):
    twice = ChainMap(doubling, doubling, {m: 2 * identity(doubling.module(m)) for m in doubling.support})
    assert dualize_cx(dualize_cx(twice)) == twice
    assert dualize_cx(dualize_cx(doubling)) == doubling


def test_class_membership(z4, z2_over_z4, free_z4):
    free, everything = TestClass.free(z4), TestClass.everything(z4)
    d = disk(free_z4, 1)
    assert class_membership(d, ComplexClassKind(ClassKind.DEGREEWISE, free))
    assert class_membership(d, ComplexClassKind(ClassKind.EXACT_CYCLES, free))
    assert not class_membership(sphere(free_z4, 0), ComplexClassKind(ClassKind.EXACT_CYCLES, free))
    assert class_membership(sphere(z2_over_z4, 0), ComplexClassKind(ClassKind.DG, everything))
    assert class_membership(d, ComplexClassKind(ClassKind.DG, free)) is None


def test_hom_exactness(z4, z2_over_z4, free_z4):
    d = disk(z2_over_z4, 1)
    assert is_hom_F_exact(d, TestClass.everything(z4))
    assert not is_hom_F_exact(sphere(free_z4, 0), TestClass.free(z4))
