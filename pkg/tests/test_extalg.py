import pytest

from homext.chaincx import sphere
from homext.errors import MalformedInputError, PreconditionError, UnsupportedError
from homext.extalg import (EXT_CACHE_SIZE, Extension, _default_ext_group, baer_sum, complex_ext_group,
                           ext_group, free_resolution, is_equivalent, is_extension_closed, is_left_relative,
                           phi, psi, pullback_extension, pushout_extension, relative_ext_subgroup,
                           special_precover_free, transport)
from homext.modcat import Module, Morphism, Ring, TestClass, identity, zero_morphism
from homext.testing.ground_truth import complex_extension_classes, module_extension_classes


@pytest.fixture
def nonsplit(z2_over_z4, free_z4) -> Extension:
    """ 0 -> Z/2 -> Z/4 -> Z/2 -> 0 over Z/4. """
    return Extension((Morphism(z2_over_z4, free_z4, [[2]]), Morphism(free_z4, z2_over_z4, [[1]])))


@pytest.fixture
def two_extension(z2_over_z4, free_z4) -> Extension:
    """ 0 -> Z/2 -> Z/4 -> Z/4 -> Z/2 -> 0 over Z/4. """
    return Extension((Morphism(z2_over_z4, free_z4, [[2]]), Morphism(free_z4, free_z4, [[2]]),
                      Morphism(free_z4, z2_over_z4, [[1]])))


def test_ext_over_z4(z4, z2_over_z4, free_z4):
    assert ext_group(1, z2_over_z4, z2_over_z4).order == 2
    assert ext_group(1, free_z4, z2_over_z4).order == 1
    assert ext_group(1, z2_over_z4, free_z4).order == 1
    assert ext_group(2, z2_over_z4, z2_over_z4).order == 2
    assert str(ext_group(1, z2_over_z4, z2_over_z4)) == "Z/2"


def test_ext_degree_must_be_positive(z2_over_z4):
    with pytest.raises(MalformedInputError):
        ext_group(0, z2_over_z4, z2_over_z4)


@pytest.mark.parametrize("n, a, b", [(4, 2, 2), (4, 4, 2), (4, 2, 4), (8, 4, 2), (8, 2, 4), (9, 3, 3), (12, 6, 2)])
def test_ext_order_matches_extension_count(n, a, b):
    ring = Ring(n)
    c, d = Module.cyclic(ring, a), Module.cyclic(ring, b)
    assert ext_group(1, c, d).order == len(module_extension_classes(c, d))


def test_extension_checks_exactness(z4, z2_over_z4, free_z4):
    with pytest.raises(MalformedInputError):
        Extension((identity(free_z4),))
    with pytest.raises(PreconditionError):
        Extension((Morphism(z2_over_z4, free_z4, [[2]]), identity(free_z4)))
    with pytest.raises(PreconditionError):
        Extension((zero_morphism(z2_over_z4, free_z4), Morphism(free_z4, z2_over_z4, [[1]])))


def test_phi_and_psi(nonsplit, z2_over_z4):
    e = phi(nonsplit)
    assert not e.is_zero
    assert is_equivalent(psi(e), nonsplit)
    assert phi(Extension.split(z2_over_z4, z2_over_z4)).is_zero
    assert str(psi(e)) == "0 -> Z/2 -> Z/4 -> Z/2 -> 0"


def test_every_class_is_realized(z4):
    c, d = Module.cyclic(z4, 2), Module.from_orders(z4, [2, 4])
    for e in ext_group(1, c, d).elements():
        assert phi(psi(e)) == e


def test_baer_sum(nonsplit, z2_over_z4):
    twice = baer_sum(nonsplit, nonsplit)
    assert phi(twice).is_zero
    assert is_equivalent(twice, Extension.split(z2_over_z4, z2_over_z4))
    assert is_equivalent(baer_sum(nonsplit, Extension.split(z2_over_z4, z2_over_z4)), nonsplit)


def test_baer_sum_matches_class_addition():
    ring = Ring(16)
    c = d = Module.cyclic(ring, 4)
    group = ext_group(1, c, d)
    assert group.orders == (4,)
    for e in group.elements():
        for f in group.elements():
            assert phi(baer_sum(psi(e), psi(f))) == e + f


def test_higher_extensions(two_extension, nonsplit):
    assert two_extension.degree == 2
    assert not phi(two_extension).is_zero
    with pytest.raises(UnsupportedError):
        baer_sum(two_extension, two_extension)
    with pytest.raises(UnsupportedError):
        psi(phi(two_extension))
    with pytest.raises(UnsupportedError):
        is_equivalent(two_extension, two_extension)


def test_pushout_and_pullback_of_extensions(nonsplit, z2_over_z4):
    assert phi(pushout_extension(nonsplit, zero_morphism(z2_over_z4, z2_over_z4))).is_zero
    assert is_equivalent(pullback_extension(nonsplit, identity(z2_over_z4)), nonsplit)


def test_non_minimal_resolution_gives_the_same_group(nonsplit, z2_over_z4):
    res = free_resolution(z2_over_z4, 2, extra_rank=1)
    assert res.is_exact() and res.is_free
    group = ext_group(1, z2_over_z4, z2_over_z4, res)
    assert group.order == 2
    moved = transport(phi(nonsplit), res)
    assert not moved.is_zero
    assert phi(nonsplit, res) == moved


def test_relative_subgroups(z4, z2_over_z4, nonsplit):
    two = TestClass(z4, (z2_over_z4,))
    assert relative_ext_subgroup(1, z2_over_z4, z2_over_z4, two).order == 1
    assert relative_ext_subgroup(1, z2_over_z4, z2_over_z4, TestClass.free(z4)).order == 2
    assert relative_ext_subgroup(1, z2_over_z4, z2_over_z4, TestClass.everything(z4)).order == 1
    assert relative_ext_subgroup(1, z2_over_z4, z2_over_z4, two, right=True).order == 1
    assert not is_left_relative(nonsplit, two)
    with pytest.raises(UnsupportedError):
        relative_ext_subgroup(2, z2_over_z4, z2_over_z4, two)


def test_extension_closure(z4, z2_over_z4):
    assert is_extension_closed(TestClass.free(z4))
    assert is_extension_closed(TestClass.everything(z4))
    assert not is_extension_closed(TestClass(z4, (z2_over_z4,)))


@pytest.mark.parametrize("n, orders, closed", [
    (8, (8,), True), (8, (2, 4, 8), True), (8, (2,), False), (8, (4,), False),
    (8, (4, 8), False), (8, (2, 8), False), (8, (2, 4), False),
    (12, (3, 4), True), (12, (3,), True), (12, (2, 3), False),
])
def test_extension_closed_classes_per_prime(n, orders, closed):
    # Closed exactly when each prime part holds nothing, only the projective, or everything
    ring = Ring(n)
    assert is_extension_closed(TestClass(ring, tuple(Module.cyclic(ring, q) for q in orders))) == closed


def test_ext_group_cache_is_bounded(z4, z2_over_z4):
    ext_group(1, z2_over_z4, z2_over_z4)
    info = _default_ext_group.cache_info()
    assert info.maxsize == EXT_CACHE_SIZE
    assert 0 < info.currsize <= EXT_CACHE_SIZE


def test_free_precover_is_special(z2_over_z4):
    cover, cert = special_precover_free(z2_over_z4)
    assert cover.is_epi()
    assert cert.kernel.factors == (2,)
    assert cert.ok


def test_complex_ext_of_spheres(z2_over_z4):
    s0, s1 = sphere(z2_over_z4, 0), sphere(z2_over_z4, 1)
    for x, y in ((s0, s0), (s1, s0)):
        group = complex_ext_group(x, y)
        assert group.order == 2
        assert group.order == len(complex_extension_classes(x, y))
        for e in group.elements():
            assert phi(psi(e)) == e
    assert complex_ext_group(s0, s1).order == 1
    assert complex_ext_group(s0, s1).order == len(complex_extension_classes(s0, s1))
