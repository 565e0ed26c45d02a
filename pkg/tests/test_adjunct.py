import pytest

from homext.adjunct import (disk_phi, disk_psi, verify_ftilde_degreewise, verify_prop_1, verify_prop_4_2,
                            verify_prop_5, verify_relativedwsd)
from homext.chaincx import ChainComplex, disk, sphere
from homext.errors import MalformedInputError
from homext.extalg import Extension, ext_group, phi, psi
from homext.modcat import Module, Morphism, TestClass
from homext.testing.fuzz import (adjunction_instance, disk_ended_instance, disk_instance, instance_rng,
                                 random_ring, sphere_instance)


@pytest.fixture
def doubling(z4) -> ChainComplex:
    four = Module.free(z4)
    twice = Morphism(four, four, [[2]])
    return ChainComplex(z4, 0, 2, (four, four, four), (twice, twice))


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_hom_adjunctions(variant, doubling, z2_over_z4):
    report = verify_prop_1(variant, z2_over_z4, doubling, 1)
    assert report.ok, report.to_json()
    assert report.left_order == report.right_order
    assert report.injective and report.surjective and report.naturality


def test_hom_adjunction_rejects_unknown_variant(doubling, z2_over_z4):
    with pytest.raises(MalformedInputError):
        verify_prop_1(5, z2_over_z4, doubling, 1)


@pytest.mark.parametrize("index", range(6))
def test_hom_adjunctions_on_fuzzed_instances(index):
    rng = instance_rng(7, index)
    ring = random_ring(rng)
    inst = adjunction_instance(rng, ring)
    report = verify_prop_1(inst["variant"], inst["C"], inst["X"], inst["m"])
    assert report.ok, report.to_json()


def test_disk_round_trip(z2_over_z4):
    x = sphere(z2_over_z4, 0)
    for e in ext_group(1, z2_over_z4, z2_over_z4).elements():
        lifted = disk_psi(psi(e), x, 0)
        assert lifted.left == disk(z2_over_z4, 1)
        assert phi(disk_phi(lifted, 0)) == e


@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_relative_ext_against_disks(variant, z4, z2_over_z4, doubling):
    for f in (TestClass.free(z4), TestClass(z4, (z2_over_z4,))):
        report = verify_prop_4_2(variant, doubling, z2_over_z4, 1, f)
        assert report.ok, report.to_json()
        assert report.left_order == report.right_order
        if variant in (2, 4):
            assert "checked on the dual instance" in report.notes


@pytest.mark.slow
@pytest.mark.parametrize("index", range(10))
def test_relative_ext_against_disks_fuzzed(index):
    rng = instance_rng(11, index)
    ring = random_ring(rng)
    inst = disk_instance(rng, ring)
    for variant in (1, 2, 3, 4):
        report = verify_prop_4_2(variant, inst["X"], inst["C"], inst["m"], inst["F"])
        assert report.ok, report.to_json()


def test_disk_ended_extensions(z4, z2_over_z4):
    s = Extension.split(sphere(z2_over_z4, 0), disk(z2_over_z4, 1))
    report = verify_relativedwsd(s, TestClass.free(z4))
    assert report.hypotheses["extension_closed"]
    assert report.ok, report.to_json()


@pytest.mark.parametrize("index", range(4))
def test_disk_ended_extensions_fuzzed(index):
    rng = instance_rng(3, index)
    inst = disk_ended_instance(rng, random_ring(rng))
    assert verify_relativedwsd(inst["S"], inst["F"]).ok


def test_exact_complexes_with_cycles_in_class(z4, free_z4):
    report = verify_ftilde_degreewise(disk(free_z4, 1), TestClass.free(z4))
    assert report.hypotheses == {"extension_closed": True, "in_exact_class": True}
    assert report.ok


def test_sphere_lift_strict_embedding(z4, z2_over_z4):
    report = verify_prop_5(1, sphere(z2_over_z4, 1), z2_over_z4, 0, TestClass.free(z4), "mono")
    assert report.ok, report.to_json()
    assert (report.left_order, report.right_order) == (1, 2)
    assert report.hypotheses["exact"] is False
    assert "hypothesis not met: iso not checked" in report.notes


@pytest.mark.parametrize("mode", ["mono", "iso"])
@pytest.mark.parametrize("variant", [1, 2, 3, 4])
def test_spheres_on_an_exact_complex(mode, variant, z4, z2_over_z4, free_z4):
    report = verify_prop_5(variant, disk(free_z4, 1), z2_over_z4, 0, TestClass.free(z4), mode)
    assert report.ok, report.to_json()
    assert report.hypotheses["exact"]


def test_projection_needs_exactness(z4, z2_over_z4):
    report = verify_prop_5(1, sphere(z2_over_z4, 0), z2_over_z4, 0, TestClass.free(z4), "iso")
    assert report.ok
    assert report.hypotheses["exact"] is False
    assert "hypothesis not met" in report.notes
    assert not report.checks


def test_spheres_reject_bad_mode(z4, z2_over_z4):
    with pytest.raises(MalformedInputError):
        verify_prop_5(1, sphere(z2_over_z4, 0), z2_over_z4, 0, TestClass.free(z4), "epi")


@pytest.mark.slow
@pytest.mark.parametrize("index", range(10))
def test_sphere_lifts_fuzzed(index):
    rng = instance_rng(5, index)
    ring = random_ring(rng)
    inst = sphere_instance(rng, ring)
    for variant in (1, 2, 3, 4):
        report = verify_prop_5(variant, inst["X"], inst["C"], inst["m"], inst["F"], "mono")
        assert report.injective, report.to_json()
