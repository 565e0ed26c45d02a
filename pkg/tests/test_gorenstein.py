import pytest

from homext import gorenstein
from homext.chaincx import ChainComplex, disk, sphere
from homext.errors import MalformedInputError, PreconditionError
from homext.extalg import complex_ext_group, ext_group
from homext.gorenstein import (GorensteinContext, complex_gext_order, gext, gp_precover, gp_resolution,
                               is_gorenstein_injective, is_gorenstein_projective, is_projective,
                               projective_dimension, verify_dw_eq_dg, verify_gext, verify_gext_disks,
                               verify_isosgorspheres)
from homext.modcat import Module, Morphism, Ring
from homext.testing.fuzz import divisors, gext_instance, instance_rng, random_ring


@pytest.fixture
def ctx4(z4) -> GorensteinContext:
    return GorensteinContext(z4)


def test_projectives(z12):
    ctx = GorensteinContext(z12)
    assert ctx.projectives == (Module.cyclic(z12, 3), Module.cyclic(z12, 4))
    assert is_projective(Module.cyclic(z12, 12), ctx)
    assert not is_projective(Module.cyclic(z12, 6), ctx)
    assert GorensteinContext.from_json(ctx.to_json()) == ctx


def test_projective_dimension(z4, z12, ctx4):
    assert projective_dimension(Module.free(z4), ctx4) == 0
    assert projective_dimension(Module.cyclic(z4, 2), ctx4) is None
    assert projective_dimension(Module.zero(z4), ctx4) == 0
    assert projective_dimension(Module.cyclic(z12, 6), GorensteinContext(z12)) is None


@pytest.mark.parametrize("n", [4, 8, 9, 12])
def test_every_module_is_gorenstein(n):
    ctx = GorensteinContext(Ring(n))
    for d in divisors(ctx.ring):
        m = Module.cyclic(ctx.ring, d)
        assert is_gorenstein_projective(m, ctx)
        assert is_gorenstein_injective(m, ctx)
        assert gp_precover(m, ctx).certified


def test_gext_vanishes_where_ext_does_not(z2_over_z4, ctx4):
    assert ext_group(1, z2_over_z4, z2_over_z4).order == 2
    assert gext(1, z2_over_z4, z2_over_z4, ctx4).order == 1
    assert gext(2, z2_over_z4, z2_over_z4, ctx4).order == 1


def test_gp_resolution_depth(z2_over_z4, ctx4):
    res = gp_resolution(z2_over_z4, ctx4, 2)
    assert res.depth == 2
    assert res.F(0) == z2_over_z4
    with pytest.raises(MalformedInputError):
        gp_resolution(z2_over_z4, ctx4, 0)


def test_verify_gext(z2_over_z4, free_z4, ctx4):
    report = verify_gext(z2_over_z4, z2_over_z4, ctx4)
    assert report.ok, report.to_json()
    assert report.hypotheses == {"gorenstein_projective": True, "gorenstein_injective": True}
    assert verify_gext(free_z4, z2_over_z4, ctx4).ok


@pytest.mark.parametrize("index", range(5))
def test_verify_gext_fuzzed(index):
    rng = instance_rng(19, index)
    ring = random_ring(rng)
    inst = gext_instance(rng, ring)
    assert verify_gext(inst["M"], inst["N_mod"], GorensteinContext(ring)).ok


def test_complex_gext(z2_over_z4, ctx4):
    s = sphere(z2_over_z4, 0)
    assert complex_ext_group(s, s).order == 2
    assert complex_gext_order(s, s, ctx4) == 1


def test_dw_equals_dg(z4, z2_over_z4, free_z4, ctx4):
    report = verify_dw_eq_dg([sphere(z2_over_z4, 0), disk(z2_over_z4, 1)], [disk(free_z4, 1)], ctx4)
    assert report.ok, report.to_json()
    assert report.left_order > 0
    with pytest.raises(PreconditionError):
        verify_dw_eq_dg([sphere(z2_over_z4, 0)], [sphere(free_z4, 0)], ctx4)
    with pytest.raises(PreconditionError):
        verify_dw_eq_dg([sphere(z2_over_z4, 0)], [], ctx4)


def test_dw_equals_dg_fails_on_a_map_that_is_not_nullhomotopic(monkeypatch, free_z4, ctx4):
    # Only the zero map counts as null-homotopic, so the identity of D^1(Z/4) is a witness
    monkeypatch.setattr(gorenstein, "is_homotopic_to_zero", lambda f: f.is_zero())
    report = verify_dw_eq_dg([disk(free_z4, 1)], [disk(free_z4, 1)], ctx4)
    assert not report.ok
    assert report.checks["nullhomotopic"] is False
    assert report.checks["dg_equals_dw"] is False
    assert report.checks["dg_membership"] is False
    assert report.witness["check"] == "nullhomotopic"
    assert report.left_order == 4


@pytest.mark.parametrize("variant", [1, 2])
def test_gorenstein_spheres(variant, z4, free_z4, z2_over_z4, ctx4):
    report = verify_isosgorspheres(disk(free_z4, 1), z2_over_z4, 0, ctx4, variant)
    assert report.ok, report.to_json()
    assert report.left_order == report.right_order == 1


def test_gorenstein_spheres_need_an_exact_complex(z2_over_z4, ctx4):
    with pytest.raises(PreconditionError):
        verify_isosgorspheres(sphere(z2_over_z4, 0), z2_over_z4, 0, ctx4)
    with pytest.raises(MalformedInputError):
        verify_isosgorspheres(sphere(z2_over_z4, 0), z2_over_z4, 0, ctx4, 3)


def test_gorenstein_disks(z4, z2_over_z4, ctx4):
    four = Module.free(z4)
    twice = Morphism(four, four, [[2]])
    x = ChainComplex(z4, 0, 2, (four, four, four), (twice, twice))
    for m in (0, 1, 2):
        report = verify_gext_disks(x, z2_over_z4, m, ctx4)
        assert report.ok, report.to_json()
