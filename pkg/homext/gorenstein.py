"""
Gorenstein homological algebra over the self-injective rings Z/N. Every
module is Gorenstein projective and the modules of finite projective
dimension are the projectives, so GExt vanishes; all of this is computed
on the instance through precovers, resolutions and Hom sequences rather
than assumed.
"""
from dataclasses import dataclass
import functools
import logging
from typing import Any, Optional, Sequence

from homext.adjunct import VerificationReport
from homext.chaincx import (ChainComplex, ChainMap, ClassKind, ComplexClassKind, chain_map_group,
                            class_membership, disk, dualize_cx, identity_cx, is_exact,
                            is_homotopic_to_zero, quotient, quotient_map, sphere, to_sphere,
                            zero_chain_map)
from homext.errors import MalformedInputError, PreconditionError
from homext.extalg import (ExtGroup, Resolution, ext_group, free_cover, relative_ext_subgroup,
                           resolution_from_maps)
from homext.modcat import (Module, Morphism, Ring, TestClass, hom_group, identity, induced_map,
                           kernel, zero_morphism)

log = logging.getLogger("homext.gorenstein")


@dataclass(frozen=True)
class GorensteinContext:
    """ Z/N with its indecomposable projectives Z/p^a (p^a || N) and the class W they generate. """
    ring: Ring

    @functools.cached_property
    def projectives(self) -> tuple[Module, ...]:
        return tuple(Module.cyclic(self.ring, q) for q in self.ring.prime_powers)

    @functools.cached_property
    def W(self) -> TestClass:
        return TestClass(self.ring, self.projectives)

    @functools.cached_property
    def everything(self) -> TestClass:
        return TestClass.everything(self.ring)

    def to_json(self):
        return {"N": self.ring.N}

    @staticmethod
    def from_json(o: dict[str, Any]) -> 'GorensteinContext':
        return GorensteinContext(Ring.from_json(o))


# |-----------------------------------------------------------------|
# |                         Module classes                          |
# |-----------------------------------------------------------------|

def is_projective(m: Module, ctx: GorensteinContext) -> bool:
    return ctx.W.contains(m)


def projective_dimension(m: Module, ctx: GorensteinContext) -> Optional[int]:
    """ The first syzygy that is projective, searched up to #factors + 1 steps; None if infinite. """
    current = m
    for k in range(m.rank + 2):
        if is_projective(current, ctx):
            return k
        current, _ = kernel(free_cover(current))
    log.debug(f"no projective syzygy of {m} within {m.rank + 1} steps")
    return None


def is_gorenstein_projective(m: Module, ctx: GorensteinContext) -> bool:
    """ Ext^1(M, P) = 0 for every indecomposable projective P. """
    return all(ext_group(1, m, p).order == 1 for p in ctx.projectives)


def is_gorenstein_injective(m: Module, ctx: GorensteinContext) -> bool:
    """ Ext^1(P, M) = 0 for every indecomposable projective P. """
    return all(ext_group(1, p, m).order == 1 for p in ctx.projectives)


@dataclass(eq=False)
class GPPrecover:
    """ 0 -> K -> G -> M -> 0 with G Gorenstein projective and K of finite projective dimension. """
    cover: Morphism | ChainMap
    kernel: Module | ChainComplex
    inclusion: Morphism | ChainMap
    certified: bool


def gp_precover(m: Module, ctx: GorensteinContext) -> GPPrecover:
    """ M is its own precover; the certificate checks M is GP and the zero kernel lies in W. """
    zero = Module.zero(m.ring)
    ok = is_gorenstein_projective(m, ctx) and is_projective(zero, ctx)
    return GPPrecover(identity(m), zero, zero_morphism(zero, m), ok)


def gp_precover_cx(x: ChainComplex, ctx: GorensteinContext) -> GPPrecover:
    """ The same for complexes: X in dwGProj~ covers itself with kernel the zero complex. """
    zero = ChainComplex.zero(x.ring)
    gp = bool(class_membership(x, ComplexClassKind(ClassKind.DG, ctx.everything)))
    gp = gp and all(is_gorenstein_projective(x.module(k), ctx) for k in x.support)
    return GPPrecover(identity_cx(x), zero, zero_chain_map(zero, x), gp)


def gp_resolution(m: Module, ctx: GorensteinContext, depth: int) -> Resolution:
    """ 0 -> M -> M -> 0 as a resolution by Gorenstein projectives of the given depth. """
    if depth < 1:
        raise MalformedInputError(f"resolution depth must be at least 1, got {depth}", "depth")
    pre = gp_precover(m, ctx)
    if not pre.certified:
        raise PreconditionError(f"{m} is not Gorenstein projective")
    zero = Module.zero(m.ring)
    maps = [pre.cover, zero_morphism(zero, m)] + [zero_morphism(zero, zero)] * (depth - 1)
    return resolution_from_maps(m, maps)


def gext(i: int, m: Module, n: Module, ctx: GorensteinContext) -> ExtGroup:
    """ GExt^i(M, N) from the Gorenstein projective resolution of M. """
    return ext_group(i, m, n, gp_resolution(m, ctx, i + 1))


def _cokernel_order(middle: Any, incl: Any, target: Any, homs: Any) -> int:
    """ |coker(Hom(G, T) -> Hom(K, T))| for a precover K -> G. """
    on_cover, on_kernel = homs(middle, target), homs(incl.src, target)
    return induced_map(on_cover, on_kernel, lambda g: g @ incl).cokernel().order


def complex_gext_order(x: ChainComplex, y: ChainComplex, ctx: GorensteinContext) -> int:
    """ |GExt^1(X, Y)| in complexes as the cokernel of Hom(G, Y) -> Hom(K, Y) along the precover. """
    pre = gp_precover_cx(x, ctx)
    if not pre.certified:
        raise PreconditionError("the complex does not lie in dwGProj~")
    return _cokernel_order(pre.cover.src, pre.inclusion, y, chain_map_group)


# |-----------------------------------------------------------------|
# |                          Verifiers                              |
# |-----------------------------------------------------------------|

def verify_gext(m: Module, n: Module, ctx: GorensteinContext, degrees: Sequence[int] = (1, 2)) -> VerificationReport:
    """
    GExt^1 three ways: derived from the GP resolution, as the Hom(GProj, -)-exact
    Baer classes and as the Hom(-, GInj)-exact ones; all vanish over Z/N.
    """
    report = VerificationReport("6.gext", {"N": ctx.ring.N, "M": m.to_json(), "N_mod": n.to_json()})
    report.hypotheses["gorenstein_projective"] = is_gorenstein_projective(m, ctx)
    report.hypotheses["gorenstein_injective"] = is_gorenstein_injective(n, ctx)
    derived = gext(1, m, n, ctx).order
    left = relative_ext_subgroup(1, m, n, ctx.everything).order
    right = relative_ext_subgroup(1, m, n, ctx.everything, right=True).order
    plain = ext_group(1, m, n).order
    report.left_order, report.right_order = derived, left
    report.notes.append(f"|Ext^1| = {plain}, |GExt^1| = {derived}")
    report.record("three_way", derived == left == right, {"derived": derived, "left": left, "right": right})
    for i in degrees:
        order = gext(i, m, n, ctx).order
        report.record("vanishes", order == 1, {"degree": i, "order": order})
    return report


def verify_dw_eq_dg(xs: Sequence[ChainComplex], bs: Sequence[ChainComplex],
                    ctx: GorensteinContext) -> VerificationReport:
    """
    Every X with Gorenstein projective components maps null-homotopically to
    every exact complex B with projective cycles. dg-membership is read off
    those maps and compared with dw-membership and with `class_membership`.
    """
    ring = ctx.ring
    if not bs:
        raise PreconditionError("no exact complexes with projective cycles to map into")
    report = VerificationReport("6.dwdg", {
        "N": ring.N, "X": [x.to_json() for x in xs], "B": [b.to_json() for b in bs]})
    dw = ComplexClassKind(ClassKind.DEGREEWISE, ctx.everything)
    dg = ComplexClassKind(ClassKind.DG, ctx.everything)
    w_class = ComplexClassKind(ClassKind.EXACT_CYCLES, ctx.W)
    for j, b in enumerate(bs):
        if not class_membership(b, w_class):
            raise PreconditionError(f"sample {j} is not an exact complex with projective cycles")
    checked = 0
    for k, x in enumerate(xs):
        in_dg = True
        for j, b in enumerate(bs):
            for f in chain_map_group(x, b).elements():
                checked += 1
                if not is_homotopic_to_zero(f):
                    in_dg = False
                    report.record("nullhomotopic", False, {"X": k, "B": j, "map": f.to_json()})
        report.record("dg_equals_dw", in_dg == class_membership(x, dw), {"X": k})
        report.record("dg_membership", class_membership(x, dg) == in_dg, {"X": k})
    report.left_order = report.right_order = checked
    return report


def verify_isosgorspheres(x: ChainComplex, m_mod: Module, m: int, ctx: GorensteinContext,
                          variant: int = 1) -> VerificationReport:
    """
    GExt^1(Q_m X, M) = GExt^1(X, S^m M) for exact X (variant 1), and
    GExt^1(M, Z_m Y) = GExt^1(S^m M, Y) on the dual instance (variant 2).
    Both sides come from the precover sequence of X and its image under Q_m;
    the Hom columns between the two four-term sequences are compared through
    the sphere adjunction and the grid is checked to commute.
    """
    if variant not in (1, 2):
        raise MalformedInputError(f"unknown variant {variant}", "variant")
    report = VerificationReport(f"6.spheres.{variant}", {
        "variant": variant, "N": ctx.ring.N, "X": x.to_json(), "M": m_mod.to_json(), "m": m})
    if variant == 2:
        report.notes.append("checked on the dual instance")
        x, m = dualize_cx(x), -m
    if not is_exact(x):
        raise PreconditionError("the complex is not exact")

    pre = gp_precover_cx(x, ctx)
    report.hypotheses["precover_certified"] = pre.certified
    w, c = pre.kernel, pre.cover.src
    p, incl = pre.cover, pre.inclusion
    q_x, q_c, q_w = (quotient(y, m)[0] for y in (x, c, w))
    q_p, q_incl = quotient_map(p, m), quotient_map(incl, m)
    report.record("precover_on_quotients", q_p.is_epi() and ctx.W.contains(q_w))

    # the three Hom columns related by the sphere adjunction
    target = sphere(m_mod, m)
    columns = ((x, q_x), (c, q_c), (w, q_w))
    for k, (y, q_y) in enumerate(columns):
        mods, cx = hom_group(q_y, m_mod), chain_map_group(y, target)
        images = {to_sphere(f, y, m).key() for f in mods.elements()}
        report.record("columns", len(images) == mods.order == cx.order, {"column": k})

    for f in hom_group(q_x, m_mod).elements():
        lhs = to_sphere(f @ q_p, c, m)
        report.record("grid", lhs == to_sphere(f, x, m) @ p, {"row": 0})
    for f in hom_group(q_c, m_mod).elements():
        lhs = to_sphere(f @ q_incl, w, m)
        report.record("grid", lhs == to_sphere(f, c, m) @ incl, {"row": 1})

    left = _cokernel_order(q_c, q_incl, m_mod, hom_group)
    right = complex_gext_order(x, target, ctx)
    report.left_order, report.right_order = left, right
    report.record("gext_iso", left == right and left == gext(1, q_x, m_mod, ctx).order,
                  {"left": left, "right": right})
    return report


def verify_gext_disks(x: ChainComplex, m_mod: Module, m: int, ctx: GorensteinContext) -> VerificationReport:
    """ GExt^1(X_m, M) = GExt^1(X, D^{m+1} M). """
    report = VerificationReport("6.disks", {"N": ctx.ring.N, "X": x.to_json(), "M": m_mod.to_json(), "m": m})
    left = gext(1, x.module(m), m_mod, ctx).order
    right = complex_gext_order(x, disk(m_mod, m + 1), ctx)
    report.left_order, report.right_order = left, right
    report.record("gext_iso", left == right, {"left": left, "right": right})
    return report
