"""
Extensions and their algebra. An `Extension` lives either among modules or
among chain complexes; relatedness, Baer sums, pushouts and pullbacks of
extensions and relative exactness are written once against an `Ambient`.
Ext groups are cocycles modulo coboundaries: for modules through free
resolutions, for complexes (degree 1) through a presentation by disks of
free modules.
"""
from dataclasses import dataclass
import functools
import itertools
import logging
from typing import Any, Callable, Iterator, Optional, Sequence

from homext.chaincx import (ChainComplex, ChainMap, ChainMapGroup, ComplexBiproduct, biproduct_cx,
                            chain_map_group, copair_from_cx, disk, dualize_cx, from_disk,
                            identity_cx, kernel_cx, lift_through_mono_cx, pair_into_cx, pullback_cx,
                            pushout_cx, sphere, zero_chain_map)
from homext.errors import MalformedInputError, PreconditionError, UnsupportedError
from homext.exactlin import (IntVector, Subquotient, diagonal, from_columns, hstack,
                             homology as group_homology, is_exact_at, zeros)
from homext.modcat import (FiniteGroup, GroupProduct, HomGroup, Module, Morphism, Ring, TestClass,
                           biproduct, copair_from, dualize, extend_along, group_elements,
                           group_generators, hom_group, identity, induced_map, kernel, lift_through,
                           pair_into, pullback, pushout, zero_morphism)

log = logging.getLogger("homext.extalg")

# Ext groups kept per (degree, C, D) and per pair of complexes
EXT_CACHE_SIZE = 512

type Arrow = Morphism | ChainMap
type Obj = Module | ChainComplex


# |-----------------------------------------------------------------|
# |                      Ambient categories                         |
# |-----------------------------------------------------------------|

@dataclass(frozen=True)
class Ambient:
    """ The operations extension algebra needs from a category. """
    name: str
    hom: Callable[[Any, Any], FiniteGroup]
    identity: Callable[[Any], Any]
    zero: Callable[[Any, Any], Any]
    biproduct: Callable[..., Any]
    pair_into: Callable[..., Any]
    copair_from: Callable[..., Any]
    pullback: Callable[[Any, Any], Any]
    pushout: Callable[[Any, Any], Any]
    dualize: Callable[[Any], Any]
    exact_at: Callable[[Any, Any], bool]


def _modules_exact_at(f: Morphism, g: Morphism) -> bool:
    if not (g @ f).is_zero():
        return False
    return is_exact_at(f.linear, g.linear)


def _complexes_exact_at(f: ChainMap, g: ChainMap) -> bool:
    degrees = set(f.degrees) | set(g.degrees)
    return all(_modules_exact_at(f.component(m), g.component(m)) for m in degrees)


MODULES = Ambient("modules", hom_group, identity, zero_morphism, biproduct, pair_into, copair_from,
                  pullback, pushout, dualize, _modules_exact_at)
COMPLEXES = Ambient("complexes", chain_map_group, identity_cx, zero_chain_map, biproduct_cx,
                    pair_into_cx, copair_from_cx, pullback_cx, pushout_cx, dualize_cx, _complexes_exact_at)


def ambient_of(f: Arrow) -> Ambient:
    match f:
        case Morphism():
            return MODULES
        case ChainMap():
            return COMPLEXES
    raise MalformedInputError(f"not a morphism or chain map: {type(f).__name__}", "maps")


# |-----------------------------------------------------------------|
# |                          Extensions                             |
# |-----------------------------------------------------------------|

@dataclass(eq=False)
class Extension:
    """
    An i-extension 0 -> D -> E^i -> ... -> E^1 -> C -> 0 of C by D, stored
    as its i + 1 maps from left to right. Exactness is checked on creation.
    """
    maps: tuple[Arrow, ...]

    def __post_init__(self):
        self.maps = tuple(self.maps)
        if len(self.maps) < 2:
            raise MalformedInputError("an extension needs at least two maps", "maps")
        if len({ambient_of(f).name for f in self.maps}) > 1:
            raise MalformedInputError("an extension cannot mix module maps and chain maps", "maps")
        for f, g in itertools.pairwise(self.maps):
            if f.dst != g.src:
                raise PreconditionError("consecutive maps of the extension are not composable")
        if not self.maps[0].is_mono():
            raise PreconditionError("the extension does not start with a monomorphism")
        if not self.maps[-1].is_epi():
            raise PreconditionError("the extension does not end with an epimorphism")
        for k, (f, g) in enumerate(itertools.pairwise(self.maps)):
            if not self.ambient.exact_at(f, g):
                raise PreconditionError(f"the extension is not exact at position {k + 1}")

    @staticmethod
    def split(c: Obj, d: Obj) -> 'Extension':
        """ 0 -> D -> D + C -> C -> 0. """
        amb = MODULES if isinstance(c, Module) else COMPLEXES
        s = amb.biproduct(d, c)
        return Extension((s.injections[0], s.projections[1]))

    @property
    def ambient(self) -> Ambient:
        return ambient_of(self.maps[0])

    @property
    def degree(self) -> int:
        return len(self.maps) - 1

    @property
    def left(self) -> Obj:
        """ D, the object the extension starts from. """
        return self.maps[0].src

    @property
    def right(self) -> Obj:
        """ C, the object the extension ends at. """
        return self.maps[-1].dst

    @property
    def alpha(self) -> Arrow:
        return self.maps[0]

    @property
    def beta(self) -> Arrow:
        return self.maps[-1]

    def middle(self, k: int = 1) -> Obj:
        """ E^k, counted from the right. """
        if not 1 <= k <= self.degree:
            raise PreconditionError(f"no middle term E^{k} in a {self.degree}-extension")
        return self.maps[self.degree + 1 - k].src

    def d(self, k: int) -> Arrow:
        """ E^k -> E^{k-1} with E^0 = C; d(i + 1) is the inclusion of D. """
        return self.maps[self.degree + 1 - k]

    def to_json(self):
        return {"degree": self.degree, "maps": [f.to_json() for f in self.maps]}

    @staticmethod
    def from_json(o: dict[str, Any], ring: Ring) -> 'Extension':
        maps = o.get("maps")
        if not isinstance(maps, list):
            raise MalformedInputError("expected a list of maps", "maps")
        parsed = [ChainMap.from_json(f, ring) if "components" in f else Morphism.from_json(f, ring)
                  for f in maps]
        if "degree" in o and o["degree"] != len(parsed) - 1:
            raise MalformedInputError(
                f"degree {o['degree']} does not match {len(parsed)} maps", "degree")
        return Extension(tuple(parsed))

    def __str__(self):
        if self.ambient is MODULES:
            terms = [self.left] + [self.middle(k) for k in range(self.degree, 0, -1)] + [self.right]
            return "0 -> " + " -> ".join(str(t) for t in terms) + " -> 0"
        return f"{self.degree}-extension of complexes"


def _check_same_ends(s: Extension, t: Extension):
    if s.ambient is not t.ambient:
        raise PreconditionError("extensions live in different categories")
    if s.degree != t.degree:
        raise PreconditionError(f"extensions of degrees {s.degree} and {t.degree}")
    if s.left != t.left or s.right != t.right:
        raise PreconditionError("extensions have different end terms")


def is_related(s: Extension, t: Extension) -> bool:
    """
    Whether maps E^k -> E'^k exist that, with the identities on C and D,
    make the ladder between the two sequences commute.
    """
    _check_same_ends(s, t)
    amb = s.ambient
    i = s.degree
    unknowns = GroupProduct(tuple(amb.hom(s.middle(k), t.middle(k)) for k in range(1, i + 1)))
    targets = GroupProduct(
        (amb.hom(s.middle(1), s.right),)
        + tuple(amb.hom(s.middle(k), t.middle(k - 1)) for k in range(2, i + 1))
        + (amb.hom(s.left, t.middle(i)),))

    def ladder(phis: tuple) -> tuple:
        out = [t.d(1) @ phis[0]]
        for k in range(2, i + 1):
            out.append(t.d(k) @ phis[k - 1] - phis[k - 2] @ s.d(k))
        out.append(phis[i - 1] @ s.alpha)
        return tuple(out)

    rhs = ((s.beta,)
           + tuple(amb.zero(s.middle(k), t.middle(k - 1)) for k in range(2, i + 1))
           + (t.alpha,))
    return induced_map(unknowns, targets, ladder).solve(targets.coords(rhs)) is not None


def is_equivalent(s: Extension, t: Extension) -> bool:
    """ Equivalence of short exact sequences. """
    if s.degree != 1:
        raise UnsupportedError("equivalence is decided for 1-extensions; use is_related")
    return is_related(s, t)


def baer_sum(s: Extension, t: Extension) -> Extension:
    """ Direct sum, pullback along the diagonal of C, pushout along the codiagonal of D. """
    _check_same_ends(s, t)
    if s.degree != 1:
        raise UnsupportedError("Baer sums are implemented for 1-extensions only")
    amb = s.ambient
    c, d = s.right, s.left

    sd = amb.biproduct(d, d)
    se = amb.biproduct(s.middle(), t.middle())
    sc = amb.biproduct(c, c)
    alpha = se.injections[0] @ s.alpha @ sd.projections[0] + se.injections[1] @ t.alpha @ sd.projections[1]
    beta = sc.injections[0] @ s.beta @ se.projections[0] + sc.injections[1] @ t.beta @ se.projections[1]

    diag = amb.pair_into(sc, amb.identity(c), amb.identity(c))
    pb = amb.pullback(beta, diag)
    alpha_p = pb.factor(alpha, amb.zero(sd.obj, c))

    codiag = amb.copair_from(sd, amb.identity(d), amb.identity(d))
    po = amb.pushout(alpha_p, codiag)
    beta_q = po.factor(pb.p_b, amb.zero(d, c))
    return Extension((po.i_b, beta_q))


def pushout_extension(s: Extension, g: Arrow) -> Extension:
    """ g_* S for g: D -> D'. """
    if g.src != s.left:
        raise PreconditionError("the map does not start at the left end of the extension")
    amb = s.ambient
    po = amb.pushout(s.alpha, g)
    nxt = s.maps[1]
    d = po.factor(nxt, amb.zero(g.dst, nxt.dst))
    return Extension((po.i_b, d) + s.maps[2:])


def pullback_extension(s: Extension, h: Arrow) -> Extension:
    """ h^* S for h: C' -> C. """
    if h.dst != s.right:
        raise PreconditionError("the map does not end at the right end of the extension")
    amb = s.ambient
    pb = amb.pullback(s.beta, h)
    prev = s.maps[-2]
    d = pb.factor(prev, amb.zero(prev.src, h.src))
    return Extension(s.maps[:-2] + (d, pb.p_b))


def dualize_extension(s: Extension) -> Extension:
    """ D(S): 0 -> D(C) -> D(E^1) -> ... -> D(E^i) -> D(D) -> 0. """
    return Extension(tuple(s.ambient.dualize(f) for f in reversed(s.maps)))


# |-----------------------------------------------------------------|
# |                     Resolutions and Ext                         |
# |-----------------------------------------------------------------|

@dataclass(eq=False)
class Resolution:
    """
    ... -> F_1 -> F_0 -> M -> 0. `maps[0]` is f_0: F_0 -> M and `maps[k]`
    is f_k: F_k -> F_{k-1}. `syzygies[k - 1]` holds the cover F_k -> K_k of
    the syzygy K_k = ker f_{k-1} and its inclusion, so f_k = incl o cover.
    """
    target: Module
    modules: list[Module]
    maps: list[Morphism]
    syzygies: list[tuple[Morphism, Morphism]]

    @property
    def depth(self) -> int:
        return len(self.modules) - 1

    def F(self, k: int) -> Module:
        if k > self.depth:
            raise PreconditionError(f"resolution of depth {self.depth} has no term F_{k}")
        return self.modules[k]

    def f(self, k: int) -> Morphism:
        if k > self.depth:
            raise PreconditionError(f"resolution of depth {self.depth} has no map f_{k}")
        return self.maps[k]

    @property
    def is_free(self) -> bool:
        return all(m.is_free for m in self.modules)

    def is_exact(self) -> bool:
        if not self.maps[0].is_epi():
            return False
        return all(_modules_exact_at(self.maps[k + 1], self.maps[k]) for k in range(self.depth))

    def key(self, depth: int) -> tuple:
        return (self.target, tuple(self.f(k).key() for k in range(depth + 1)))


def free_cover(m: Module, extra_rank: int = 0) -> Morphism:
    """ R^{rank + extra} -> M sending the first generators to the canonical ones. """
    n = m.rank + extra_rank
    matrix = zeros(m.rank, n)
    for j in range(m.rank):
        matrix[j, j] = 1
    return Morphism(Module.free(m.ring, n), m, matrix)


def free_resolution(m: Module, depth: int, extra_rank: int = 0) -> Resolution:
    """
    Free resolution with terms F_0, ..., F_depth: each syzygy is covered by
    the free module on its canonical generators (plus `extra_rank` idle
    generators, giving a non-minimal resolution).
    """
    if depth < 1:
        raise MalformedInputError(f"resolution depth must be at least 1, got {depth}", "depth")
    f0 = free_cover(m, extra_rank)
    modules, maps, syzygies = [f0.src], [f0], []
    for _ in range(depth):
        k, incl = kernel(maps[-1])
        cover = free_cover(k, extra_rank)
        modules.append(cover.src)
        maps.append(incl @ cover)
        syzygies.append((cover, incl))
    return Resolution(m, modules, maps, syzygies)


def resolution_from_maps(target: Module, maps: Sequence[Morphism]) -> Resolution:
    """ A resolution given by its maps f_0, f_1, ...; syzygy covers are the corestrictions. """
    maps = list(maps)
    syzygies = []
    for k in range(1, len(maps)):
        _, incl = kernel(maps[k - 1])
        cover = lift_through(incl, maps[k])
        if cover is None:
            raise PreconditionError(f"f_{k} does not land in the kernel of f_{k - 1}")
        syzygies.append((cover, incl))
    res = Resolution(target, [f.src for f in maps], maps, syzygies)
    if not res.is_exact():
        raise PreconditionError("the resolution is not exact")
    return res


def comparison_map(src: Resolution, dst: Resolution, h: Optional[Morphism] = None) -> list[Morphism]:
    """
    Maps c_k: F'_k -> F_k over h: M' -> M (identity by default) with
    f_k c_k = c_{k-1} f'_k. Needs a resolution by projectives as source.
    """
    if h is None:
        h = identity(src.target)
    if h.src != src.target or h.dst != dst.target:
        raise PreconditionError("the base map does not join the two resolved modules")
    out = []
    prev = h
    for k in range(min(src.depth, dst.depth) + 1):
        c = lift_through(dst.f(k), prev @ src.f(k))
        assert c is not None, f"comparison map does not lift at degree {k}"
        out.append(c)
        prev = c
    return out


class _CocycleClasses:
    """ A finite group of cocycles modulo coboundaries, as a `FiniteGroup` of `ExtElement`. """
    cochains: FiniteGroup
    sq: Subquotient

    @property
    def orders(self) -> tuple[int, ...]:
        return self.sq.factors

    @property
    def order(self) -> int:
        return self.sq.order

    def is_cocycle(self, c: Arrow) -> bool:
        raise NotImplementedError

    def key(self) -> tuple:
        raise NotImplementedError

    def element(self, coeffs: Sequence[int]) -> 'ExtElement':
        return ExtElement(self, self.cochains.element(self.sq.element(coeffs)))

    def coords(self, x: 'ExtElement | Arrow') -> IntVector:
        cocycle = x.cocycle if isinstance(x, ExtElement) else x
        return self.sq.coords(self.cochains.coords(cocycle))

    def elements(self) -> Iterator['ExtElement']:
        return group_elements(self)

    @property
    def generators(self) -> list['ExtElement']:
        return group_generators(self)

    def zero(self) -> 'ExtElement':
        return self.element([0] * len(self.orders))


@dataclass(eq=False)
class ExtGroup(_CocycleClasses):
    """ Ext^i(C, D) = ker Hom(f_{i+1}, D) / im Hom(f_i, D). """
    i: int
    C: Module
    D: Module
    res: Resolution
    cochains: HomGroup
    sq: Subquotient

    def is_cocycle(self, c: Morphism) -> bool:
        return (isinstance(c, Morphism) and c.src == self.res.F(self.i) and c.dst == self.D
                and (c @ self.res.f(self.i + 1)).is_zero())

    def key(self) -> tuple:
        return ("module", self.i, self.D, self.res.key(self.i + 1))

    def to_json(self):
        return {
            "degree": self.i,
            "C": self.C.to_json(),
            "D": self.D.to_json(),
            "orders": list(self.orders),
            "generators": [g.cocycle.to_json() for g in self.generators],
        }

    def __str__(self):
        return " + ".join(f"Z/{d}" for d in self.orders) if self.orders else "0"


@dataclass(eq=False)
class ExtElement:
    """ The class of a cocycle (g_S: F_i -> D for modules, K -> Y for complexes). """
    parent: ExtGroup | 'ComplexExtGroup'
    cocycle: Arrow

    def __post_init__(self):
        if not self.parent.is_cocycle(self.cocycle):
            raise PreconditionError("the representative is not a cocycle of this group")

    @functools.cached_property
    def coords(self) -> IntVector:
        return self.parent.coords(self.cocycle)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check_parent(self, other: 'ExtElement'):
        if self.parent.key() != other.parent.key():
            raise PreconditionError("classes from different Ext groups")

    def __eq__(self, other):
        return (isinstance(other, ExtElement) and self.parent.key() == other.parent.key()
                and self.coords == other.coords)

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: 'ExtElement') -> 'ExtElement':
        self._check_parent(other)
        return ExtElement(self.parent, self.cocycle + other.cocycle)

    def __sub__(self, other: 'ExtElement') -> 'ExtElement':
        self._check_parent(other)
        return ExtElement(self.parent, self.cocycle - other.cocycle)

    def __neg__(self) -> 'ExtElement':
        return ExtElement(self.parent, -self.cocycle)

    def to_json(self):
        return {"coords": list(self.coords), "cocycle": self.cocycle.to_json()}

    def __str__(self):
        return f"class {list(self.coords)}"


def ext_group(i: int, c: Module, d: Module, res: Optional[Resolution] = None) -> ExtGroup:
    """ Ext^i(C, D) from a resolution of C (the free resolution by default). """
    if i < 1:
        raise MalformedInputError(f"Ext degree must be at least 1, got {i}", "i")
    if res is None:
        return _default_ext_group(i, c, d)
    if res.target != c:
        raise PreconditionError("the resolution does not resolve C")
    if res.depth < i + 1:
        raise PreconditionError(f"Ext^{i} needs a resolution of depth {i + 1}")
    return _ext_group_from(i, c, d, res)


@functools.lru_cache(maxsize=EXT_CACHE_SIZE)
def _default_ext_group(i: int, c: Module, d: Module) -> ExtGroup:
    return _ext_group_from(i, c, d, free_resolution(c, i + 1))


def _ext_group_from(i: int, c: Module, d: Module, res: Resolution) -> ExtGroup:
    before, at, after = (hom_group(res.F(k), d) for k in (i - 1, i, i + 1))
    delta_in = induced_map(before, at, lambda g: g @ res.f(i))
    delta_out = induced_map(at, after, lambda g: g @ res.f(i + 1))
    return ExtGroup(i, c, d, res, at, group_homology(delta_in, delta_out))


def phi(s: Extension, res: Optional[Resolution] = None) -> ExtElement:
    """
    The cocycle class of an extension: lift f_0 through E^1 -> C, continue
    the comparison down the sequence and land in D with g_S.
    """
    if s.ambient is COMPLEXES:
        return complex_phi(s)
    i = s.degree
    group = ext_group(i, s.right, s.left, res)
    res = group.res
    g = lift_through(s.d(1), res.f(0))
    assert g is not None, "free cover does not lift through an epimorphism"
    for k in range(1, i + 1):
        g = lift_through(s.d(k + 1), g @ res.f(k))
        assert g is not None, f"comparison does not lift at step {k}"
    return ExtElement(group, g)


def psi(e: ExtElement) -> Extension:
    """ The extension realizing a class: push out F_0 along the cocycle restricted to the syzygy. """
    if isinstance(e.parent, ComplexExtGroup):
        return complex_psi(e)
    group = e.parent
    if group.i != 1:
        raise UnsupportedError("only classes of degree 1 are realized by extensions")
    res = group.res
    cover, incl = res.syzygies[0]
    h = extend_along(cover, e.cocycle)
    assert h is not None, "cocycle does not vanish on the second syzygy"
    po = pushout(incl, h)
    beta = po.factor(res.f(0), zero_morphism(group.D, group.C))
    return Extension((po.i_b, beta))


def push_class(e: ExtElement, g: Morphism) -> ExtElement:
    """ g_* on Ext^i(C, D) for g: D -> D'. """
    group = e.parent
    if not isinstance(group, ExtGroup):
        raise UnsupportedError("push_class acts on module Ext groups")
    target = ext_group(group.i, group.C, g.dst, group.res)
    return ExtElement(target, g @ e.cocycle)


def pull_class(e: ExtElement, h: Morphism, res: Optional[Resolution] = None) -> ExtElement:
    """ h^* on Ext^i(C, D) for h: C' -> C, through a comparison map of resolutions. """
    group = e.parent
    if not isinstance(group, ExtGroup):
        raise UnsupportedError("pull_class acts on module Ext groups")
    target = ext_group(group.i, h.src, group.D, res)
    maps = comparison_map(target.res, group.res, h)
    return ExtElement(target, e.cocycle @ maps[group.i])


def transport(e: ExtElement, res: Resolution) -> ExtElement:
    """ The same class computed from another resolution of C. """
    return pull_class(e, identity(e.parent.C), res)


# |-----------------------------------------------------------------|
# |                     Relative exactness                          |
# |-----------------------------------------------------------------|

def hom_sequence_is_exact(t: Obj, s: Extension) -> bool:
    """ Exactness of 0 -> Hom(T, D) -> Hom(T, E^i) -> ... -> Hom(T, C) -> 0. """
    amb = s.ambient
    objs = [s.left] + [s.middle(k) for k in range(s.degree, 0, -1)] + [s.right]
    groups = [amb.hom(t, o) for o in objs]
    maps = [induced_map(groups[k], groups[k + 1], lambda h, f=f: f @ h) for k, f in enumerate(s.maps)]
    if not maps[0].is_injective() or not maps[-1].is_surjective():
        return False
    return all(is_exact_at(a, b) for a, b in itertools.pairwise(maps))


def _window(s: Extension) -> tuple[int, int]:
    objs = [f.src for f in s.maps] + [s.right]
    return min(x.lo for x in objs), max(x.hi for x in objs)


def _tests_for(s: Extension, f: TestClass | Sequence[Obj]) -> list[Obj]:
    if not isinstance(f, TestClass):
        return list(f)
    if s.ambient is MODULES:
        return f.test_modules()
    return degreewise_test_family(f, *_window(s))


def is_left_relative(s: Extension, f: TestClass | Sequence[Obj]) -> bool:
    """
    Hom(F, -)-exactness. For complexes a `TestClass` stands for the
    degreewise family built from it; an explicit list of test objects is
    used as given.
    """
    return all(hom_sequence_is_exact(t, s) for t in _tests_for(s, f))


def is_right_relative(s: Extension, g: TestClass | Sequence[Obj]) -> bool:
    """ Hom(-, G)-exactness, decided on D(S) against D(G). """
    dual = dualize_extension(s)
    if isinstance(g, TestClass):
        return is_left_relative(dual, g)
    return is_left_relative(dual, [s.ambient.dualize(t) for t in g])


@dataclass(eq=False)
class RelativeSubgroup:
    """ The classes of an Ext^1 group realized by relative extensions. """
    group: ExtGroup | 'ComplexExtGroup'
    members: list[ExtElement]

    @functools.cached_property
    def coords(self) -> frozenset[IntVector]:
        return frozenset(e.coords for e in self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def contains(self, e: ExtElement) -> bool:
        return e.coords in self.coords

    def invariants(self) -> tuple[int, ...]:
        orders = self.group.orders
        rel = diagonal(orders)
        gens = from_columns([list(c) for c in self.coords], len(orders))
        return Subquotient.of(hstack(gens, rel), rel).factors

    def check_axioms(self):
        zero = tuple(0 for _ in self.group.orders)
        assert zero in self.coords, "relative classes miss the split class"
        orders = self.group.orders
        for a in self.coords:
            for b in self.coords:
                diff = tuple((x - y) % o for x, y, o in zip(a, b, orders))
                assert diff in self.coords, "relative classes are not closed under differences"

    def is_subgroup_of(self, other: 'RelativeSubgroup') -> bool:
        return self.coords <= other.coords


def relative_members(group: ExtGroup | 'ComplexExtGroup', f: TestClass | Sequence[Obj],
                     right: bool = False) -> RelativeSubgroup:
    """ Realizes every class and keeps the Hom(F, -)-exact ones (Hom(-, F)-exact with `right`). """
    test = is_right_relative if right else is_left_relative
    members = [e for e in group.elements() if test(psi(e), f)]
    sub = RelativeSubgroup(group, members)
    sub.check_axioms()
    log.debug(f"relative subgroup of order {sub.order} in a group of order {group.order}")
    return sub


def relative_ext_subgroup(i: int, c: Module, d: Module, f: TestClass, right: bool = False) -> RelativeSubgroup:
    if i != 1:
        raise UnsupportedError("relative subgroups are enumerated in degree 1 only")
    return relative_members(ext_group(1, c, d), f, right)


def is_extension_closed(f: TestClass) -> bool:
    """
    Every middle term of every extension between indecomposables of F lies in F.

    Pairs of indecomposables are enough for the classes of Z/N-modules: F is
    additive and made of summands Z/p^a, and extensions between different
    primes split. For a prime with p^n || N, let s be the smallest exponent in F.
    Extensions of Z/p^s by itself have middle terms Z/p^(2s-y) + Z/p^y for
    every y from max(0, 2s-n) to s. So a pairwise closed F holds either no
    Z/p^a, only Z/p^n, or every Z/p^a, and each of these is closed under
    all extensions.
    """
    mods = f.test_modules()
    for a, c in itertools.product(mods, mods):
        for e in ext_group(1, c, a).elements():
            mid = psi(e).middle()
            if not f.contains(mid):
                log.debug(f"{f} is not closed under extensions: {a} -> {mid} -> {c}")
                return False
    return True


@dataclass(eq=False)
class PrecoverCertificate:
    """ A free cover with its kernel and |Ext^1(R, K)| for the generators R of the free class. """
    cover: Morphism
    kernel: Module
    inclusion: Morphism
    ext_orders: dict[str, int]

    @property
    def ok(self) -> bool:
        return self.cover.is_epi() and all(o == 1 for o in self.ext_orders.values())


def special_precover_free(m: Module) -> tuple[Morphism, PrecoverCertificate]:
    cover = free_cover(m)
    k, incl = kernel(cover)
    orders = {str(g): ext_group(1, g, k).order for g in TestClass.free(m.ring).generators}
    return cover, PrecoverCertificate(cover, k, incl, orders)


# |-----------------------------------------------------------------|
# |                      Ext^1 of complexes                         |
# |-----------------------------------------------------------------|

@dataclass(eq=False)
class ProjectivePresentation:
    """ 0 -> K -> P -> X -> 0 with P the sum of the disks D^k(R^{n_k}) covering X_k. """
    target: ChainComplex
    cover: ChainComplex
    epi: ChainMap
    kernel: ChainComplex
    incl: ChainMap
    _sum: ComplexBiproduct
    # (degree, free cover of the module in that degree)
    _pieces: tuple[tuple[int, Morphism], ...]

    def lift(self, beta: ChainMap) -> ChainMap:
        """ A chain map L: P -> E with beta o L = epi, built disk by disk. """
        parts = []
        for k, c in self._pieces:
            l = lift_through(beta.component(k), c)
            if l is None:
                raise PreconditionError("the chain map is not an epimorphism")
            parts.append(from_disk(l, beta.src, k))
        return copair_from_cx(self._sum, *parts)


def projective_presentation(x: ChainComplex) -> ProjectivePresentation:
    pieces = tuple((k, free_cover(x.module(k))) for k in x.support)
    s = biproduct_cx(*(disk(c.src, k) for k, c in pieces))
    epi = copair_from_cx(s, *(from_disk(c, x, k) for k, c in pieces))
    kern, incl = kernel_cx(epi)
    return ProjectivePresentation(x, s.obj, epi, kern, incl, s, pieces)


@dataclass(eq=False)
class ComplexExtGroup(_CocycleClasses):
    """ Ext^1_Ch(X, Y) = Hom_Ch(K, Y) modulo the restrictions of Hom_Ch(P, Y). """
    X: ChainComplex
    Y: ChainComplex
    presentation: ProjectivePresentation
    cochains: ChainMapGroup
    sq: Subquotient

    i = 1

    def is_cocycle(self, c: ChainMap) -> bool:
        return isinstance(c, ChainMap) and c.src == self.presentation.kernel and c.dst == self.Y

    def key(self) -> tuple:
        return ("complex", self.X.key(), self.Y.key())

    def to_json(self):
        return {"X": self.X.to_json(), "Y": self.Y.to_json(), "orders": list(self.orders)}

    def __str__(self):
        return " + ".join(f"Z/{d}" for d in self.orders) if self.orders else "0"


def complex_ext_group(x: ChainComplex, y: ChainComplex) -> ComplexExtGroup:
    if x.ring != y.ring:
        raise PreconditionError("complexes over different rings")
    return _complex_ext_group(x, y)


@functools.lru_cache(maxsize=EXT_CACHE_SIZE)
def _complex_ext_group(x: ChainComplex, y: ChainComplex) -> ComplexExtGroup:
    pres = projective_presentation(x)
    on_cover = chain_map_group(pres.cover, y)
    on_kernel = chain_map_group(pres.kernel, y)
    restrict = induced_map(on_cover, on_kernel, lambda g: g @ pres.incl)
    return ComplexExtGroup(x, y, pres, on_kernel, restrict.cokernel())


def complex_phi(s: Extension) -> ExtElement:
    """ Lift P -> X through E -> X, restrict to K and factor through Y -> E. """
    if s.degree != 1:
        raise UnsupportedError("complex Ext is computed in degree 1 only")
    group = complex_ext_group(s.right, s.left)
    pres = group.presentation
    g = lift_through_mono_cx(s.alpha, pres.lift(s.beta) @ pres.incl)
    assert g is not None, "restricted lift does not land in the subcomplex"
    return ExtElement(group, g)


def complex_psi(e: ExtElement) -> Extension:
    """ Push out K -> P along the cocycle K -> Y. """
    group = e.parent
    pres = group.presentation
    po = pushout_cx(pres.incl, e.cocycle)
    beta = po.factor(pres.epi, zero_chain_map(group.Y, group.X))
    return Extension((po.i_b, beta))


# |-----------------------------------------------------------------|
# |                  Test families of complexes                     |
# |-----------------------------------------------------------------|

def degreewise_test_family(f: TestClass, lo: int, hi: int) -> list[ChainComplex]:
    """
    Bounded complexes with components in F meeting the degrees lo..hi:
    spheres, disks and two-term complexes on the indecomposables of F.
    """
    mods = f.test_modules()
    tests: list[ChainComplex] = []
    for k in range(lo, hi + 2):
        for g in mods:
            if k <= hi:
                tests.append(sphere(g, k))
            tests.append(disk(g, k))
        for g, h in itertools.product(mods, mods):
            for a in hom_group(g, h).generators:
                if not a.is_zero() and not a.is_iso():
                    tests.append(ChainComplex(f.ring, k - 1, k, (h, g), (a,)))
    return tests


def exact_test_family(f: TestClass, lo: int, hi: int) -> list[ChainComplex]:
    """
    Bounded exact complexes with cycles in F meeting the degrees lo..hi:
    disks on the indecomposables and the three-term complexes of nonsplit
    extensions between them whose middle term lies in F.
    """
    mods = f.test_modules()
    tests: list[ChainComplex] = [disk(g, k) for k in range(lo, hi + 2) for g in mods]
    for a, c in itertools.product(mods, mods):
        for e in ext_group(1, c, a).elements():
            if e.is_zero:
                continue
            s = psi(e)
            if not f.contains(s.middle()):
                continue
            for k in range(lo, hi + 3):
                tests.append(ChainComplex(f.ring, k - 2, k, (c, s.middle(), a), (s.beta, s.alpha)))
    return tests


def ext_window(s: Extension) -> tuple[int, int]:
    """ Degrees spanned by the terms of a complex extension. """
    return _window(s)
