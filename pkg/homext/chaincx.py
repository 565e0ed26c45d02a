"""
Bounded chain complexes over Z/N with differentials lowering the degree,
chain maps, the component / cycle / quotient functors, disks and spheres,
groups of chain maps, homotopies and the classes dwF~, F~ and dgF~.
"""
from dataclasses import dataclass
from enum import Enum
import functools
import logging
from typing import Any, Iterator, Optional, Sequence

from homext.errors import MalformedInputError, PreconditionError
from homext.exactlin import IntVector, LinearMap, Subquotient, homology as group_homology
from homext.modcat import (Biproduct, GroupProduct, HomGroup, Module, Morphism, Ring, TestClass,
                           biproduct, cokernel, dualize, extend_along, group_elements,
                           group_generators, hom_group, identity, image, induced_map, kernel,
                           lift_through, zero_morphism)

log = logging.getLogger("homext.chaincx")


@dataclass(eq=False)
class ChainComplex:
    """
    X_lo <- X_{lo+1} <- ... <- X_hi, zero outside [lo, hi]. `diffs[i]` is the
    differential from degree lo+i+1 to degree lo+i.
    """
    ring: Ring
    lo: int
    hi: int
    modules: tuple[Module, ...]
    diffs: tuple[Morphism, ...]

    def __post_init__(self):
        self.modules = tuple(self.modules)
        self.diffs = tuple(self.diffs)
        if self.lo > self.hi:
            raise MalformedInputError(f"empty support [{self.lo}, {self.hi}]", "lo")
        if len(self.modules) != self.hi - self.lo + 1:
            raise MalformedInputError(
                f"expected {self.hi - self.lo + 1} modules, got {len(self.modules)}", "modules")
        if len(self.diffs) != self.hi - self.lo:
            raise MalformedInputError(
                f"expected {self.hi - self.lo} differentials, got {len(self.diffs)}", "diffs")
        for i, d in enumerate(self.diffs):
            if d.src != self.modules[i + 1] or d.dst != self.modules[i]:
                raise MalformedInputError(
                    f"differential from degree {self.lo + i + 1} has the wrong ends", "diffs")
        for m in range(self.lo + 2, self.hi + 1):
            if not (self.diff(m - 1) @ self.diff(m)).is_zero():
                raise PreconditionError(f"the square of the differential at degree {m} is not zero")

    @staticmethod
    def zero(ring: Ring) -> 'ChainComplex':
        return ChainComplex(ring, 0, 0, (Module.zero(ring),), ())

    @staticmethod
    def build(ring: Ring, lo: int, modules: Sequence[Module],
              diffs: Sequence[Morphism] = ()) -> 'ChainComplex':
        """ A complex from its modules; missing differentials are zero. """
        modules = list(modules)
        diffs = list(diffs) or [zero_morphism(modules[i + 1], modules[i]) for i in range(len(modules) - 1)]
        return ChainComplex(ring, lo, lo + len(modules) - 1, tuple(modules), tuple(diffs))

    @property
    def support(self) -> range:
        return range(self.lo, self.hi + 1)

    def module(self, m: int) -> Module:
        if self.lo <= m <= self.hi:
            return self.modules[m - self.lo]
        return Module.zero(self.ring)

    def diff(self, m: int) -> Morphism:
        """ The differential X_m -> X_{m-1}. """
        if self.lo < m <= self.hi:
            return self.diffs[m - self.lo - 1]
        return zero_morphism(self.module(m), self.module(m - 1))

    @property
    def is_zero(self) -> bool:
        return all(x.is_zero for x in self.modules)

    def nonzero_support(self) -> range:
        degrees = [m for m in self.support if not self.module(m).is_zero]
        return range(min(degrees), max(degrees) + 1) if degrees else range(0)

    def key(self) -> tuple:
        s = self.nonzero_support()
        return tuple((m, self.module(m), self.diff(m).key() if m - 1 in s else None) for m in s)

    def __eq__(self, other):
        return isinstance(other, ChainComplex) and self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def restrict(self, lo: int, hi: int) -> 'ChainComplex':
        """ The same complex with support [lo, hi] (which must cover every nonzero module). """
        s = self.nonzero_support()
        if s and (s.start < lo or s.stop - 1 > hi):
            raise PreconditionError(f"support [{lo}, {hi}] drops nonzero modules")
        return ChainComplex(self.ring, lo, hi, tuple(self.module(m) for m in range(lo, hi + 1)),
                            tuple(self.diff(m) for m in range(lo + 1, hi + 1)))

    def order(self) -> int:
        out = 1
        for x in self.modules:
            out *= x.order
        return out

    def to_json(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "modules": [x.to_json() for x in self.modules],
            "diffs": [d.matrix.tolist() for d in self.diffs],
        }

    @staticmethod
    def from_json(o: dict[str, Any], ring: Ring) -> 'ChainComplex':
        for key in ("lo", "hi", "modules"):
            if key not in o:
                raise MalformedInputError("missing key", key)
        modules = [x if isinstance(x, Module) else Module.from_json(x, ring) for x in o["modules"]]
        diffs = o.get("diffs", [])
        if len(diffs) != len(modules) - 1:
            raise MalformedInputError(f"expected {len(modules) - 1} differentials", "diffs")
        maps = [Morphism(modules[i + 1], modules[i], d) for i, d in enumerate(diffs)]
        return ChainComplex(ring, o["lo"], o["hi"], tuple(modules), tuple(maps))

    def __str__(self):
        parts = [f"[{m}] {self.module(m)}" for m in reversed(self.support)]
        return " -> ".join(parts)


@dataclass(eq=False)
class ChainMap:
    """ Components f_m: X_m -> Y_m commuting with the differentials. """
    src: ChainComplex
    dst: ChainComplex
    components: dict[int, Morphism]

    def __post_init__(self):
        comps = {}
        for m in self.degrees:
            f = self.components.get(m)
            if f is None:
                f = zero_morphism(self.src.module(m), self.dst.module(m))
            if f.src != self.src.module(m) or f.dst != self.dst.module(m):
                raise MalformedInputError(f"component in degree {m} has the wrong ends", "components")
            comps[m] = f
        for m, f in self.components.items():
            if m not in comps and not f.is_zero():
                raise MalformedInputError(f"nonzero component in degree {m} outside the supports", "components")
        self.components = comps
        for m in range(self.degrees.start, self.degrees.stop + 1):
            lhs = self.dst.diff(m) @ self.component(m)
            rhs = self.component(m - 1) @ self.src.diff(m)
            if lhs != rhs:
                raise MalformedInputError(f"square at degree {m} does not commute", "components")

    @functools.cached_property
    def degrees(self) -> range:
        lo = min(self.src.lo, self.dst.lo)
        hi = max(self.src.hi, self.dst.hi)
        return range(lo, hi + 1)

    def component(self, m: int) -> Morphism:
        f = self.components.get(m)
        return f if f is not None else zero_morphism(self.src.module(m), self.dst.module(m))

    def key(self) -> tuple:
        return (self.src.key(), self.dst.key(),
                tuple(self.component(m).key() for m in self.degrees if not self.component(m).is_zero()))

    def __eq__(self, other):
        if not isinstance(other, ChainMap) or self.src != other.src or self.dst != other.dst:
            return False
        degrees = set(self.degrees) | set(other.degrees)
        return all(self.component(m) == other.component(m) for m in degrees)

    def __hash__(self):
        return hash(self.key())

    def __matmul__(self, other: 'ChainMap') -> 'ChainMap':
        if other.dst != self.src:
            raise PreconditionError("chain maps are not composable")
        degrees = set(self.degrees) | set(other.degrees)
        return ChainMap(other.src, self.dst, {m: self.component(m) @ other.component(m) for m in degrees})

    def _combine(self, other: 'ChainMap', sign: int) -> 'ChainMap':
        if self.src != other.src or self.dst != other.dst:
            raise PreconditionError("chain maps are not parallel")
        return ChainMap(self.src, self.dst, {
            m: self.component(m) + sign * other.component(m) for m in self.degrees})

    def __add__(self, other: 'ChainMap') -> 'ChainMap':
        return self._combine(other, 1)

    def __sub__(self, other: 'ChainMap') -> 'ChainMap':
        return self._combine(other, -1)

    def __neg__(self) -> 'ChainMap':
        return ChainMap(self.src, self.dst, {m: -f for m, f in self.components.items()})

    def __rmul__(self, c: int) -> 'ChainMap':
        return ChainMap(self.src, self.dst, {m: c * f for m, f in self.components.items()})

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components.values())

    def is_mono(self) -> bool:
        return all(f.is_mono() for f in self.components.values())

    def is_epi(self) -> bool:
        return all(f.is_epi() for f in self.components.values())

    def to_json(self):
        return {
            "from": self.src.to_json(),
            "to": self.dst.to_json(),
            "components": {str(m): f.matrix.tolist() for m, f in self.components.items() if not f.is_zero()},
        }

    @staticmethod
    def from_json(o: dict[str, Any], ring: Ring) -> 'ChainMap':
        src = o["from"] if isinstance(o["from"], ChainComplex) else ChainComplex.from_json(o["from"], ring)
        dst = o["to"] if isinstance(o["to"], ChainComplex) else ChainComplex.from_json(o["to"], ring)
        comps = {}
        for k, matrix in o.get("components", {}).items():
            m = int(k)
            comps[m] = Morphism(src.module(m), dst.module(m), matrix)
        return ChainMap(src, dst, comps)


def identity_cx(x: ChainComplex) -> ChainMap:
    return ChainMap(x, x, {m: identity(x.module(m)) for m in x.support})


def zero_chain_map(x: ChainComplex, y: ChainComplex) -> ChainMap:
    return ChainMap(x, y, {})


# |-----------------------------------------------------------------|
# |                    Functors of a single degree                  |
# |-----------------------------------------------------------------|

def component(x: ChainComplex, m: int) -> Module:
    return x.module(m)


def cycles(x: ChainComplex, m: int) -> tuple[Module, Morphism]:
    """ Z_m = ker(d_m) with its inclusion into X_m. """
    return kernel(x.diff(m))


def boundaries(x: ChainComplex, m: int) -> tuple[Module, Morphism]:
    """ B_m = im(d_{m+1}) with its inclusion into X_m. """
    b, mono, _ = image(x.diff(m + 1))
    return b, mono


def quotient(x: ChainComplex, m: int) -> tuple[Module, Morphism]:
    """ Q_m = X_m / B_m with the projection from X_m. """
    return cokernel(x.diff(m + 1))


def homology(x: ChainComplex, m: int) -> Module:
    """ H_m = Z_m / B_m. """
    sq = group_homology(x.diff(m + 1).linear, x.diff(m).linear)
    return Module(x.ring, sq.factors)


def cycles_map(f: ChainMap, m: int) -> Morphism:
    """ Z_m(f), induced by the universal property of kernels. """
    _, kx = cycles(f.src, m)
    _, ky = cycles(f.dst, m)
    h = lift_through(ky, f.component(m) @ kx)
    assert h is not None, "chain map does not preserve cycles"
    return h


def quotient_map(f: ChainMap, m: int) -> Morphism:
    """ Q_m(f), induced by the universal property of cokernels. """
    _, qx = quotient(f.src, m)
    _, qy = quotient(f.dst, m)
    h = extend_along(qx, qy @ f.component(m))
    assert h is not None, "chain map does not preserve boundaries"
    return h


def cycle_sequence(x: ChainComplex, m: int) -> tuple[Morphism, Morphism]:
    """
    For an exact complex, 0 -> Z_m -> X_m -> Z_{m-1} -> 0 with the
    corestriction of d_m as second map.
    """
    if not is_exact(x):
        raise PreconditionError("the cycle sequence needs an exact complex")
    _, k = cycles(x, m)
    _, k_below = cycles(x, m - 1)
    d = lift_through(k_below, x.diff(m))
    assert d is not None
    return k, d


def disk(c: Module, m: int) -> ChainComplex:
    """ C in degrees m and m-1 joined by the identity. """
    return ChainComplex(c.ring, m - 1, m, (c, c), (identity(c),))


def sphere(c: Module, m: int) -> ChainComplex:
    """ C concentrated in degree m. """
    return ChainComplex(c.ring, m, m, (c,), ())


def shift(x: ChainComplex, k: int) -> ChainComplex:
    """ The same complex moved up by k degrees (no sign change). """
    return ChainComplex(x.ring, x.lo + k, x.hi + k, x.modules, x.diffs)


def disk_map(g: Morphism, m: int) -> ChainMap:
    """ D^m(g): D^m(C) -> D^m(C'). """
    return ChainMap(disk(g.src, m), disk(g.dst, m), {m: g, m - 1: g})


def sphere_map(g: Morphism, m: int) -> ChainMap:
    """ S^m(g): S^m(C) -> S^m(C'). """
    return ChainMap(sphere(g.src, m), sphere(g.dst, m), {m: g})


# The four adjunction bijections between module maps and chain maps.

def to_disk(f: Morphism, x: ChainComplex, m: int) -> ChainMap:
    """ f: X_{m-1} -> C gives X -> D^m(C) with components f d_m and f. """
    return ChainMap(x, disk(f.dst, m), {m: f @ x.diff(m), m - 1: f})


def from_disk(f: Morphism, y: ChainComplex, m: int) -> ChainMap:
    """ f: C -> Y_m gives D^m(C) -> Y with components f and d_m f. """
    return ChainMap(disk(f.src, m), y, {m: f, m - 1: y.diff(m) @ f})


def to_sphere(f: Morphism, x: ChainComplex, m: int) -> ChainMap:
    """ f: Q_m(X) -> C gives X -> S^m(C) through the projection X_m -> Q_m(X). """
    _, q = quotient(x, m)
    return ChainMap(x, sphere(f.dst, m), {m: f @ q})


def from_sphere(f: Morphism, y: ChainComplex, m: int) -> ChainMap:
    """ f: C -> Z_m(Y) gives S^m(C) -> Y through the cycle inclusion. """
    _, k = cycles(y, m)
    return ChainMap(sphere(f.src, m), y, {m: k @ f})


# |-----------------------------------------------------------------|
# |                       Chain map groups                          |
# |-----------------------------------------------------------------|

def _overlap(x: ChainComplex, y: ChainComplex, offset: int = 0) -> range:
    """ Degrees m where both X_m and Y_{m+offset} can be nonzero. """
    return range(max(x.lo, y.lo - offset), min(x.hi, y.hi - offset) + 1)


def _graded_homs(x: ChainComplex, y: ChainComplex, offset: int) -> tuple[range, GroupProduct]:
    degrees = _overlap(x, y, offset)
    return degrees, GroupProduct(tuple(hom_group(x.module(m), y.module(m + offset)) for m in degrees))


@dataclass(eq=False)
class ChainMapGroup:
    """ Hom_Ch(X, Y) as the kernel of the commutation defect. """
    src: ChainComplex
    dst: ChainComplex
    degrees: range
    homs: GroupProduct
    sq: Subquotient

    @property
    def orders(self) -> tuple[int, ...]:
        return self.sq.factors

    @property
    def order(self) -> int:
        return self.sq.order

    def element(self, coeffs: Sequence[int]) -> ChainMap:
        raw = self.sq.element(coeffs)
        parts = self.homs.element(raw)
        return ChainMap(self.src, self.dst, dict(zip(self.degrees, parts)))

    def coords(self, f: ChainMap) -> IntVector:
        if f.src != self.src or f.dst != self.dst:
            raise PreconditionError("chain map from another Hom group")
        return self.sq.coords(self.homs.coords(tuple(f.component(m) for m in self.degrees)))

    @property
    def generators(self) -> list[ChainMap]:
        return group_generators(self)

    def elements(self) -> Iterator[ChainMap]:
        return group_elements(self)

    def zero(self) -> ChainMap:
        return zero_chain_map(self.src, self.dst)


def chain_map_group(x: ChainComplex, y: ChainComplex) -> ChainMapGroup:
    if x.ring != y.ring:
        raise PreconditionError("complexes over different rings")
    degrees, homs = _graded_homs(x, y, 0)
    targets, defects = _graded_homs(x, y, -1)

    def defect(parts: tuple[Morphism, ...]) -> tuple[Morphism, ...]:
        f = dict(zip(degrees, parts))

        def comp(m: int) -> Morphism:
            return f.get(m) or zero_morphism(x.module(m), y.module(m))

        return tuple(y.diff(m) @ comp(m) - comp(m - 1) @ x.diff(m) for m in targets)

    lm = induced_map(homs, defects, defect)
    return ChainMapGroup(x, y, degrees, homs, lm.kernel())


def is_homotopic_to_zero(f: ChainMap) -> bool:
    """ Whether f = d s + s d for some family s_m: X_m -> Y_{m+1}. """
    x, y = f.src, f.dst
    degrees, homs = _graded_homs(x, y, 0)
    if not degrees:
        return True
    h_degrees, homotopies = _graded_homs(x, y, 1)
    if not h_degrees:
        return f.is_zero()

    def assemble(parts: tuple[Morphism, ...]) -> tuple[Morphism, ...]:
        s = dict(zip(h_degrees, parts))

        def at(m: int) -> Morphism:
            return s.get(m) or zero_morphism(x.module(m), y.module(m + 1))

        return tuple(y.diff(m + 1) @ at(m) + at(m - 1) @ x.diff(m) for m in degrees)

    lm = induced_map(homotopies, homs, assemble)
    return lm.solve(homs.coords(tuple(f.component(m) for m in degrees))) is not None


# |-----------------------------------------------------------------|
# |                    Exactness and classes                        |
# |-----------------------------------------------------------------|

def is_exact(x: ChainComplex) -> bool:
    return all(group_homology(x.diff(m + 1).linear, x.diff(m).linear).order == 1 for m in x.support)


def hom_complex_is_exact(t: Module, x: ChainComplex) -> bool:
    """ Exactness of the complex of groups Hom(T, X). """
    groups = {m: hom_group(t, x.module(m)) for m in range(x.lo - 1, x.hi + 2)}

    def post(m: int) -> LinearMap:
        d = x.diff(m)
        return induced_map(groups[m], groups[m - 1], lambda h: d @ h)

    return all(group_homology(post(m + 1), post(m)).order == 1 for m in x.support)


def is_hom_F_exact(x: ChainComplex, f: TestClass) -> bool:
    """ Hom(F, X) exact for every indecomposable of the class. """
    return all(hom_complex_is_exact(t, x) for t in f.test_modules())


class ClassKind(Enum):
    DEGREEWISE = "dwF"
    EXACT_CYCLES = "F"
    DG = "dgF"


@dataclass(frozen=True)
class ComplexClassKind:
    """ One of dwF~, F~ or dgF~ for a generator class F. """
    kind: ClassKind
    F: TestClass


def class_membership(x: ChainComplex, cls: ComplexClassKind) -> Optional[bool]:
    """
    dwF~: every X_m in F. F~: exact with every Z_m in F. dgF~ is decided only
    for the Gorenstein-projective class (all modules over Z/N), where it
    coincides with dwF~; otherwise the answer is None (undecidable here).
    """
    match cls.kind:
        case ClassKind.DEGREEWISE:
            return all(cls.F.contains(x.module(m)) for m in x.support)
        case ClassKind.EXACT_CYCLES:
            return is_exact(x) and all(cls.F.contains(cycles(x, m)[0]) for m in x.support)
        case ClassKind.DG:
            everything = TestClass.everything(x.ring)
            if everything.is_subclass_of(cls.F):
                return all(cls.F.contains(x.module(m)) for m in x.support)
            log.info(f"dg membership for {cls.F} is undecidable here")
            return None
    raise ValueError(f"unknown class kind {cls.kind}")


# |-----------------------------------------------------------------|
# |                Degreewise constructions on complexes            |
# |-----------------------------------------------------------------|

def kernel_cx(f: ChainMap) -> tuple[ChainComplex, ChainMap]:
    x = f.src
    parts = {m: kernel(f.component(m)) for m in x.support}
    diffs = []
    for m in range(x.lo + 1, x.hi + 1):
        d = lift_through(parts[m - 1][1], x.diff(m) @ parts[m][1])
        assert d is not None
        diffs.append(d)
    k = ChainComplex(x.ring, x.lo, x.hi, tuple(parts[m][0] for m in x.support), tuple(diffs))
    return k, ChainMap(k, x, {m: parts[m][1] for m in x.support})


def cokernel_cx(f: ChainMap) -> tuple[ChainComplex, ChainMap]:
    y = f.dst
    parts = {m: cokernel(f.component(m)) for m in y.support}
    diffs = []
    for m in range(y.lo + 1, y.hi + 1):
        d = extend_along(parts[m][1], parts[m - 1][1] @ y.diff(m))
        assert d is not None
        diffs.append(d)
    q = ChainComplex(y.ring, y.lo, y.hi, tuple(parts[m][0] for m in y.support), tuple(diffs))
    return q, ChainMap(y, q, {m: parts[m][1] for m in y.support})


@dataclass(eq=False)
class ComplexBiproduct:
    obj: ChainComplex
    injections: tuple[ChainMap, ...]
    projections: tuple[ChainMap, ...]


def biproduct_cx(*summands: ChainComplex) -> ComplexBiproduct:
    ring = summands[0].ring
    lo = min(x.lo for x in summands)
    hi = max(x.hi for x in summands)
    parts: dict[int, Biproduct] = {m: biproduct(*(x.module(m) for x in summands)) for m in range(lo, hi + 1)}
    diffs = []
    for m in range(lo + 1, hi + 1):
        d = zero_morphism(parts[m].obj, parts[m - 1].obj)
        for x, i_low, p_high in zip(summands, parts[m - 1].injections, parts[m].projections):
            d = d + i_low @ x.diff(m) @ p_high
        diffs.append(d)
    obj = ChainComplex(ring, lo, hi, tuple(parts[m].obj for m in range(lo, hi + 1)), tuple(diffs))
    inj = tuple(ChainMap(x, obj, {m: parts[m].injections[k] for m in range(lo, hi + 1)})
                for k, x in enumerate(summands))
    proj = tuple(ChainMap(obj, x, {m: parts[m].projections[k] for m in range(lo, hi + 1)})
                 for k, x in enumerate(summands))
    return ComplexBiproduct(obj, inj, proj)


def lift_through_mono_cx(mono: ChainMap, f: ChainMap) -> Optional[ChainMap]:
    """ The unique g with mono @ g = f, computed degree by degree. """
    comps = {}
    for m in f.src.support:
        g = lift_through(mono.component(m), f.component(m))
        if g is None:
            return None
        comps[m] = g
    return ChainMap(f.src, mono.src, comps)


def extend_along_epi_cx(epi: ChainMap, f: ChainMap) -> Optional[ChainMap]:
    """ The unique g with g @ epi = f, computed degree by degree. """
    comps = {}
    for m in epi.dst.support:
        g = extend_along(epi.component(m), f.component(m))
        if g is None:
            return None
        comps[m] = g
    return ChainMap(epi.dst, f.dst, comps)


def lift_through_cx(beta: ChainMap, f: ChainMap) -> Optional[ChainMap]:
    """ Some chain map g with beta @ g = f, or None. """
    group = chain_map_group(f.src, beta.src)
    target = chain_map_group(f.src, f.dst)
    x = induced_map(group, target, lambda g: beta @ g).solve(target.coords(f))
    return None if x is None else group.element(x)


def pair_into_cx(s: ComplexBiproduct, *maps: ChainMap) -> ChainMap:
    out = zero_chain_map(maps[0].src, s.obj)
    for inj, f in zip(s.injections, maps):
        out = out + inj @ f
    return out


def copair_from_cx(s: ComplexBiproduct, *maps: ChainMap) -> ChainMap:
    out = zero_chain_map(s.obj, maps[0].dst)
    for proj, f in zip(s.projections, maps):
        out = out + f @ proj
    return out


@dataclass(eq=False)
class ComplexPullback:
    obj: ChainComplex
    p_a: ChainMap
    p_b: ChainMap
    _incl: ChainMap
    _sum: ComplexBiproduct

    def factor(self, u: ChainMap, v: ChainMap) -> ChainMap:
        w = lift_through_mono_cx(self._incl, pair_into_cx(self._sum, u, v))
        if w is None:
            raise PreconditionError("the chain maps do not form a commutative square")
        return w


@dataclass(eq=False)
class ComplexPushout:
    obj: ChainComplex
    i_a: ChainMap
    i_b: ChainMap
    _quot: ChainMap
    _sum: ComplexBiproduct

    def factor(self, u: ChainMap, v: ChainMap) -> ChainMap:
        w = extend_along_epi_cx(self._quot, copair_from_cx(self._sum, u, v))
        if w is None:
            raise PreconditionError("the chain maps do not form a commutative square")
        return w


def pullback_cx(f: ChainMap, g: ChainMap) -> ComplexPullback:
    if f.dst != g.dst:
        raise PreconditionError("cospan codomains differ")
    s = biproduct_cx(f.src, g.src)
    p, k = kernel_cx(f @ s.projections[0] - g @ s.projections[1])
    return ComplexPullback(p, s.projections[0] @ k, s.projections[1] @ k, k, s)


def pushout_cx(f: ChainMap, g: ChainMap) -> ComplexPushout:
    if f.src != g.src:
        raise PreconditionError("span domains differ")
    s = biproduct_cx(f.dst, g.dst)
    q, e = cokernel_cx(s.injections[0] @ f - s.injections[1] @ g)
    return ComplexPushout(q, e @ s.injections[0], e @ s.injections[1], e, s)


def dualize_cx[T: (ChainComplex, ChainMap)](x: T) -> T:
    """ D(X)_k = D(X_{-k}) with differential D(d_{1-k}). """
    match x:
        case ChainComplex():
            modules = tuple(x.module(-k) for k in range(-x.hi, -x.lo + 1))
            diffs = tuple(dualize(x.diff(1 - k)) for k in range(-x.hi + 1, -x.lo + 1))
            return ChainComplex(x.ring, -x.hi, -x.lo, modules, diffs)
        case ChainMap():
            src, dst = dualize_cx(x.dst), dualize_cx(x.src)
            return ChainMap(src, dst, {-m: dualize(f) for m, f in x.components.items()})
    raise TypeError(f"cannot dualize {type(x).__name__}")
