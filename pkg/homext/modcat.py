"""
The ambient abelian category: finitely generated modules over R = Z/N in
invariant factor form, their morphisms, Hom groups and the universal
constructions (kernels, cokernels, images, biproducts, pullbacks, pushouts)
together with the duality D = Hom(-, R).
"""
from dataclasses import dataclass
import functools
import itertools
import math
import random
from typing import Any, Callable, Iterator, Optional, Protocol, Sequence

import numpy as np
from sympy import factorint

from homext.errors import MalformedInputError, PreconditionError
from homext.exactlin import (IntMatrix, IntVector, LinearMap, Subquotient, column, diagonal,
                             from_columns, identity as identity_matrix, int_matrix, matmul,
                             reduce_columns, zeros)


@dataclass(frozen=True)
class Ring:
    """ The ring Z/N. """
    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 2:
            raise MalformedInputError(f"modulus must be an integer >= 2, got {self.N!r}", "N")

    @functools.cached_property
    def prime_powers(self) -> tuple[int, ...]:
        """ The blocks p^a with p^a || N, i.e. the indecomposable projectives. """
        return tuple(sorted(p ** a for p, a in factorint(self.N).items()))

    def to_json(self):
        return {"N": self.N}

    @staticmethod
    def from_json(o: dict[str, Any]) -> 'Ring':
        if "N" not in o:
            raise MalformedInputError("missing modulus", "N")
        return Ring(o["N"])

    def __str__(self):
        return f"Z/{self.N}"


@functools.cache
def prime_power_parts(d: int) -> tuple[int, ...]:
    """ Orders of the indecomposable summands of Z/d. """
    return tuple(sorted(p ** a for p, a in factorint(d).items()))


@dataclass(frozen=True)
class Module:
    """ Z/d_1 + ... + Z/d_k with 1 < d_1 | d_2 | ... | d_k | N. """
    # The ring all factors live over
    ring: Ring
    # Invariant factors; the zero module has none
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(d) for d in self.factors))
        for i, d in enumerate(self.factors):
            if d <= 1 or self.ring.N % d:
                raise MalformedInputError(
                    f"factor {d} must be > 1 and divide N = {self.ring.N}", "factors")
            if i and d % self.factors[i - 1]:
                raise MalformedInputError(
                    f"factors {list(self.factors)} do not form a divisibility chain", "factors")

    @staticmethod
    def zero(ring: Ring) -> 'Module':
        return Module(ring, ())

    @staticmethod
    def cyclic(ring: Ring, d: int) -> 'Module':
        return Module(ring, () if d == 1 else (d,))

    @staticmethod
    def free(ring: Ring, rank: int = 1) -> 'Module':
        return Module(ring, (ring.N,) * rank)

    @staticmethod
    def from_orders(ring: Ring, orders: Sequence[int]) -> 'Module':
        """ The canonical form of Z/o_1 + ... + Z/o_k for arbitrary o_i | N. """
        return Module(ring, Subquotient.of(identity_matrix(len(orders)), diagonal(orders)).factors)

    @property
    def rank(self) -> int:
        """ Number of invariant factors. """
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def is_zero(self) -> bool:
        return not self.factors

    @property
    def is_free(self) -> bool:
        return all(d == self.ring.N for d in self.factors)

    def reduce(self, x: Sequence[int]) -> IntVector:
        if len(x) != self.rank:
            raise MalformedInputError(f"element of length {len(x)} in a module of rank {self.rank}", "element")
        return tuple(v % d for v, d in zip(x, self.factors))

    def elements(self) -> Iterator[IntVector]:
        return itertools.product(*(range(d) for d in self.factors))

    def indecomposables(self) -> list[int]:
        """ Orders p^a of the indecomposable summands, with multiplicity. """
        return sorted(q for d in self.factors for q in prime_power_parts(d))

    def to_json(self):
        return {"factors": list(self.factors)}

    @staticmethod
    def from_json(o: dict[str, Any] | list[int], ring: Ring) -> 'Module':
        factors = o if isinstance(o, list) else o.get("factors")
        if not isinstance(factors, list):
            raise MalformedInputError("expected a list of invariant factors", "factors")
        if any(isinstance(d, bool) or not isinstance(d, int) for d in factors):
            raise MalformedInputError(f"factors must be integers, got {factors}", "factors")
        return Module(ring, tuple(factors))

    def __str__(self):
        return " + ".join(f"Z/{d}" for d in self.factors) if self.factors else "0"


def _same_ring(*modules: Module):
    rings = {m.ring for m in modules}
    if len(rings) > 1:
        raise PreconditionError(f"modules over different rings: {sorted(r.N for r in rings)}")


@dataclass(eq=False)
class Morphism:
    """
    A module map given by its matrix on the canonical generators: column j is
    the image of the j-th generator of `src`. Entries are reduced modulo the
    target factors and must satisfy d_j a_ij = 0 (mod e_i).
    """
    src: Module
    dst: Module
    matrix: IntMatrix

    def __post_init__(self):
        _same_ring(self.src, self.dst)
        m = int_matrix(self.matrix, self.dst.rank, self.src.rank) \
            if not isinstance(self.matrix, np.ndarray) else int_matrix(self.matrix)
        if m.shape != (self.dst.rank, self.src.rank):
            raise MalformedInputError(
                f"matrix shape {m.shape} does not match {self.dst.rank}x{self.src.rank}", "matrix")
        m = reduce_columns(m, self.dst.factors)
        for i, e in enumerate(self.dst.factors):
            for j, d in enumerate(self.src.factors):
                if (d * m[i, j]) % e:
                    raise MalformedInputError(
                        f"entry ({i},{j}) = {m[i, j]} does not define a map Z/{d} -> Z/{e}", "matrix")
        self.matrix = m

    @functools.cached_property
    def linear(self) -> LinearMap:
        return LinearMap(self.src.factors, self.dst.factors, self.matrix)

    def key(self) -> tuple:
        return (self.src, self.dst, tuple(tuple(r) for r in self.matrix.tolist()))

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __call__(self, x: Sequence[int]) -> IntVector:
        return self.linear.apply(self.src.reduce(x))

    def __matmul__(self, other: 'Morphism') -> 'Morphism':
        return compose(self, other)

    def __add__(self, other: 'Morphism') -> 'Morphism':
        self._check_parallel(other)
        return Morphism(self.src, self.dst, self.matrix + other.matrix)

    def __sub__(self, other: 'Morphism') -> 'Morphism':
        self._check_parallel(other)
        return Morphism(self.src, self.dst, self.matrix - other.matrix)

    def __neg__(self) -> 'Morphism':
        return Morphism(self.src, self.dst, -self.matrix)

    def __rmul__(self, c: int) -> 'Morphism':
        return Morphism(self.src, self.dst, c * self.matrix)

    def _check_parallel(self, other: 'Morphism'):
        if self.src != other.src or self.dst != other.dst:
            raise PreconditionError(f"maps {self} and {other} are not parallel")

    def is_zero(self) -> bool:
        return not self.matrix.any() if self.matrix.size else True

    def is_mono(self) -> bool:
        return self.linear.is_injective()

    def is_epi(self) -> bool:
        return self.linear.is_surjective()

    def is_iso(self) -> bool:
        return self.src.order == self.dst.order and self.is_mono()

    def to_json(self):
        return {
            "from": self.src.to_json(),
            "to": self.dst.to_json(),
            "matrix": self.matrix.tolist(),
        }

    @staticmethod
    def from_json(o: dict[str, Any], ring: Ring) -> 'Morphism':
        for key in ("from", "to", "matrix"):
            if key not in o:
                raise MalformedInputError("missing key", key)
        src = o["from"] if isinstance(o["from"], Module) else Module.from_json(o["from"], ring)
        dst = o["to"] if isinstance(o["to"], Module) else Module.from_json(o["to"], ring)
        if not isinstance(o["matrix"], list):
            raise MalformedInputError("expected a list of rows", "matrix")
        return Morphism(src, dst, int_matrix(o["matrix"], dst.rank, src.rank))

    def __str__(self):
        return f"{self.src} -> {self.dst} {self.matrix.tolist()}"


def identity(m: Module) -> Morphism:
    return Morphism(m, m, identity_matrix(m.rank))


def zero_morphism(a: Module, b: Module) -> Morphism:
    return Morphism(a, b, zeros(b.rank, a.rank))


def compose(g: Morphism, f: Morphism) -> Morphism:
    """ g after f. """
    if f.dst != g.src:
        raise PreconditionError(f"cannot compose: {f.dst} is not {g.src}")
    return Morphism(f.src, g.dst, matmul(g.matrix, f.matrix))


# |-----------------------------------------------------------------|
# |                         Finite groups                           |
# |-----------------------------------------------------------------|

class FiniteGroup[T](Protocol):
    """
    A finite abelian group presented as a sum of cyclic groups: every element
    is `element(c)` for a unique coefficient vector c reduced modulo `orders`.
    """
    orders: tuple[int, ...]

    def element(self, coeffs: Sequence[int]) -> T: ...

    def coords(self, x: T) -> IntVector: ...


def group_order(g: FiniteGroup) -> int:
    return math.prod(g.orders)


def group_elements[T](g: FiniteGroup[T]) -> Iterator[T]:
    for c in itertools.product(*(range(o) for o in g.orders)):
        yield g.element(c)


def group_generators[T](g: FiniteGroup[T]) -> list[T]:
    n = len(g.orders)
    return [g.element([int(i == j) for i in range(n)]) for j in range(n)]


def random_element[T](g: FiniteGroup[T], rng: random.Random) -> T:
    return g.element([rng.randrange(o) for o in g.orders])


def induced_map[S, T](domain: FiniteGroup[S], codomain: FiniteGroup[T],
                      fn: Callable[[S], T]) -> LinearMap:
    """ The matrix of a homomorphism given by its action on the generators of `domain`. """
    cols = [codomain.coords(fn(x)) for x in group_generators(domain)]
    return LinearMap(tuple(domain.orders), tuple(codomain.orders),
                     from_columns(cols, len(codomain.orders)))


def solve_in[S, T](domain: FiniteGroup[S], codomain: FiniteGroup[T],
                   fn: Callable[[S], T], target: T) -> Optional[S]:
    """ Some x with fn(x) = target for an additive fn, or None. """
    x = induced_map(domain, codomain, fn).solve(codomain.coords(target))
    return None if x is None else domain.element(x)


@dataclass(eq=False)
class GroupProduct:
    """ The product of finitely many groups; elements are tuples. """
    groups: tuple[FiniteGroup, ...]

    @functools.cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for g in self.groups for o in g.orders)

    def element(self, coeffs: Sequence[int]) -> tuple:
        out, at = [], 0
        for g in self.groups:
            out.append(g.element(coeffs[at:at + len(g.orders)]))
            at += len(g.orders)
        return tuple(out)

    def coords(self, x: Sequence) -> IntVector:
        return tuple(c for g, part in zip(self.groups, x) for c in g.coords(part))


@dataclass(eq=False)
class HomGroup:
    """
    Hom(src, dst) = sum over (i, j) of Z/gcd(d_j, e_i), the (i, j) generator
    sending generator j to (e_i / gcd) times generator i.
    """
    src: Module
    dst: Module
    # Matrix positions carrying a nonzero cyclic summand
    positions: tuple[tuple[int, int], ...]
    # Order of each summand
    orders: tuple[int, ...]

    def _step(self, k: int) -> int:
        i, _ = self.positions[k]
        return self.dst.factors[i] // self.orders[k]

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def generators(self) -> list[Morphism]:
        return group_generators(self)

    def element(self, coeffs: Sequence[int]) -> Morphism:
        if len(coeffs) != len(self.orders):
            raise MalformedInputError(f"expected {len(self.orders)} coefficients", "coeffs")
        m = zeros(self.dst.rank, self.src.rank)
        for k, (i, j) in enumerate(self.positions):
            m[i, j] = coeffs[k] * self._step(k)
        return Morphism(self.src, self.dst, m)

    def coords(self, f: Morphism) -> IntVector:
        if f.src != self.src or f.dst != self.dst:
            raise PreconditionError(f"{f} does not belong to Hom({self.src}, {self.dst})")
        return tuple((f.matrix[i, j] // self._step(k)) % self.orders[k]
                     for k, (i, j) in enumerate(self.positions))

    def elements(self) -> Iterator[Morphism]:
        return group_elements(self)

    def zero(self) -> Morphism:
        return zero_morphism(self.src, self.dst)

    def invariants(self) -> tuple[int, ...]:
        return Module.from_orders(self.src.ring, self.orders).factors


def hom_group(a: Module, b: Module) -> HomGroup:
    _same_ring(a, b)
    positions, orders = [], []
    for i, e in enumerate(b.factors):
        for j, d in enumerate(a.factors):
            g = math.gcd(d, e)
            if g > 1:
                positions.append((i, j))
                orders.append(g)
    return HomGroup(a, b, tuple(positions), tuple(orders))


def lift_through(beta: Morphism, f: Morphism) -> Optional[Morphism]:
    """ Some h with beta @ h = f (lexicographically minimal), or None. """
    if beta.dst != f.dst:
        raise PreconditionError(f"cannot lift {f} through {beta}")
    return solve_in(hom_group(f.src, beta.src), hom_group(f.src, f.dst), lambda h: beta @ h, f)


def extend_along(alpha: Morphism, f: Morphism) -> Optional[Morphism]:
    """ Some h with h @ alpha = f (lexicographically minimal), or None. """
    if alpha.src != f.src:
        raise PreconditionError(f"cannot extend {f} along {alpha}")
    return solve_in(hom_group(alpha.dst, f.dst), hom_group(f.src, f.dst), lambda h: h @ alpha, f)


# |-----------------------------------------------------------------|
# |                   Kernels, cokernels, images                    |
# |-----------------------------------------------------------------|

def _module_of(ring: Ring, sq: Subquotient) -> Module:
    return Module(ring, sq.factors)


def kernel(f: Morphism) -> tuple[Module, Morphism]:
    sq = f.linear.kernel()
    k = _module_of(f.src.ring, sq)
    return k, Morphism(k, f.src, reduce_columns(sq.gens, f.src.factors))


def cokernel(f: Morphism) -> tuple[Module, Morphism]:
    sq = f.linear.cokernel()
    q = _module_of(f.dst.ring, sq)
    n = f.dst.rank
    cols = [sq.coords([int(i == j) for i in range(n)]) for j in range(n)]
    return q, Morphism(f.dst, q, from_columns(cols, q.rank))


def image(f: Morphism) -> tuple[Module, Morphism, Morphism]:
    """ The image I with its mono I -> dst and the epi src -> I. """
    sq = f.linear.image()
    im = _module_of(f.dst.ring, sq)
    mono = Morphism(im, f.dst, reduce_columns(sq.gens, f.dst.factors))
    cols = [sq.coords(column(f.matrix, j)) for j in range(f.src.rank)]
    return im, mono, Morphism(f.src, im, from_columns(cols, im.rank))


@dataclass(eq=False)
class Biproduct:
    obj: Module
    injections: tuple[Morphism, ...]
    projections: tuple[Morphism, ...]


def biproduct(*summands: Module) -> Biproduct:
    """ The direct sum renormalized to invariant factor form, with its structure maps. """
    if not summands:
        raise PreconditionError("biproduct of no modules")
    _same_ring(*summands)
    ring = summands[0].ring
    raw = [d for m in summands for d in m.factors]
    sq = Subquotient.of(identity_matrix(len(raw)), diagonal(raw))
    obj = _module_of(ring, sq)
    injections, projections = [], []
    at = 0
    for m in summands:
        cols = [sq.coords([int(i == at + j) for i in range(len(raw))]) for j in range(m.rank)]
        injections.append(Morphism(m, obj, from_columns(cols, obj.rank)))
        projections.append(Morphism(obj, m, reduce_columns(sq.gens[at:at + m.rank, :], m.factors)))
        at += m.rank
    return Biproduct(obj, tuple(injections), tuple(projections))


def pair_into(s: Biproduct, *maps: Morphism) -> Morphism:
    """ The map T -> A + B + ... with the given components. """
    out = zero_morphism(maps[0].src, s.obj)
    for inj, f in zip(s.injections, maps):
        out = out + inj @ f
    return out


def copair_from(s: Biproduct, *maps: Morphism) -> Morphism:
    """ The map A + B + ... -> T restricting to the given components. """
    out = zero_morphism(s.obj, maps[0].dst)
    for proj, f in zip(s.projections, maps):
        out = out + f @ proj
    return out


def direct_sum(f: Morphism, g: Morphism) -> tuple[Morphism, Biproduct, Biproduct]:
    """ f + g between the biproducts of sources and targets. """
    s, t = biproduct(f.src, g.src), biproduct(f.dst, g.dst)
    m = t.injections[0] @ f @ s.projections[0] + t.injections[1] @ g @ s.projections[1]
    return m, s, t


@dataclass(eq=False)
class Pullback:
    """ P with f @ p_a = g @ p_b. """
    obj: Module
    p_a: Morphism
    p_b: Morphism
    _incl: Morphism
    _sum: Biproduct

    def factor(self, u: Morphism, v: Morphism) -> Morphism:
        """ The unique map T -> P with p_a @ w = u and p_b @ w = v. """
        w = lift_through(self._incl, pair_into(self._sum, u, v))
        if w is None:
            raise PreconditionError("the maps do not form a commutative square")
        return w


@dataclass(eq=False)
class Pushout:
    """ Q with i_a @ f = i_b @ g. """
    obj: Module
    i_a: Morphism
    i_b: Morphism
    _quot: Morphism
    _sum: Biproduct

    def factor(self, u: Morphism, v: Morphism) -> Morphism:
        """ The unique map Q -> T with w @ i_a = u and w @ i_b = v. """
        w = extend_along(self._quot, copair_from(self._sum, u, v))
        if w is None:
            raise PreconditionError("the maps do not form a commutative square")
        return w


def pullback(f: Morphism, g: Morphism) -> Pullback:
    """ The kernel of (f, -g): A + B -> C. """
    if f.dst != g.dst:
        raise PreconditionError(f"cospan codomains differ: {f.dst} and {g.dst}")
    s = biproduct(f.src, g.src)
    p, k = kernel(f @ s.projections[0] - g @ s.projections[1])
    return Pullback(p, s.projections[0] @ k, s.projections[1] @ k, k, s)


def pushout(f: Morphism, g: Morphism) -> Pushout:
    """ The cokernel of (f, -g): C -> A + B. """
    if f.src != g.src:
        raise PreconditionError(f"span domains differ: {f.src} and {g.src}")
    s = biproduct(f.dst, g.dst)
    q, e = cokernel(s.injections[0] @ f - s.injections[1] @ g)
    return Pushout(q, e @ s.injections[0], e @ s.injections[1], e, s)


# |-----------------------------------------------------------------|
# |                            Duality                              |
# |-----------------------------------------------------------------|

def dualize[T: (Module, Morphism)](x: T) -> T:
    """
    D = Hom(-, Z/N). D(Z/d) is identified with Z/d through the functional
    1 -> N/d, so modules are fixed and a matrix (a_ij) becomes
    (a_ij d_j / e_i) transposed. D(D(f)) = f on the nose.
    """
    match x:
        case Module():
            return x
        case Morphism(src=a, dst=b, matrix=m):
            out = zeros(a.rank, b.rank)
            for i, e in enumerate(b.factors):
                for j, d in enumerate(a.factors):
                    out[j, i] = (m[i, j] * d) // e
            return Morphism(b, a, out)
    raise TypeError(f"cannot dualize {type(x).__name__}")


# |-----------------------------------------------------------------|
# |                      Classes of modules                         |
# |-----------------------------------------------------------------|

@dataclass(frozen=True)
class TestClass:
    """
    The additive closure of a finite list of modules (always containing 0).
    Membership is decided on indecomposable summands.
    """
    __test__ = False

    ring: Ring
    generators: tuple[Module, ...]

    @staticmethod
    def free(ring: Ring) -> 'TestClass':
        return TestClass(ring, (Module.free(ring),))

    @staticmethod
    def everything(ring: Ring) -> 'TestClass':
        """ All modules: every Z/p^b with p^b dividing N. """
        blocks = [Module.cyclic(ring, p ** b) for p, a in factorint(ring.N).items() for b in range(1, a + 1)]
        return TestClass(ring, tuple(blocks))

    @functools.cached_property
    def indecomposables(self) -> tuple[int, ...]:
        return tuple(sorted({q for m in self.generators for q in m.indecomposables()}))

    def test_modules(self) -> list[Module]:
        """ One cyclic module per indecomposable; Hom out of a biproduct splits over these. """
        return [Module.cyclic(self.ring, q) for q in self.indecomposables]

    def contains(self, m: Module) -> bool:
        return set(m.indecomposables()) <= set(self.indecomposables)

    def is_subclass_of(self, other: 'TestClass') -> bool:
        return set(self.indecomposables) <= set(other.indecomposables)

    def to_json(self):
        return {"generators": [m.to_json() for m in self.generators]}

    @staticmethod
    def from_json(o: dict[str, Any], ring: Ring) -> 'TestClass':
        gens = o.get("generators")
        if not isinstance(gens, list):
            raise MalformedInputError("expected a list of modules", "generators")
        return TestClass(ring, tuple(g if isinstance(g, Module) else Module.from_json(g, ring) for g in gens))

    def __str__(self):
        return "{" + ", ".join(f"Z/{q}" for q in self.indecomposables) + "}"
