"""
Brute-force oracles for small instances: Hom by enumerating generator
images, linear solving by exhaustive search, invariant factors from
determinantal divisors, and Ext^1 classes by enumerating every short exact
sequence and sorting them into equivalence classes.
"""
import itertools
import math
from typing import Generator, Optional, Sequence

from tqdm import tqdm

from homext.chaincx import ChainComplex, ChainMap
from homext.exactlin import IntMatrix, IntVector, determinant, from_columns, int_matrix, matvec
from homext.extalg import Extension, is_related
from homext.modcat import Module, Morphism, Ring, cokernel, identity, zero_morphism


def hom_by_enumeration(a: Module, b: Module) -> list[Morphism]:
    """ Every map A -> B, found by trying all generator images. """
    choices = []
    for d in a.factors:
        choices.append([y for y in b.elements() if all((d * v) % e == 0 for v, e in zip(y, b.factors))])
    return [Morphism(a, b, from_columns([list(y) for y in cols], b.rank))
            for cols in itertools.product(*choices)]


def solve_by_search(a: IntMatrix | Sequence[Sequence[int]], b: Sequence[int], n: int) -> Optional[IntVector]:
    """ The lexicographically first x in (Z/n)^k with A x = b (mod n). """
    a = int_matrix(a)
    target = [v % n for v in b]
    for x in itertools.product(range(n), repeat=a.shape[1]):
        if [v % n for v in matvec(a, list(x))] == target:
            return x
    return None


def snf_diagonal_by_minors(a: IntMatrix | Sequence[Sequence[int]]) -> list[int]:
    """ d_k = g_k / g_{k-1}, g_k the gcd of the k x k minors. """
    a = int_matrix(a)
    rows, cols = a.shape
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, determinant(a[list(r), :][:, list(c)]))
        if g == 0:
            out.extend([0] * (min(rows, cols) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def modules_of_order(ring: Ring, order: int, max_rank: int) -> Generator[Module, None, None]:
    """ All modules over the ring of the given order with at most `max_rank` factors. """
    divisors = [d for d in range(2, ring.N + 1) if ring.N % d == 0]

    def chains(remaining: int, smallest: int, rank: int) -> Generator[list[int], None, None]:
        if remaining == 1:
            yield []
            return
        if rank == 0:
            return
        for d in divisors:
            if d % smallest == 0 and remaining % d == 0:
                for rest in chains(remaining // d, d, rank - 1):
                    yield [d] + rest

    for factors in chains(order, 1, max_rank):
        yield Module(ring, tuple(factors))


def automorphisms(m: Module) -> list[Morphism]:
    return [f for f in hom_by_enumeration(m, m) if f.is_iso()]


def _classes(candidates: Sequence[Extension]) -> list[Extension]:
    reps: list[Extension] = []
    for s in candidates:
        if not any(is_related(s, r) for r in reps):
            reps.append(s)
    return reps


def module_extension_sequences(c: Module, d: Module) -> Generator[Extension, None, None]:
    """ Every short exact sequence 0 -> D -> E -> C -> 0 up to the choice of E in canonical form. """
    autos = automorphisms(c)
    for e in modules_of_order(c.ring, c.order * d.order, c.rank + d.rank):
        for alpha in hom_by_enumeration(d, e):
            if not alpha.is_mono():
                continue
            q_mod, q = cokernel(alpha)
            if q_mod != c:
                continue
            for sigma in autos:
                yield Extension((alpha, sigma @ q))


def module_extension_classes(c: Module, d: Module) -> list[Extension]:
    """ One representative per equivalence class of extensions of C by D. """
    return _classes(list(module_extension_sequences(c, d)))


def complex_extension_classes(x: ChainComplex, y: ChainComplex) -> list[Extension]:
    """
    One representative per class of extensions 0 -> Y -> E -> X -> 0 of
    complexes. Each degree is one of the module classes; the differentials
    of E are searched among all maps compatible with both ends.
    """
    ring = x.ring
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    degrees = range(lo, hi + 1)
    per_degree = []
    for k in degrees:
        c, d = x.module(k), y.module(k)
        if c.is_zero or d.is_zero:
            # a zero end leaves a single split sequence
            ends = (identity(d), zero_morphism(d, c)) if c.is_zero else (zero_morphism(d, c), identity(c))
            per_degree.append([Extension(ends)])
        else:
            per_degree.append(module_extension_classes(c, d))

    candidates = []
    total = math.prod(len(p) for p in per_degree)
    for seqs in tqdm(itertools.product(*per_degree), total=total, desc="complex extensions", leave=False):
        s = dict(zip(degrees, seqs))
        options = []
        for k in range(lo + 1, hi + 1):
            top, bottom = s[k], s[k - 1]
            options.append([g for g in hom_by_enumeration(top.middle(), bottom.middle())
                            if g @ top.alpha == bottom.alpha @ y.diff(k)
                            and bottom.beta @ g == x.diff(k) @ top.beta])
        for diffs in itertools.product(*options):
            if any(not (f @ g).is_zero() for g, f in itertools.pairwise(reversed(diffs))):
                continue
            e = ChainComplex(ring, lo, hi, tuple(s[k].middle() for k in degrees), tuple(diffs))
            alpha = ChainMap(y, e, {k: s[k].alpha for k in degrees})
            beta = ChainMap(e, x, {k: s[k].beta for k in degrees})
            candidates.append(Extension((alpha, beta)))
    return _classes(candidates)
