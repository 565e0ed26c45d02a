"""
Exact integer and modular linear algebra.

Matrices are numpy arrays with ``dtype=object`` so that every entry is a
Python integer of arbitrary precision. On top of the Smith normal form this
module provides the two workhorses used by the rest of the package:

- `LinearMap`, a homomorphism between finite cyclic sums Z/o_1 + ... + Z/o_k,
  with kernels, images, cokernels and (lexicographically minimal) solving;
- `Subquotient`, a quotient L/K of integer lattices brought to invariant
  factor form together with a coordinate map.
"""
from dataclasses import dataclass, field
import itertools
import math
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from homext.errors import MalformedInputError, PreconditionError

type IntMatrix = np.ndarray
type IntVector = tuple[int, ...]


# |-----------------------------------------------------------------|
# |                        Matrix helpers                           |
# |-----------------------------------------------------------------|

def zeros(rows: int, cols: int) -> IntMatrix:
    """ A rows x cols matrix of Python integer zeros. """
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> IntMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def int_matrix(rows: Sequence[Sequence[int]] | IntMatrix,
               n_rows: Optional[int] = None,
               n_cols: Optional[int] = None) -> IntMatrix:
    """
    Builds an object matrix from nested sequences. The shape can be forced,
    which is needed for matrices with no rows or no columns.
    """
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2:
            raise MalformedInputError(f"expected a 2-D matrix, got shape {rows.shape}", "matrix")
        out = zeros(*rows.shape)
        for (i, j), v in np.ndenumerate(rows):
            out[i, j] = int(v)
        return out

    rows = [list(r) for r in rows]
    r = len(rows) if n_rows is None else n_rows
    c = (len(rows[0]) if rows else 0) if n_cols is None else n_cols
    if len(rows) != r:
        raise MalformedInputError(f"expected {r} rows, got {len(rows)}", "matrix")
    out = zeros(r, c)
    for i, row in enumerate(rows):
        if len(row) != c:
            raise MalformedInputError(
                f"row {i} has {len(row)} entries, expected {c}", "matrix")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise MalformedInputError(f"entry ({i},{j}) is not an integer: {v!r}", "matrix")
            out[i, j] = int(v)
    return out


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """ Exact matrix product, also for empty inner dimensions. """
    if a.shape[1] != b.shape[0]:
        raise MalformedInputError(f"cannot multiply {a.shape} by {b.shape}", "matrix")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.dot(a, b)


def matvec(a: IntMatrix, x: Sequence[int]) -> list[int]:
    """ Exact matrix-vector product as a list of Python integers. """
    if a.shape[1] != len(x):
        raise MalformedInputError(f"cannot apply {a.shape} to a vector of length {len(x)}", "vector")
    return [sum((a[i, j] * x[j] for j in range(a.shape[1])), 0) for i in range(a.shape[0])]


def hstack(*blocks: IntMatrix) -> IntMatrix:
    rows = blocks[0].shape[0]
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    at = 0
    for b in blocks:
        out[:, at:at + b.shape[1]] = b
        at += b.shape[1]
    return out


def diagonal(entries: Sequence[int]) -> IntMatrix:
    m = zeros(len(entries), len(entries))
    for i, v in enumerate(entries):
        m[i, i] = v
    return m


def column(m: IntMatrix, j: int) -> list[int]:
    return [m[i, j] for i in range(m.shape[0])]


def from_columns(cols: Sequence[Sequence[int]], n_rows: int) -> IntMatrix:
    out = zeros(n_rows, len(cols))
    for j, c in enumerate(cols):
        for i, v in enumerate(c):
            out[i, j] = v
    return out


def reduce_columns(m: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    """ Reduces row i of the matrix modulo moduli[i]. """
    out = m.copy()
    for i, d in enumerate(moduli):
        for j in range(m.shape[1]):
            out[i, j] = out[i, j] % d
    return out


def determinant(m: IntMatrix) -> int:
    """ Exact determinant by fraction-free (Bareiss) elimination. """
    n = m.shape[0]
    if n == 0:
        return 1
    a = [[m[i, j] for j in range(n)] for i in range(n)]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# |-----------------------------------------------------------------|
# |                       Smith normal form                         |
# |-----------------------------------------------------------------|

@dataclass(frozen=True, eq=False)
class SnfResult:
    """ U A V = D with U, V unimodular; the inverses are kept for change of basis. """
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


class _SnfWorker:
    """
    Runs the elimination on a private copy of the matrix. Every row/column
    operation is mirrored on U (and U_inv) or V (and V_inv).
    """

    def __init__(self, a: IntMatrix):
        self.D = a.copy()
        m, n = a.shape
        self.U = identity(m)
        self.U_inv = identity(m)
        self.V = identity(n)
        self.V_inv = identity(n)

    def run(self) -> SnfResult:
        m, n = self.D.shape
        for t in range(min(m, n)):
            pivot = self._smallest(t)
            if pivot is None:
                break
            self._move_to(t, pivot)
            while True:
                if not self._clear_cross(t):
                    self._move_to(t, self._smallest(t))
                    continue
                bad = self._not_divisible(t)
                if bad is None:
                    break
                self._add_row(t, bad, 1)
            if self.D[t, t] < 0:
                self._negate_col(t)
        return SnfResult(self.U, self.D, self.V, self.U_inv, self.V_inv)

    def _smallest(self, t: int) -> Optional[tuple[int, int]]:
        """ Smallest nonzero |entry| in the trailing block, lowest index first. """
        best = None
        m, n = self.D.shape
        for i in range(t, m):
            for j in range(t, n):
                v = abs(self.D[i, j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return None if best is None else (best[1], best[2])

    def _move_to(self, t: int, at: tuple[int, int]):
        i, j = at
        if i != t:
            self._swap_rows(t, i)
        if j != t:
            self._swap_cols(t, j)

    def _clear_cross(self, t: int) -> bool:
        """ Reduces row and column t by the pivot; true if both became zero. """
        m, n = self.D.shape
        p = self.D[t, t]
        clear = True
        for i in range(t + 1, m):
            q = self.D[i, t] // p
            if q:
                self._add_row(i, t, -q)
            if self.D[i, t] != 0:
                clear = False
        for j in range(t + 1, n):
            q = self.D[t, j] // p
            if q:
                self._add_col(j, t, -q)
            if self.D[t, j] != 0:
                clear = False
        return clear

    def _not_divisible(self, t: int) -> Optional[int]:
        m, n = self.D.shape
        p = self.D[t, t]
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if self.D[i, j] % p:
                    return i
        return None

    def _swap_rows(self, i: int, j: int):
        self.D[[i, j], :] = self.D[[j, i], :]
        self.U[[i, j], :] = self.U[[j, i], :]
        self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def _swap_cols(self, i: int, j: int):
        self.D[:, [i, j]] = self.D[:, [j, i]]
        self.V[:, [i, j]] = self.V[:, [j, i]]
        self.V_inv[[i, j], :] = self.V_inv[[j, i], :]

    def _add_row(self, i: int, j: int, c: int):
        """ row_i += c * row_j """
        self.D[i, :] = self.D[i, :] + c * self.D[j, :]
        self.U[i, :] = self.U[i, :] + c * self.U[j, :]
        self.U_inv[:, j] = self.U_inv[:, j] - c * self.U_inv[:, i]

    def _add_col(self, i: int, j: int, c: int):
        """ col_i += c * col_j """
        self.D[:, i] = self.D[:, i] + c * self.D[:, j]
        self.V[:, i] = self.V[:, i] + c * self.V[:, j]
        self.V_inv[j, :] = self.V_inv[j, :] - c * self.V_inv[i, :]

    def _negate_col(self, t: int):
        self.D[:, t] = -self.D[:, t]
        self.V[:, t] = -self.V[:, t]
        self.V_inv[t, :] = -self.V_inv[t, :]


def snf(a: IntMatrix | Sequence[Sequence[int]]) -> SnfResult:
    """
    Smith normal form with transforms: U A V = D, D diagonal with
    d_1 | d_2 | ... and d_i >= 0. Pivots are the smallest nonzero absolute
    value, ties broken by the lowest (row, column) index.
    """
    if not isinstance(a, np.ndarray):
        a = int_matrix(a)
    return _SnfWorker(a).run()


def integer_nullspace(a: IntMatrix) -> IntMatrix:
    """ Columns spanning {x in Z^n : A x = 0}. """
    res = snf(a)
    return res.V[:, res.rank:].copy()


# |-----------------------------------------------------------------|
# |                     Solving modulo N                            |
# |-----------------------------------------------------------------|

def hnf_rows(gens: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """
    Row echelon basis of the lattice spanned by `gens` in Z^n: each returned
    row has zeros before its pivot, a positive pivot, and pivots strictly
    increase.
    """
    rows = [list(g) for g in gens if any(g)]
    basis = []
    for col in range(n):
        cand = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(cand) > 1:
            cand.sort(key=lambda r: abs(r[col]))
            p = cand[0]
            keep = [p]
            for r in cand[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    keep.append(r)
                elif any(r):
                    rest.append(r)
            cand = keep
        if cand:
            p = cand[0]
            if p[col] < 0:
                p = [-v for v in p]
            basis.append(p)
        rows = rest
    return basis


def nullspace_mod(a: IntMatrix, n: int) -> IntMatrix:
    """ Generators (columns) of {x in (Z/n)^cols : A x = 0 mod n}. """
    rows, cols = a.shape
    res = snf(a)
    gens = []
    for i in range(cols):
        d = res.D[i, i] if i < rows else 0
        scale = n // math.gcd(d, n)
        if scale % n == 0:
            continue
        gens.append([(scale * res.V[k, i]) % n for k in range(cols)])
    return from_columns(gens, cols)


def lexmin_in_coset(x: Sequence[int], null: IntMatrix, n: int) -> IntVector:
    """ The lexicographically smallest vector of x + span(null) + n Z^k, entries in [0, n). """
    k = len(x)
    gens = [column(null, j) for j in range(null.shape[1])]
    gens += [[n if i == j else 0 for i in range(k)] for j in range(k)]
    x = list(x)
    for b in hnf_rows(gens, k):
        j = next(i for i, v in enumerate(b) if v != 0)
        q = x[j] // b[j]
        if q:
            x = [u - q * v for u, v in zip(x, b)]
    return tuple(v % n for v in x)


def solve_mod(a: IntMatrix | Sequence[Sequence[int]], b: Sequence[int], n: int) -> Optional[IntVector]:
    """
    Solves A x = b (mod n). Returns the lexicographically minimal solution
    with entries in [0, n), or None when the system has no solution. The
    remaining solutions are that vector plus `nullspace_mod(A, n)`.
    """
    if not isinstance(a, np.ndarray):
        a = int_matrix(a)
    if n < 2:
        raise MalformedInputError(f"modulus must be at least 2, got {n}", "N")
    rows, cols = a.shape
    if len(b) != rows:
        raise MalformedInputError(f"right-hand side has length {len(b)}, expected {rows}", "b")

    res = snf(a)
    c = [v % n for v in matvec(res.U, b)]
    z = [0] * cols
    for i in range(rows):
        d = res.D[i, i] if i < cols else 0
        g = math.gcd(d, n)
        if c[i] % g:
            return None
        if i < cols and n // g > 1:
            m = n // g
            z[i] = (c[i] // g) * pow(d // g, -1, m) % m
    x = [v % n for v in matvec(res.V, z)]
    return lexmin_in_coset(x, nullspace_mod(a, n), n)


# |-----------------------------------------------------------------|
# |                  Lattice subquotients                           |
# |-----------------------------------------------------------------|

@dataclass(eq=False)
class Subquotient:
    """
    The finite group L/K for lattices K <= L <= Z^n given by generating
    columns, in invariant factor form. `gens` holds one representative in
    Z^n per invariant factor and `coords` maps an element of L to its
    coordinates with respect to those generators.
    """
    # Invariant factors, all > 1, each dividing the next
    factors: tuple[int, ...]
    # n x len(factors) representatives of the canonical generators
    gens: IntMatrix

    _U: IntMatrix = field(repr=False)
    _g: list[int] = field(repr=False)
    _UT: IntMatrix = field(repr=False)
    _keep: list[int] = field(repr=False)

    @staticmethod
    def of(lattice: IntMatrix, sub: IntMatrix) -> 'Subquotient':
        n = lattice.shape[0]
        sl = snf(lattice)
        r = sl.rank
        g = sl.diagonal[:r]
        basis = sl.U_inv[:, :r].copy()
        for i in range(r):
            basis[:, i] = basis[:, i] * g[i]

        t = zeros(r, sub.shape[1])
        for j in range(sub.shape[1]):
            t[:, j] = _lattice_coords(sl.U, g, r, column(sub, j), n)

        st = snf(t)
        s = st.diagonal
        if len(s) < r or any(v == 0 for v in s[:r]):
            raise PreconditionError("the quotient is not finite")
        keep = [i for i in range(r) if s[i] != 1]
        gens = matmul(basis, st.U_inv[:, keep]) if keep else zeros(n, 0)
        return Subquotient(
            factors=tuple(s[i] for i in keep),
            gens=gens,
            _U=sl.U, _g=g, _UT=st.U, _keep=keep)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    def coords(self, x: Sequence[int]) -> IntVector:
        """ Coordinates of x (which must lie in L) modulo the invariant factors. """
        c = _lattice_coords(self._U, self._g, len(self._g), x, self.gens.shape[0])
        y = matvec(self._UT, c) if c else []
        return tuple(y[i] % f for i, f in zip(self._keep, self.factors))

    def element(self, coeffs: Sequence[int]) -> list[int]:
        if len(coeffs) != len(self.factors):
            raise MalformedInputError(
                f"expected {len(self.factors)} coefficients, got {len(coeffs)}", "coeffs")
        return matvec(self.gens, list(coeffs))

    def elements(self) -> Iterator[IntVector]:
        """ All coefficient vectors, in lexicographic order. """
        return itertools.product(*(range(f) for f in self.factors))


def _lattice_coords(u: IntMatrix, g: list[int], r: int, x: Sequence[int], n: int) -> list[int]:
    if len(x) != n:
        raise MalformedInputError(f"vector of length {len(x)} in a lattice of rank {n}", "vector")
    y = matvec(u, list(x))
    if any(v != 0 for v in y[r:]) or any(y[i] % g[i] for i in range(r)):
        raise PreconditionError(f"vector {tuple(x)} does not lie in the lattice")
    return [y[i] // g[i] for i in range(r)]


# |-----------------------------------------------------------------|
# |                 Maps between finite cyclic sums                 |
# |-----------------------------------------------------------------|

@dataclass(eq=False)
class LinearMap:
    """
    A homomorphism Z/o_1 + ... + Z/o_n -> Z/e_1 + ... + Z/e_m given by an
    integer matrix. Orders equal to 1 are allowed and behave as zero summands.
    """
    src_orders: tuple[int, ...]
    dst_orders: tuple[int, ...]
    matrix: IntMatrix

    def __post_init__(self):
        self.src_orders = tuple(self.src_orders)
        self.dst_orders = tuple(self.dst_orders)
        if self.matrix.shape != (len(self.dst_orders), len(self.src_orders)):
            raise MalformedInputError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{len(self.dst_orders)}x{len(self.src_orders)}", "matrix")
        for i, e in enumerate(self.dst_orders):
            for j, o in enumerate(self.src_orders):
                if (o * self.matrix[i, j]) % e:
                    raise MalformedInputError(
                        f"entry ({i},{j}) = {self.matrix[i, j]} is not well defined "
                        f"from Z/{o} to Z/{e}", "matrix")

    @property
    def modulus(self) -> int:
        return math.lcm(1, *self.src_orders, *self.dst_orders)

    def apply(self, x: Sequence[int]) -> IntVector:
        y = matvec(self.matrix, list(x))
        return tuple(v % e for v, e in zip(y, self.dst_orders))

    def kernel_lattice(self) -> IntMatrix:
        """ Columns spanning {x in Z^n : A x = 0 in the target}. """
        n = len(self.src_orders)
        rel = hstack(self.matrix, -diagonal(self.dst_orders)) if self.dst_orders else self.matrix
        null = integer_nullspace(rel)
        return null[:n, :].copy()

    def kernel(self) -> Subquotient:
        return Subquotient.of(self.kernel_lattice(), diagonal(self.src_orders))

    def image(self) -> Subquotient:
        rel = diagonal(self.dst_orders)
        return Subquotient.of(hstack(self.matrix, rel), rel)

    def cokernel(self) -> Subquotient:
        rel = hstack(self.matrix, diagonal(self.dst_orders))
        return Subquotient.of(identity(len(self.dst_orders)), rel)

    def image_order(self) -> int:
        return self.image().order

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def is_surjective(self) -> bool:
        return self.image_order() == math.prod(self.dst_orders)

    def solve(self, b: Sequence[int]) -> Optional[IntVector]:
        """ Lexicographically minimal x with A x = b, or None. """
        n = self.modulus
        if len(b) != len(self.dst_orders):
            raise MalformedInputError(
                f"target has length {len(b)}, expected {len(self.dst_orders)}", "b")
        if n == 1:
            return tuple(0 for _ in self.src_orders)
        scaled = self.matrix.copy()
        rhs = []
        for i, e in enumerate(self.dst_orders):
            scaled[i, :] = scaled[i, :] * (n // e)
            rhs.append((b[i] % e) * (n // e))
        if not self.src_orders:
            return () if all(v % n == 0 for v in rhs) else None
        x = solve_mod(scaled, rhs, n)
        if x is None:
            return None
        return tuple(v % o for v, o in zip(x, self.src_orders))


def homology(incoming: LinearMap, outgoing: LinearMap) -> Subquotient:
    """ ker(outgoing) / im(incoming) for composable maps with zero composite. """
    if incoming.dst_orders != outgoing.src_orders:
        raise PreconditionError("maps are not composable")
    mid = incoming.dst_orders
    comp = matmul(outgoing.matrix, incoming.matrix)
    if any(comp[i, j] % e for i, e in enumerate(outgoing.dst_orders) for j in range(comp.shape[1])):
        raise PreconditionError("composite of consecutive maps is not zero")
    return Subquotient.of(outgoing.kernel_lattice(), hstack(incoming.matrix, diagonal(mid)))


def is_exact_at(incoming: LinearMap, outgoing: LinearMap) -> bool:
    return homology(incoming, outgoing).order == 1
