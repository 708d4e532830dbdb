"""Exact integer and rational linear algebra.

Everything here works over ``int`` and ``fractions.Fraction``; no floating
point is involved.  The main objects are

* :func:`snf` / :func:`hnf` -- Smith and Hermite normal forms with transforms,
* :class:`LatticeInAmbient` -- a lattice inside a fixed ``Q^m``,
* :class:`FGAbGroup` -- a finitely generated abelian group in invariant-factor
  form,

plus the lattice operations built from them (duals, sums, intersections,
quotients and congruence solving).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "ExactAlgError",
    "AmbientMismatch",
    "DegeneratePairing",
    "NotASublattice",
    "NotInBigLattice",
    "NotInLattice",
    "SNFResult",
    "FGAbGroup",
    "LatticeInAmbient",
    "snf",
    "hnf",
    "integer_left_kernel",
    "rational_inverse",
    "rational_rank",
    "rational_nullspace",
    "lattice_dual",
    "lattice_intersect",
    "lattice_sum",
    "lattice_saturate",
    "quotient_group",
    "image_in_finite_quotient",
    "congruence_lattice",
    "lcm",
]


class ExactAlgError(Exception):
    """Base class for errors raised by this module."""


class AmbientMismatch(ExactAlgError):
    pass


class DegeneratePairing(ExactAlgError):
    pass


class NotASublattice(ExactAlgError):
    pass


class NotInBigLattice(ExactAlgError):
    pass


class NotInLattice(ExactAlgError):
    pass


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        v = abs(v)
        if v == 0:
            return 0
        out = out * v // gcd(out, v)
    return out


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def _frac_vec(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(_as_fraction(x) for x in v)


def _common_denominator(rows: Iterable[Iterable[Fraction]]) -> int:
    den = 1
    for row in rows:
        for x in row:
            d = x.denominator
            if den % d:
                den = den * d // gcd(den, d)
    return den


# ---------------------------------------------------------------------------
# Normal forms


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _hnf_rows(
    rows: Sequence[Sequence[int]], ncols: int, transform: bool = False
) -> tuple[list[list[int]], list[list[int]] | None, int]:
    """Row-style Hermite normal form.

    Returns ``(H, U, rank)`` with ``U @ A == H`` when ``transform`` is set.
    The first ``rank`` rows of ``H`` are the echelon basis; pivots are
    positive and entries above a pivot lie in ``[0, pivot)``.
    """
    A = [list(r) for r in rows]
    m = len(A)
    U = _identity(m) if transform else None
    p = 0
    for col in range(ncols):
        if p == m:
            break
        while True:
            best = -1
            best_abs = 0
            for i in range(p, m):
                a = A[i][col]
                if a and (best < 0 or abs(a) < best_abs):
                    best, best_abs = i, abs(a)
            if best < 0:
                break
            if best != p:
                A[p], A[best] = A[best], A[p]
                if U is not None:
                    U[p], U[best] = U[best], U[p]
            piv_row = A[p]
            piv = piv_row[col]
            clean = True
            for i in range(p + 1, m):
                a = A[i][col]
                if a:
                    q = a // piv
                    row = A[i]
                    for j in range(col, ncols):
                        if piv_row[j]:
                            row[j] -= q * piv_row[j]
                    if U is not None:
                        urow, upiv = U[i], U[p]
                        for j in range(m):
                            if upiv[j]:
                                urow[j] -= q * upiv[j]
                    if row[col]:
                        clean = False
            if clean:
                break
        if best < 0 and A[p][col] == 0:
            continue
        if A[p][col] < 0:
            A[p] = [-x for x in A[p]]
            if U is not None:
                U[p] = [-x for x in U[p]]
        piv_row = A[p]
        piv = piv_row[col]
        for i in range(p):
            a = A[i][col]
            q = a // piv
            if q:
                row = A[i]
                for j in range(col, ncols):
                    if piv_row[j]:
                        row[j] -= q * piv_row[j]
                if U is not None:
                    urow, upiv = U[i], U[p]
                    for j in range(m):
                        if upiv[j]:
                            urow[j] -= q * upiv[j]
        p += 1
    return A, U, p


def hnf(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Nonzero rows of the row Hermite normal form of an integer matrix."""
    if not M:
        return []
    H, _, r = _hnf_rows([[int(x) for x in row] for row in M], len(M[0]))
    return H[:r]


def integer_left_kernel(M: Sequence[Sequence[int]], nrows: int | None = None) -> list[list[int]]:
    """Basis of ``{x in Z^r : x M = 0}`` for an integer ``r x c`` matrix."""
    r = len(M) if nrows is None else nrows
    if r == 0:
        return []
    ncols = len(M[0]) if M else 0
    if ncols == 0:
        return _identity(r)
    _, U, rank = _hnf_rows(M, ncols, transform=True)
    return [list(u) for u in U[rank:]]


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V`` is diagonal with entries ``factors`` (zeros last)."""

    factors: tuple[int, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    V_inv: tuple[tuple[int, ...], ...]

    def __iter__(self):
        # allows ``factors, U, V = snf(M)``
        return iter((self.factors, self.U, self.V))


def snf(M: Sequence[Sequence[int]], transforms: bool = True) -> SNFResult:
    """Smith normal form of an integer matrix.

    ``factors`` has length ``min(rows, cols)``; it satisfies the divisibility
    chain and zero entries (rank deficit) come last.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if not transforms:
        return SNFResult(_snf_factors(A, m, n), (), (), ())
    U = _identity(m) if transforms else None
    V = _identity(n) if transforms else None
    Vi = _identity(n) if transforms else None

    def row_op(dst, src, q):  # row dst -= q * row src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_op(dst, src, q):  # col dst -= q * col src
        for row in A:
            row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                row[dst] -= q * row[src]
            # inverse: row src += q * row dst
            Vi[src] = [a + q * b for a, b in zip(Vi[src], Vi[dst])]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // piv)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // piv)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility against the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1

    factors = tuple(A[i][i] if i < m and i < n else 0 for i in range(min(m, n)))
    tup = lambda X: tuple(tuple(r) for r in X) if X is not None else ()
    return SNFResult(factors, tup(U), tup(V), tup(Vi))


def _snf_factors(A: list[list[int]], m: int, n: int) -> tuple[int, ...]:
    """Diagonal of the Smith form only; ``A`` is consumed."""
    k = min(m, n)
    for t in range(k):
        while True:
            best = 0
            bi = bj = t
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = row[j]
                    if a:
                        a = -a if a < 0 else a
                        if not best or a < best:
                            best, bi, bj = a, i, j
            if not best:
                return tuple(abs(A[i][i]) if i < t else 0 for i in range(k))
            A[t], A[bi] = A[bi], A[t]
            if bj != t:
                for row in A:
                    row[t], row[bj] = row[bj], row[t]
            piv = A[t][t]
            prow = A[t]
            clean = True
            for i in range(t + 1, m):
                row = A[i]
                a = row[t]
                if a:
                    q = a // piv
                    for j in range(t, n):
                        row[j] -= q * prow[j]
                    if row[t]:
                        clean = False
            for j in range(t + 1, n):
                a = prow[j]
                if a:
                    q = a // piv
                    for row in A[t:]:
                        row[j] -= q * row[t]
                    if prow[j]:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n))), None)
            if bad is None:
                break
            # fold the offending row into the pivot row and retry
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
    return tuple(abs(A[i][i]) for i in range(k))


# ---------------------------------------------------------------------------
# Rational linear algebra (small dense matrices)


def _rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots: list[int] = []
    p = 0
    for col in range(n):
        pr = next((i for i in range(p, m) if A[i][col] != 0), None)
        if pr is None:
            continue
        A[p], A[pr] = A[pr], A[p]
        inv = 1 / A[p][col]
        A[p] = [x * inv for x in A[p]]
        for i in range(m):
            if i != p and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[p])]
        pivots.append(col)
        p += 1
        if p == m:
            break
    return A, pivots


def rational_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref([_frac_vec(r) for r in rows])[1])


def rational_inverse(rows: Sequence[Sequence]) -> list[list[Fraction]] | None:
    """Inverse of a square rational matrix, or ``None`` if singular."""
    n = len(rows)
    aug = [list(_frac_vec(r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    R, piv = _rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in R[:n]]


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` (right kernel)."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, piv = _rref([_frac_vec(r) for r in rows])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def _solve_in_echelon(H: Sequence[Sequence[int]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``c @ H = target`` for an echelon integer basis ``H``.

    Returns the (rational) coefficient vector or ``None`` when the target is
    outside the rational row space.
    """
    rem = list(target)
    coeffs = []
    for row in H:
        col = next(j for j, x in enumerate(row) if x)
        c = rem[col] / row[col]
        coeffs.append(c)
        if c:
            rem = [a - c * b for a, b in zip(rem, row)]
    if any(rem):
        return None
    return coeffs


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


def _normalize_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups ``Z/o`` (0 = Z)."""
    return _normalize_factor_tuple(tuple(abs(int(o)) for o in orders))


@lru_cache(maxsize=65536)
def _normalize_factor_tuple(orders: tuple[int, ...]) -> tuple[int, ...]:
    free = sum(1 for o in orders if o == 0)
    finite = sorted(o for o in orders if o > 1)
    if not finite:
        return (0,) * free
    if all(b % a == 0 for a, b in zip(finite, finite[1:])):
        return tuple(finite) + (0,) * free
    # prime-power decomposition, then recombine
    by_prime: dict[int, list[int]] = {}
    for o in finite:
        x, p = o, 2
        while p * p <= x:
            if x % p == 0:
                e = 1
                x //= p
                while x % p == 0:
                    x //= p
                    e += 1
                by_prime.setdefault(p, []).append(p**e)
            p += 1
        if x > 1:
            by_prime.setdefault(x, []).append(x)
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        powers.sort()
        offset = length - len(powers)
        for i, q in enumerate(powers):
            chain[offset + i] *= q
    return tuple(c for c in chain if c > 1) + (0,) * free


@dataclass(frozen=True)
class FGAbGroup:
    """Finitely generated abelian group ``Z/d_1 + ... + Z/d_t``.

    ``invariant_factors`` satisfy ``d_i | d_{i+1}``; unit factors are dropped
    and a free summand is written as a trailing ``0``.  ``basis_map`` holds
    optional ambient coordinates of the generators, one row per factor.
    """

    invariant_factors: tuple[int, ...] = ()
    basis_map: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        nz = [x for x in f if x != 0]
        if any(x < 0 for x in f) or any(x == 1 for x in f):
            raise ValueError(f"invalid invariant factors {f}")
        if f[len(nz):] != (0,) * (len(f) - len(nz)):
            raise ValueError(f"free factors must come last: {f}")
        if any(b % a for a, b in zip(nz, nz[1:])):
            raise ValueError(f"divisibility chain violated: {f}")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FGAbGroup":
        """Group isomorphic to the direct sum of ``Z/o`` (``o = 0`` means ``Z``)."""
        return cls._trusted(_normalize_factors(orders))

    @classmethod
    def _trusted(cls, factors: tuple[int, ...]) -> "FGAbGroup":
        # factors already normalized; skip re-validation
        grp = object.__new__(cls)
        object.__setattr__(grp, "invariant_factors", factors)
        object.__setattr__(grp, "basis_map", None)
        return grp

    @classmethod
    def trivial(cls) -> "FGAbGroup":
        return cls(())

    @property
    def free_rank(self) -> int:
        return sum(1 for x in self.invariant_factors if x == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(x for x in self.invariant_factors if x)

    @property
    def order(self) -> int:
        """Order of the group; ``0`` stands for an infinite group."""
        if self.free_rank:
            return 0
        return reduce(lambda a, b: a * b, self.torsion, 1)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __eq__(self, other):
        if not isinstance(other, FGAbGroup):
            return NotImplemented
        return self.invariant_factors == other.invariant_factors

    def __hash__(self):
        return hash(self.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)

    def __repr__(self):
        return f"FGAbGroup({list(self.invariant_factors)})"


# ---------------------------------------------------------------------------
# Lattices


class LatticeInAmbient:
    """A lattice (discrete subgroup) of ``Q^m``.

    Stored canonically as ``rows / den`` where ``rows`` is the row HNF of the
    integer matrix ``den * L`` and ``den`` is minimal.  Because the HNF
    commutes with scaling, two lattices are equal iff their stored data are.
    Rank-0 lattices are allowed.
    """

    __slots__ = ("ambient_dim", "den", "rows", "_hash")

    def __init__(self, ambient_dim: int, den: int, rows: tuple[tuple[int, ...], ...]):
        # use the constructors below; this assumes canonical input
        self.ambient_dim = ambient_dim
        self.den = den
        self.rows = rows
        self._hash = hash((ambient_dim, den, rows))

    # construction ---------------------------------------------------------

    @classmethod
    def _from_int_rows(cls, dim: int, den: int, int_rows: Sequence[Sequence[int]]) -> "LatticeInAmbient":
        H = hnf(int_rows) if int_rows else []
        g = den
        for row in H:
            for x in row:
                if x:
                    g = gcd(g, x)
                    if g == 1:
                        break
            if g == 1:
                break
        if g > 1:
            den //= g
            H = [[x // g for x in row] for row in H]
        if not H:
            den = 1
        return cls(dim, den, tuple(tuple(r) for r in H))

    @classmethod
    def from_generators(cls, ambient_dim: int, generators: Iterable[Sequence]) -> "LatticeInAmbient":
        """Lattice spanned by the given vectors (rows); they may be dependent over Q
        only if they still generate a lattice (e.g. integer vectors)."""
        gens = [_frac_vec(v) for v in generators]
        for v in gens:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in ambient Q^{ambient_dim}")
        den = _common_denominator(gens)
        ints = [[int(x * den) for x in v] for v in gens]
        return cls._from_int_rows(ambient_dim, den, ints)

    @classmethod
    def from_columns(cls, ambient_dim: int, matrix: Sequence[Sequence]) -> "LatticeInAmbient":
        """Lattice spanned by the columns of an ``m x r`` matrix."""
        cols = list(zip(*matrix)) if matrix else []
        return cls.from_generators(ambient_dim, cols)

    @classmethod
    def standard(cls, dim: int) -> "LatticeInAmbient":
        return cls(dim, 1, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> "LatticeInAmbient":
        return cls(dim, 1, ())

    # accessors -------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        """Canonical basis vectors (rows)."""
        d = self.den
        return tuple(tuple(Fraction(x, d) for x in row) for row in self.rows)

    @property
    def generators(self) -> tuple[tuple[Fraction, ...], ...]:
        """``m x r`` generator matrix (columns are basis vectors)."""
        return tuple(zip(*self.basis)) if self.rows else tuple(() for _ in range(self.ambient_dim))

    def __eq__(self, other):
        if not isinstance(other, LatticeInAmbient):
            return NotImplemented
        return (self.ambient_dim, self.den, self.rows) == (other.ambient_dim, other.den, other.rows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LatticeInAmbient(dim={self.ambient_dim}, basis={[list(map(str, b)) for b in self.basis]})"

    # membership ------------------------------------------------------------

    def coordinates(self, v: Sequence) -> tuple[int, ...]:
        """Integer coordinates of ``v`` in the canonical basis (NotInLattice otherwise)."""
        v = _frac_vec(v)
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector length does not match the ambient dimension")
        target = [x * self.den for x in v]
        c = _solve_in_echelon(self.rows, target)
        if c is None or any(x.denominator != 1 for x in c):
            raise NotInLattice(f"{[str(x) for x in v]} is not in the lattice")
        return tuple(int(x) for x in c)

    def rational_coordinates(self, v: Sequence) -> tuple[Fraction, ...] | None:
        target = [x * self.den for x in _frac_vec(v)]
        c = _solve_in_echelon(self.rows, target)
        return None if c is None else tuple(c)

    def contains(self, v: Sequence) -> bool:
        try:
            self.coordinates(v)
        except NotInLattice:
            return False
        return True

    def contains_lattice(self, other: "LatticeInAmbient") -> bool:
        _check_same_ambient(self, other)
        return all(self.contains(b) for b in other.basis)

    def in_span(self, v: Sequence) -> bool:
        return self.rational_coordinates(v) is not None

    # transformations -------------------------------------------------------

    def scaled(self, c) -> "LatticeInAmbient":
        c = _as_fraction(c)
        if c == 0:
            return LatticeInAmbient.zero(self.ambient_dim)
        return LatticeInAmbient.from_generators(self.ambient_dim, [[x * c for x in b] for b in self.basis])

    def image(self, matrix: Sequence[Sequence], target_dim: int | None = None) -> "LatticeInAmbient":
        """Image under ``v -> matrix @ v`` (matrix is ``target_dim x m``)."""
        M = [_frac_vec(r) for r in matrix]
        td = len(M) if target_dim is None else target_dim
        imgs = [[sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M] for v in self.basis]
        return LatticeInAmbient.from_generators(td, imgs)

    def project(self, coords: Sequence[int]) -> "LatticeInAmbient":
        """Image under the projection that keeps ``coords`` and zeroes the rest
        (ambient dimension unchanged)."""
        keep = set(coords)
        imgs = [[x if j in keep else Fraction(0) for j, x in enumerate(b)] for b in self.basis]
        return LatticeInAmbient.from_generators(self.ambient_dim, imgs)


def _check_same_ambient(*lats: LatticeInAmbient) -> None:
    dims = {L.ambient_dim for L in lats}
    if len(dims) != 1:
        raise AmbientMismatch(f"ambient dimensions differ: {sorted(dims)}")


def lattice_sum(L1: LatticeInAmbient, L2: LatticeInAmbient) -> LatticeInAmbient:
    _check_same_ambient(L1, L2)
    return LatticeInAmbient.from_generators(L1.ambient_dim, L1.basis + L2.basis)


def _scaled_int_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    den = _common_denominator(rows)
    return [[int(x * den) for x in r] for r in rows]


def lattice_intersect(L1: LatticeInAmbient, L2: LatticeInAmbient) -> LatticeInAmbient:
    _check_same_ambient(L1, L2)
    m = L1.ambient_dim
    if L1.rank == 0 or L2.rank == 0:
        return LatticeInAmbient.zero(m)
    B1, B2 = L1.basis, L2.basis
    stacked = _scaled_int_rows(list(B1) + list(B2))
    ker = integer_left_kernel(stacked)
    r1 = len(B1)
    gens = []
    for k in ker:
        gens.append([sum((k[i] * B1[i][j] for i in range(r1)), Fraction(0)) for j in range(m)])
    return LatticeInAmbient.from_generators(m, gens)


def lattice_saturate(L: LatticeInAmbient, subspace: Sequence[Sequence]) -> LatticeInAmbient:
    """``L`` intersected with the rational span of the columns of ``subspace``."""
    m = L.ambient_dim
    cols = [_frac_vec(c) for c in zip(*subspace)] if subspace and subspace[0] else []
    for c in cols:
        if len(c) != m:
            raise AmbientMismatch("subspace matrix has the wrong number of rows")
    # annihilator of the subspace: vectors n with n . s = 0
    ann = rational_nullspace(cols, m) if cols else [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    if not ann:
        return L
    if L.rank == 0:
        return L
    B = L.basis
    BN = [[sum((b[j] * n[j] for j in range(m)), Fraction(0)) for n in ann] for b in B]
    ker = integer_left_kernel(_scaled_int_rows(BN))
    gens = [[sum((k[i] * B[i][j] for i in range(len(B))), Fraction(0)) for j in range(m)] for k in ker]
    return LatticeInAmbient.from_generators(m, gens)


def lattice_dual(L: LatticeInAmbient, pairing: Sequence[Sequence] | None = None) -> LatticeInAmbient:
    """``{v in span(L) : <v, x> in Z for all x in L}``.

    ``pairing`` is a symmetric ``m x m`` matrix; the standard dot product is
    used when it is omitted.
    """
    m = L.ambient_dim
    B = L.basis
    if not B:
        return L
    if pairing is None:
        PB = B
    else:
        P = [_frac_vec(r) for r in pairing]
        PB = [tuple(sum((P[i][j] * b[j] for j in range(m)), Fraction(0)) for i in range(m)) for b in B]
    G = [[sum((a * c for a, c in zip(bi, pbj)), Fraction(0)) for pbj in PB] for bi in B]
    Ginv = rational_inverse(G)
    if Ginv is None:
        raise DegeneratePairing("pairing is singular on the span of the lattice")
    r = len(B)
    gens = [[sum((Ginv[i][k] * B[k][j] for k in range(r)), Fraction(0)) for j in range(m)] for i in range(r)]
    return LatticeInAmbient.from_generators(m, gens)


def _coords_in(big: LatticeInAmbient, v: Sequence[Fraction], err=NotASublattice) -> list[int]:
    try:
        return list(big.coordinates(v))
    except NotInLattice as exc:
        raise err(str(exc)) from None


def quotient_group(L_big: LatticeInAmbient, L_small: LatticeInAmbient) -> FGAbGroup:
    """``L_big / L_small`` with a basis map into the ambient space."""
    _check_same_ambient(L_big, L_small)
    M = [_coords_in(L_big, b) for b in L_small.basis]
    rb = L_big.rank
    if rb == 0:
        return FGAbGroup(())
    if not M:
        factors: tuple[int, ...] = ()
        Vi = tuple(tuple(int(i == j) for j in range(rb)) for i in range(rb))
    else:
        res = snf(M)
        factors, Vi = res.factors, res.V_inv
    full = list(factors) + [0] * (rb - len(factors))
    B = L_big.basis
    m = L_big.ambient_dim
    keep = [i for i, d in enumerate(full) if d != 1]
    # rows of V^{-1} B are the adapted basis of L_big
    basis_map = tuple(
        tuple(sum((Vi[i][k] * B[k][j] for k in range(rb)), Fraction(0)) for j in range(m)) for i in keep
    )
    kept = [full[i] for i in keep]
    order = sorted(range(len(kept)), key=lambda i: (kept[i] == 0, kept[i]))
    return FGAbGroup(tuple(kept[i] for i in order), tuple(basis_map[i] for i in order))


def image_in_finite_quotient(
    ambient_quotient: tuple[LatticeInAmbient, LatticeInAmbient], elements: Sequence[Sequence]
) -> tuple[FGAbGroup, FGAbGroup]:
    """Subgroup generated by ``elements`` in ``L_big/L_small`` and its cokernel."""
    big, small = ambient_quotient
    _check_same_ambient(big, small)
    elems = [_frac_vec(e) for e in elements]
    for e in elems:
        if not big.contains(e):
            raise NotInBigLattice(f"{[str(x) for x in e]} is not in the big lattice")
    if not big.contains_lattice(small):
        raise NotASublattice("small lattice is not contained in the big one")
    span = LatticeInAmbient.from_generators(big.ambient_dim, list(small.basis) + elems)
    return quotient_group(span, small), quotient_group(big, span)


def congruence_lattice(
    parameter_dim: int,
    conditions: Sequence[tuple[Sequence, object]],
    base: LatticeInAmbient | None = None,
) -> LatticeInAmbient:
    """``{p in base : l(p) in c Z for every (l, c)}``.

    ``base`` defaults to ``Z^m``.  A modulus ``c = 0`` imposes ``l(p) = 0``.
    Conditions are absorbed one at a time; each step is a small kernel
    computation on the current basis.
    """
    m = parameter_dim
    L = LatticeInAmbient.standard(m) if base is None else base
    if L.ambient_dim != m:
        raise AmbientMismatch("base lattice lives in the wrong ambient space")
    basis = [list(b) for b in L.basis]
    for ell, c in conditions:
        ell = _frac_vec(ell)
        c = _as_fraction(c)
        if not basis:
            break
        vals = [sum((a * b for a, b in zip(ell, v)), Fraction(0)) for v in basis]
        if c != 0:
            vals = [x / c for x in vals]
            if all(x.denominator == 1 for x in vals):
                continue
            D = _common_denominator([vals])
            col = [[int(x * D)] for x in vals] + [[D]]
            ker = integer_left_kernel(col)
            ker = [k[:-1] for k in ker]
        else:
            if not any(vals):
                continue
            col = [[int(x)] for x in _scaled_int_rows([vals])[0]]
            ker = integer_left_kernel(col)
        r = len(basis)
        new = [[sum((k[i] * basis[i][j] for i in range(r) if k[i]), Fraction(0)) for j in range(m)] for k in ker]
        lat = LatticeInAmbient.from_generators(m, new) if new else LatticeInAmbient.zero(m)
        basis = [list(b) for b in lat.basis]
    return LatticeInAmbient.from_generators(m, basis) if basis else LatticeInAmbient.zero(m)
