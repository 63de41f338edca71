"""Exact linear algebra over the integers.

Smith normal form with unimodular transforms, ranks, elementary divisors,
and the structure of homology / Hom / Ext of finitely generated abelian
groups.  Everything runs on arbitrary-precision Python ints; intermediate
entries in an SNF reduction can exceed machine words even for small inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class IntMatrix:
    """Immutable dense integer matrix (rows-major tuple of tuples)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        entries = tuple(tuple(int(x) for x in row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def zero(cls, rows, cols):
        return cls(tuple((0,) * cols for _ in range(rows))) if rows else cls._empty(rows, cols)

    @classmethod
    def _empty(cls, rows, cols):
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "entries", ())
        return m

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"

    def transpose(self):
        return IntMatrix(tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols))) if self.rows and self.cols \
            else IntMatrix.zero(self.cols, self.rows)

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0:
            return IntMatrix.zero(self.rows, other.cols)
        ot = other.transpose().entries if other.cols else ()
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                               for row in self.entries))

    def __neg__(self):
        return IntMatrix(tuple(tuple(-x for x in row) for row in self.entries)) \
            if self.rows and self.cols else self

    def is_zero(self):
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self):
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithDecomposition:
    """U * S * V == A with U, V unimodular and S diagonal, d1 | d2 | ..."""
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    divisors: tuple


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group: Z^free_rank + sum of Z/d with d1 | d2 | ..."""
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        prev = None
        for d in self.torsion:
            if d <= 1:
                raise ValueError("torsion coefficients must be > 1")
            if prev is not None and d % prev != 0:
                raise ValueError("torsion must form a divisibility chain")
            prev = d

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def is_free(self):
        return not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M, dst, src, c):
    if c:
        row_s = M[src]
        row_d = M[dst]
        for k in range(len(row_d)):
            row_d[k] += c * row_s[k]


def _add_col(M, dst, src, c):
    if c:
        for row in M:
            row[dst] += c * row[src]


def _negate_row(M, i):
    M[i] = [-x for x in M[i]]


def snf(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form A = U * S * V.

    Pivot choice: nonzero entry of minimal absolute value, ties broken by
    (row, col), so the reduction (and U, V) is reproducible.
    """
    n, m = A.rows, A.cols
    S = A.to_lists()
    U = IntMatrix.identity(n).to_lists()
    V = IntMatrix.identity(m).to_lists()
    # invariant: U * S * V == A.  Row op R on S is compensated in U by the
    # inverse column op, and symmetrically for column ops in V.
    t = 0
    while t < min(n, m):
        piv = None
        for i in range(t, n):
            for j in range(t, m):
                v = S[i][j]
                if v and (piv is None or abs(v) < abs(S[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            _swap_rows(S, t, i0)
            _swap_cols(U, t, i0)
        if j0 != t:
            _swap_cols(S, t, j0)
            _swap_rows(V, t, j0)
        while True:
            # clear column t
            restart = False
            for i in range(t + 1, n):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    _add_row(S, i, t, -q)
                    _add_col(U, t, i, q)
                    if S[i][t]:  # remainder smaller than pivot: promote it
                        _swap_rows(S, t, i)
                        _swap_cols(U, t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, m):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    _add_col(S, j, t, -q)
                    _add_row(V, t, j, q)
                    if S[t][j]:
                        _swap_cols(S, t, j)
                        _swap_rows(V, t, j)
                        restart = True
                        break
            if restart:
                continue
            break
        # fold in any entry the pivot does not divide yet
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, m):
                if S[i][j] % S[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            _add_row(S, t, bad, 1)
            _add_col(U, bad, t, -1)
            continue
        if S[t][t] < 0:
            _negate_row(S, t)
            for row in U:
                row[t] = -row[t]
        t += 1
    Sm = IntMatrix(S) if n and m else IntMatrix.zero(n, m)
    Um = IntMatrix(U) if n else IntMatrix.zero(n, n)
    Vm = IntMatrix(V) if m else IntMatrix.zero(m, m)
    divisors = tuple(Sm[k, k] for k in range(min(n, m)) if Sm[k, k])
    return SmithDecomposition(Um, Sm, Vm, divisors)


def rank(A: IntMatrix) -> int:
    """Rank over Q, via fraction-free elimination (fast path for big tests)."""
    M = [[Fraction(x) for x in row] for row in A.entries]
    n, m = A.rows, A.cols
    r = 0
    for j in range(m):
        piv = next((i for i in range(r, n) if M[i][j]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][j]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][j]:
                c = M[i][j]
                M[i] = [a - c * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == n:
            break
    return r


def homology_at(incoming: IntMatrix, outgoing: IntMatrix) -> FinAbGroup:
    """Homology ker(outgoing)/im(incoming) at the middle term Z^m.

    For  Z^n --incoming--> Z^m --outgoing--> Z^k  the result is
    sum of Z/d_i (elementary divisors of incoming) + Z^(m - s - r)
    with s = rank(incoming), r = rank(outgoing).
    """
    m = incoming.rows
    if outgoing.cols != m:
        raise ValueError(f"not composable: outgoing has {outgoing.cols} columns, "
                         f"middle rank is {m}")
    if not (outgoing * incoming).is_zero():
        raise ValueError("not a chain complex: outgoing * incoming != 0")
    divs = snf(incoming).divisors
    s = len(divs)
    r = rank(outgoing)
    free = m - s - r
    assert free >= 0
    return FinAbGroup(free, tuple(d for d in divs if d != 1))


def hom_to_Z(G: FinAbGroup) -> FinAbGroup:
    """Hom(G, Z): free part survives, torsion dies."""
    return FinAbGroup(G.free_rank)


def ext_to_Z(G: FinAbGroup) -> FinAbGroup:
    """Ext(G, Z): torsion survives, free part dies."""
    return FinAbGroup(0, G.torsion)


def direct_sum(*groups: FinAbGroup) -> FinAbGroup:
    """Direct sum, renormalized to invariant-factor form."""
    free = sum(g.free_rank for g in groups)
    tors = []
    for g in groups:
        tors.extend(g.torsion)
    return FinAbGroup(free, _invariant_factors(tors))


def _invariant_factors(ds):
    """Rewrite a multiset of cyclic orders as a divisibility chain."""
    from collections import defaultdict

    primary = defaultdict(list)  # p -> sorted prime-power exponents
    for d in ds:
        d = int(d)
        p = 2
        while p * p <= d:
            if d % p == 0:
                e = 0
                while d % p == 0:
                    d //= p
                    e += 1
                primary[p].append(p ** e)
            p += 1
        if d > 1:
            primary[d].append(d)
    for p in primary:
        primary[p].sort()
    out = []
    while any(primary.values()):
        f = 1
        for p in list(primary):
            if primary[p]:
                f *= primary[p].pop()
        out.append(f)
    out.reverse()
    return tuple(out)
