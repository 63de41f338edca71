"""Finite groups given concretely: matrix groups and central extensions.

Groups are enumerated breadth-first from generators; element order is the
insertion order of that closure, which fixes class representatives and makes
every downstream computation reproducible.  Elements are opaque hashable
values (integer matrices as nested tuples, 2x2 cyclotomic matrices, or
(element, s) pairs in a central extension); the group object carries the
multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycNumber


# --------------------- matrix helpers (nested tuples) ---------------------
def mat_mul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def mat_transpose(A):
    n = len(A)
    return tuple(tuple(A[j][i] for j in range(n)) for i in range(n))


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_det3(A):
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def mat_inv3(A):
    """Inverse of an integer 3x3 matrix of determinant +-1."""
    d = mat_det3(A)
    if d not in (1, -1):
        raise ValueError(f"determinant {d}, not a unit")
    rows = []
    for j in range(3):
        row = []
        for i in range(3):
            sub = [[A[r][c] for c in range(3) if c != j] for r in range(3) if r != i]
            cof = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0]
            row.append((-1) ** (i + j) * cof * d)
        rows.append(tuple(row))
    return tuple(rows)


def cyc_mat(entries):
    """Coerce a nested sequence to a matrix of CycNumbers."""
    out = []
    for row in entries:
        out.append(tuple(x if isinstance(x, CycNumber) else CycNumber.from_rational(Fraction(x))
                         for x in row))
    return tuple(out)


def cyc_mat_neg(A):
    return tuple(tuple(-x for x in row) for row in A)


def cyc_sort_key(A):
    return tuple((x.order, tuple((c.numerator, c.denominator) for c in x.coeffs))
                 for row in A for x in row)


# ------------------------------ groups ------------------------------------
@dataclass(frozen=True)
class ConjClass:
    representative: object
    members: frozenset
    size: int


class FiniteGroup:
    """A finite group with explicit elements and multiplication."""

    def __init__(self, name, elements, mul, inv, identity, generators=()):
        self.name = name
        self.elements = tuple(elements)
        self.mul = mul
        self.inv = inv
        self.identity = identity
        self.generators = tuple(generators)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError(f"{name}: duplicate elements")
        if identity not in self._index:
            raise ValueError(f"{name}: identity missing")
        self._classes = None

    @classmethod
    def from_generators(cls, name, generators, mul, inv, identity, bound=10000):
        elems = [identity]
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in generators:
                    y = mul(x, s)
                    if y not in seen:
                        if len(elems) >= bound:
                            raise ValueError(f"{name}: closure exceeds bound {bound}")
                        seen.add(y)
                        elems.append(y)
                        nxt.append(y)
            frontier = nxt
        return cls(name, elems, mul, inv, identity, generators)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x):
        return self._index[x]

    def order_of(self, x):
        y, n = x, 1
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    def conjugate(self, h, x):
        return self.mul(self.mul(h, x), self.inv(h))

    def conjugacy_classes(self):
        if self._classes is None:
            out = []
            done = set()
            for x in self.elements:
                if x in done:
                    continue
                members = {self.conjugate(h, x) for h in self.elements}
                done |= members
                out.append(ConjClass(x, frozenset(members), len(members)))
            assert sum(c.size for c in out) == len(self)
            self._classes = tuple(out)
        return self._classes

    def class_index_of(self, x):
        for i, c in enumerate(self.conjugacy_classes()):
            if x in c.members:
                return i
        raise KeyError(f"{self.name}: element not in group")

    def centralizer(self, x):
        return [h for h in self.elements if self.mul(h, x) == self.mul(x, h)]

    def is_abelian(self):
        return all(c.size == 1 for c in self.conjugacy_classes())


def matrix_group(name, generators, bound=10000):
    """Finite group of integer matrices with unit determinant."""
    gens = tuple(tuple(tuple(int(x) for x in row) for row in g) for g in generators)
    n = len(gens[0]) if gens else 3
    return FiniteGroup.from_generators(name, gens, mat_mul, mat_inv3, mat_identity(n),
                                       bound=bound)


# ----------------------------- embeddings ---------------------------------
class Embedding:
    """An injective homomorphism source -> target, verified by enumeration.

    gen_images pairs each source generator with a target element.  If a
    conjugator c is given, the effective map is x -> c^-1 f(x) c (stabilizer
    inclusions twisted by a group element).
    """

    def __init__(self, source: FiniteGroup, target: FiniteGroup, gen_images,
                 conjugator=None, name=""):
        self.source = source
        self.target = target
        self.name = name or f"{source.name}->{target.name}"
        self.conjugator = conjugator
        imgs = list(gen_images)
        if len(imgs) != len(source.generators):
            raise ValueError(f"{self.name}: need one image per generator")
        raw = dict(zip(source.generators, imgs))
        if conjugator is not None:
            # images live in the ambient matrix group; conjugate them into target
            cinv = mat_inv3(conjugator)
            raw = {s: mat_mul(mat_mul(cinv, v), conjugator) for s, v in raw.items()}
        for v in raw.values():
            if v not in target:
                raise ValueError(f"{self.name}: generator image not in target group")
        # extend over the BFS closure, checking consistency as we go
        fmap = {source.identity: target.identity}
        frontier = [source.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for gsrc, gtgt in raw.items():
                    y = source.mul(x, gsrc)
                    fy = target.mul(fmap[x], gtgt)
                    if y in fmap:
                        if fmap[y] != fy:
                            raise ValueError(f"{self.name}: not a homomorphism")
                    else:
                        fmap[y] = fy
                        nxt.append(y)
            frontier = nxt
        if len(fmap) != len(source):
            raise ValueError(f"{self.name}: generators do not generate the source")
        if len(set(fmap.values())) != len(fmap):
            raise ValueError(f"{self.name}: not injective")
        # full homomorphism property (cheap at these orders)
        for x in source.elements:
            for g in raw:
                if fmap[source.mul(x, g)] != target.mul(fmap[x], raw[g]):
                    raise ValueError(f"{self.name}: not a homomorphism")
        self.map = fmap

    def __call__(self, x):
        return self.map[x]

    def image(self):
        return set(self.map.values())


def fusion_map(e: Embedding):
    """Source conjugacy class index -> target class index, checked on every member."""
    tgt_classes = e.target.conjugacy_classes()
    out = []
    for cls in e.source.conjugacy_classes():
        idxs = set()
        for x in cls.members:
            y = e.map[x]
            for i, tc in enumerate(tgt_classes):
                if y in tc.members:
                    idxs.add(i)
                    break
            else:
                raise ValueError(f"{e.name}: image not found in target")
        if len(idxs) != 1:
            raise ValueError(f"{e.name}: fusion not well defined")
        out.append(idxs.pop())
    return tuple(out)


def verify_stabilizer_inclusion(cell_stab: FiniteGroup, face_stab: FiniteGroup,
                                conjugator) -> bool:
    """True iff conjugator * cell_stab * conjugator^-1 is contained in face_stab."""
    ci = mat_inv3(conjugator)
    return all(mat_mul(mat_mul(conjugator, x), ci) in face_stab
               for x in cell_stab.elements)


# ------------------------- central extensions -----------------------------
class CentralExtension:
    """1 -> Z/n -> total -> base -> 1 from a normalized Z/n-valued cocycle.

    Total-group elements are pairs (h, s); the section h -> (h, 0) is unital
    because the cocycle is normalized.
    """

    def __init__(self, base: FiniteGroup, n: int, cocycle, name=""):
        self.base = base
        self.n = n
        self.name = name or f"{base.name}*"
        if callable(cocycle):
            cocycle = {(x, y): cocycle(x, y) % n
                       for x in base.elements for y in base.elements}
        self.cocycle = {k: v % n for k, v in cocycle.items()}
        e = base.identity
        for x in base.elements:
            if self.cocycle[(e, x)] or self.cocycle[(x, e)]:
                raise ValueError(f"{self.name}: cocycle not normalized")
        for x in base.elements:
            for y in base.elements:
                for z in base.elements:
                    lhs = self.cocycle[(x, y)] + self.cocycle[(base.mul(x, y), z)]
                    rhs = self.cocycle[(y, z)] + self.cocycle[(x, base.mul(y, z))]
                    if (lhs - rhs) % n:
                        raise ValueError(f"{self.name}: cocycle identity fails")
        coc = self.cocycle
        bmul, binv = base.mul, base.inv

        def pmul(p, q):
            (x, s), (y, t) = p, q
            return (bmul(x, y), (s + t + coc[(x, y)]) % n)

        def pinv(p):
            x, s = p
            xi = binv(x)
            return (xi, (-s - coc[(x, xi)]) % n)

        elems = [(x, s) for x in base.elements for s in range(n)]
        self.total = FiniteGroup(self.name, elems, pmul, pinv, (e, 0),
                                 generators=tuple((gn, 0) for gn in base.generators))
        self.central = tuple((e, s) for s in range(n))

    def section(self, h):
        return (h, 0)

    def project(self, p):
        return p[0]


def extension_from_unitary_lift(base: FiniteGroup, gen_lifts, name="") -> CentralExtension:
    """Z/2 central extension read off a 2-dimensional unitary projective lift.

    gen_lifts pairs base.generators with 2x2 cyclotomic matrices W satisfying
    W(x)W(y) = +-W(xy).  The fixed section takes the lexicographically smaller
    of {V, -V} (identity forced to +1), and the cocycle records the signs.
    """
    lifts = [cyc_mat(w) for w in gen_lifts]
    if len(lifts) != len(base.generators):
        raise ValueError("need one lift per generator")
    one = cyc_mat([[1, 0], [0, 1]])
    frontier = [(base.identity, one)]
    seen_pairs = {(base.identity, cyc_sort_key(one))}
    graph = [(base.identity, one)]
    while frontier:
        nxt = []
        for x, V in frontier:
            for gb, gl in zip(base.generators, lifts):
                y = base.mul(x, gb)
                W = _cyc_mat_mul(V, gl)
                key = (y, cyc_sort_key(W))
                if key not in seen_pairs:
                    seen_pairs.add(key)
                    graph.append((y, W))
                    nxt.append((y, W))
        frontier = nxt
    if len(graph) != 2 * len(base):
        raise ValueError(f"{name or base.name}: lift does not define a double cover "
                         f"(graph has {len(graph)} elements, expected {2 * len(base)})")
    section = {}
    for x, V in graph:
        Vn = cyc_mat_neg(V)
        C = V if cyc_sort_key(V) <= cyc_sort_key(Vn) else Vn
        section[x] = C
    section[base.identity] = one
    coc = {}
    for x in base.elements:
        for y in base.elements:
            W = _cyc_mat_mul(section[x], section[y])
            t = section[base.mul(x, y)]
            if W == t:
                coc[(x, y)] = 0
            elif W == cyc_mat_neg(t):
                coc[(x, y)] = 1
            else:
                raise ValueError("lift is not projective over the base")
    ext = CentralExtension(base, 2, coc, name=name)
    ext.section_matrices = section
    return ext


def _cyc_mat_mul(A, B):
    return tuple(tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2))
                 for i in range(2))
