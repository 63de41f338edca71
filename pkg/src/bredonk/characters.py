"""Character tables, inner products, restriction/induction, and twisted bases.

Tables are *data*: rows are transcribed values, and the constructor verifies
them (exact row and column orthogonality, degree sum) rather than computing
them from scratch.  Restriction along an inclusion is evaluated through a
class fusion; induction is its Frobenius transpose, with an independent
classical-formula crosscheck available for tests.

Twisted coefficient bases come from a Schur-type double cover: the twisted
basis is the set of cover irreducibles on which the central element acts by
-1, and rectified characters evaluate those rows through the fixed section.
"""
from __future__ import annotations

from fractions import Fraction

from .cyclotomic import CycNumber, ZERO
from .groups import CentralExtension, Embedding, FiniteGroup, fusion_map
from .intlinalg import IntMatrix


def _cyc(x):
    return x if isinstance(x, CycNumber) else CycNumber.from_rational(Fraction(x))


class CharacterTable:
    """Irreducible characters of a finite group, in a fixed printed order."""

    def __init__(self, group: FiniteGroup, class_reps, rows, labels=None, name=""):
        self.group = group
        self.name = name or f"table({group.name})"
        self.class_reps = tuple(class_reps)
        self.rows = tuple(tuple(_cyc(v) for v in row) for row in rows)
        self.labels = tuple(labels) if labels else tuple(f"chi{i+1}" for i in range(len(self.rows)))
        classes = group.conjugacy_classes()
        cols = []
        for r in self.class_reps:
            cols.append(group.class_index_of(r))
        if sorted(cols) != list(range(len(classes))):
            raise ValueError(f"{self.name}: class representatives do not hit each "
                             f"conjugacy class exactly once")
        self.class_cols = tuple(cols)                 # table column -> group class idx
        self.col_of_class = {c: k for k, c in enumerate(cols)}
        self.sizes = tuple(classes[c].size for c in cols)
        self.verify()

    @property
    def n_irreducibles(self):
        return len(self.rows)

    def verify(self):
        n = len(self.group)
        if len(self.rows) != len(self.class_reps):
            raise ValueError(f"{self.name}: table is not square")
        for row in self.rows:
            if len(row) != len(self.class_reps):
                raise ValueError(f"{self.name}: ragged row")
        degs = [row[self._identity_col()] for row in self.rows]
        s = sum((d * d for d in degs), ZERO)
        if s.as_rational() != n:
            raise ValueError(f"{self.name}: degree sum {s} != |G| = {n}")
        for i, ri in enumerate(self.rows):
            for j in range(i, len(self.rows)):
                rj = self.rows[j]
                acc = ZERO
                for k, sz in enumerate(self.sizes):
                    acc = acc + sz * ri[k] * rj[k].conj()
                want = n if i == j else 0
                if acc.as_rational() != want:
                    raise ValueError(f"{self.name}: rows {self.labels[i]}, "
                                     f"{self.labels[j]} fail orthogonality")
        # column orthogonality (follows from the above for square tables, but
        # catches transposed/corrupted data loudly)
        for k in range(len(self.class_reps)):
            for l in range(k, len(self.class_reps)):
                acc = ZERO
                for row in self.rows:
                    acc = acc + row[k] * row[l].conj()
                want = Fraction(n, self.sizes[k]) if k == l else 0
                if acc.as_rational() != want:
                    raise ValueError(f"{self.name}: columns {k}, {l} fail orthogonality")

    def _identity_col(self):
        return self.col_of_class[self.group.class_index_of(self.group.identity)]

    def degree(self, i):
        return self.rows[i][self._identity_col()]

    def column_of(self, element):
        return self.col_of_class[self.group.class_index_of(element)]

    def class_function(self, values):
        return ClassFunction(self, tuple(_cyc(v) for v in values))

    def irreducible(self, i):
        return ClassFunction(self, self.rows[i])


class ClassFunction:
    def __init__(self, table: CharacterTable, values):
        if len(values) != len(table.class_reps):
            raise ValueError("value count != class count")
        self.table = table
        self.values = tuple(_cyc(v) for v in values)

    def __add__(self, other):
        if other.table is not self.table:
            raise ValueError("class functions on different tables")
        return ClassFunction(self.table, tuple(a + b for a, b in zip(self.values, other.values)))

    def __eq__(self, other):
        return (isinstance(other, ClassFunction) and other.table is self.table
                and other.values == self.values)

    def __hash__(self):
        return hash((id(self.table), self.values))


def inner_product(f: ClassFunction, g: ClassFunction) -> CycNumber:
    """(1/|G|) sum over classes of size * f * conj(g), exact."""
    if f.table is not g.table:
        raise ValueError("inner product across different tables")
    acc = ZERO
    for sz, a, b in zip(f.table.sizes, f.values, g.values):
        acc = acc + sz * a * b.conj()
    return Fraction(1, len(f.table.group)) * acc


# ------------------------------ fusions ------------------------------------
class Fusion:
    """source-table column -> target-table column, for one inclusion."""

    def __init__(self, source: CharacterTable, target: CharacterTable, cols, name=""):
        self.source = source
        self.target = target
        self.cols = tuple(cols)
        self.name = name
        if len(self.cols) != len(source.class_reps):
            raise ValueError(f"fusion {name}: wrong length")


def fusion_from_embedding(e: Embedding, source_table: CharacterTable,
                          target_table: CharacterTable) -> Fusion:
    """Fusion computed from a verified embedding (well-definedness re-checked)."""
    gmap = fusion_map(e)  # source group class -> target group class
    cols = []
    for k, _ in enumerate(source_table.class_reps):
        src_cls = source_table.class_cols[k]
        cols.append(target_table.col_of_class[gmap[src_cls]])
    return Fusion(source_table, target_table, cols, name=e.name)


def section_fusion(source_table: CharacterTable, ext: CentralExtension,
                   cover_table: CharacterTable, element_map, lift_bits=None,
                   name="") -> Fusion:
    """Fusion of an untwisted group into a cover table through the section.

    element_map carries a source element into ext.base; lift_bits optionally
    sends a source table column to 1 to select the z-translated lift for that
    class (the rectification choice; it only matters for classes that are not
    closed under the central translation).
    """
    lift_bits = lift_bits or {}
    cols = []
    for k, rep in enumerate(source_table.class_reps):
        base_elt = element_map(rep)
        if base_elt not in ext.base:
            raise ValueError(f"section fusion {name}: image not in cover base")
        pair = (base_elt, lift_bits.get(k, 0) % ext.n)
        cols.append(cover_table.column_of(pair))
    return Fusion(source_table, cover_table, cols, name=name)


# ------------------------- restriction / induction -------------------------
def restrict(f: ClassFunction, fusion: Fusion) -> ClassFunction:
    if f.table is not fusion.target:
        raise ValueError("function is not on the fusion's big table")
    return ClassFunction(fusion.source, tuple(f.values[c] for c in fusion.cols))


def decompose(f: ClassFunction, table: CharacterTable = None):
    """Multiplicities of f in the irreducible basis; must be non-negative ints."""
    table = table or f.table
    out = []
    for i in range(table.n_irreducibles):
        m = inner_product(f, table.irreducible(i))
        q = m.as_rational()
        if q is None or q.denominator != 1 or q < 0:
            raise ValueError(f"{table.name}: non-integral or negative multiplicity {m} "
                             f"(corrupted fusion or table data)")
        out.append(int(q))
    return tuple(out)


def restriction_matrix(fusion: Fusion) -> IntMatrix:
    """Row per big-table irreducible, entries = multiplicities in the small basis."""
    rows = []
    for i in range(fusion.target.n_irreducibles):
        f = restrict(fusion.target.irreducible(i), fusion)
        rows.append(decompose(f, fusion.source))
    return IntMatrix(rows)


def induction_matrix(fusion: Fusion) -> IntMatrix:
    """Frobenius reciprocity: induction is the transpose of restriction."""
    return restriction_matrix(fusion).transpose()


def induced_character(tau_values, fusion: Fusion, image_of_col):
    """Classical induced-character formula, as an independent crosscheck.

    tau_values: one value per small-table column.  image_of_col(k) gives a
    target-group element generating... rather, the *set* of target elements
    lying over the small class k.  Returns values on the big table's columns.

    ind(tau)(g) = (1/|K|) * sum over x in G with x^-1 g x in K of tau(x^-1 g x)
    """
    G = fusion.target.group
    # target element -> small column (over the image subgroup)
    member_col = {}
    for k in range(len(fusion.source.class_reps)):
        for y in image_of_col(k):
            member_col[y] = k
    ksize = len(member_col)
    out = []
    for col in range(len(fusion.target.class_reps)):
        g = fusion.target.class_reps[col]
        acc = ZERO
        for x in G.elements:
            y = G.mul(G.mul(G.inv(x), g), x)
            if y in member_col:
                acc = acc + tau_values[member_col[y]]
        out.append(Fraction(1, ksize) * acc)
    return tuple(out)


# ------------------------------- twists ------------------------------------
class TwistData:
    """A double cover with the distinguished central character z -> -1.

    twisted_basis lists the cover irreducibles where the center acts by -1;
    these are the alpha-twisted characters of the base, read through the
    section.
    """

    def __init__(self, extension: CentralExtension, cover_table: CharacterTable,
                 declared_basis=None, name=""):
        if extension.n != 2:
            raise ValueError("only order-2 twists are bundled")
        self.extension = extension
        self.cover_table = cover_table
        self.name = name or f"twist({extension.name})"
        if cover_table.group is not extension.total:
            raise ValueError(f"{self.name}: cover table is not on the extension's total group")
        z = (extension.base.identity, 1)
        zc = cover_table.column_of(z)
        ic = cover_table._identity_col()
        basis = []
        for i, row in enumerate(cover_table.rows):
            if row[zc] == -row[ic]:
                basis.append(i)
            elif row[zc] != row[ic]:
                raise ValueError(f"{self.name}: row {cover_table.labels[i]} has no "
                                 f"central character")
        self.twisted_basis = tuple(basis)
        if declared_basis is not None and tuple(declared_basis) != self.twisted_basis:
            raise ValueError(f"{self.name}: declared twisted basis "
                             f"{declared_basis} != computed {self.twisted_basis}")

    def verify_center_restriction(self):
        """value at the z-translated class == central character * value, everywhere."""
        ext, tab = self.extension, self.cover_table
        z = (ext.base.identity, 1)
        ic = tab._identity_col()
        for i, row in enumerate(tab.rows):
            sign = -1 if i in self.twisted_basis else 1
            for k, rep in enumerate(tab.class_reps):
                zk = tab.column_of(ext.total.mul(z, rep))
                if row[zk] != sign * row[k]:
                    raise ValueError(f"{self.name}: center restriction fails at row "
                                     f"{tab.labels[i]}, column {k}")


def alpha_regular_classes(t: TwistData):
    """Base classes h with cocycle(h, x) = cocycle(x, h) for all x centralizing h.

    The count always equals the number of twisted irreducibles; that equality
    is asserted here.
    """
    base = t.extension.base
    coc = t.extension.cocycle
    out = []
    for idx, cls in enumerate(base.conjugacy_classes()):
        h = cls.representative
        if all(coc[(h, x)] == coc[(x, h)] for x in base.centralizer(h)):
            out.append(idx)
    if len(out) != len(t.twisted_basis):
        raise ValueError(f"{t.name}: {len(out)} regular classes vs "
                         f"{len(t.twisted_basis)} twisted irreducibles")
    return tuple(out)


def rectified_characters(t: TwistData, base_table: CharacterTable):
    """Twisted characters of the base group: cover rows read through the section.

    Values depend on the chosen class representatives, as twisted characters
    do; the base table fixes those representatives.
    """
    if base_table.group is not t.extension.base:
        raise ValueError("base table is on the wrong group")
    out = []
    for i in t.twisted_basis:
        row = t.cover_table.rows[i]
        vals = []
        for rep in base_table.class_reps:
            vals.append(row[t.cover_table.column_of((rep, 0))])
        out.append(tuple(vals))
    return tuple(out)
