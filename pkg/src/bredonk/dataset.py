"""Dataset files: parsing, cross-reference resolution, and validation gates.

A dataset is a line-oriented text file (with includes) declaring named
matrices, finite matrix groups, character tables, double covers, twists,
embeddings, a G-CW complex, and coefficient configurations.  Loading runs
every verification gate: group orders, table orthogonality, cocycle and
cover consistency, embedding homomorphism/injectivity/fusion checks,
stabilizer inclusions for each boundary incidence, and delta o delta = 0
for each coefficient mode.  Nothing is trusted as written.
"""
from __future__ import annotations

import hashlib
import itertools
from pathlib import Path

from .bredon import (Cell, CoefficientSystem, EquivariantCWComplex, Incidence,
                     assemble_chain, assemble_cochain)
from .characters import (CharacterTable, Fusion, TwistData, alpha_regular_classes,
                         fusion_from_embedding, restriction_matrix, section_fusion)
from .cyclotomic import parse_cyc
from .groups import (CentralExtension, Embedding, FiniteGroup, cyc_mat,
                     extension_from_unitary_lift, mat_identity, mat_inv3, mat_mul,
                     matrix_group, verify_stabilizer_inclusion)
from .intlinalg import IntMatrix


class DatasetError(Exception):
    """kind is 'parse' or 'validate'; section names the offending block."""

    def __init__(self, kind, section, message):
        self.kind = kind
        self.section = section
        super().__init__(f"[{section}] {message}")


class ComputeError(Exception):
    pass


# ------------------------------- parsing -----------------------------------
def _read_with_includes(path: Path, seen=None):
    seen = seen or set()
    rp = path.resolve()
    if rp in seen:
        raise DatasetError("parse", str(path), "include cycle")
    seen.add(rp)
    try:
        raw = path.read_text()
    except OSError as e:
        raise DatasetError("parse", str(path), f"cannot read: {e}")
    out = []
    for line in raw.splitlines():
        stripped = line.split("#", 1)[0].rstrip()
        if stripped.startswith("include "):
            sub = path.parent / stripped.split(None, 1)[1].strip()
            out.extend(_read_with_includes(sub, seen))
        else:
            out.append(stripped)
    return out


def _parse_sections(lines):
    sections = []
    cur = None
    for ln in lines:
        if not ln.strip():
            continue
        if ln.startswith("["):
            if not ln.endswith("]"):
                raise DatasetError("parse", ln, "malformed section header")
            parts = ln[1:-1].split()
            if len(parts) == 1:
                kind, name = parts[0], parts[0]
            elif len(parts) == 2:
                kind, name = parts
            else:
                raise DatasetError("parse", ln, "section header wants 'kind name'")
            cur = (kind, name, [])
            sections.append(cur)
        else:
            if cur is None:
                raise DatasetError("parse", ln, "content before any section")
            cur[2].append(ln.strip())
    return sections


def _kv(line, section):
    if "=" not in line:
        raise DatasetError("parse", section, f"expected 'key = value': {line!r}")
    k, v = line.split("=", 1)
    return k.strip(), v.strip()


# --------------------------- word evaluation --------------------------------
def eval_word(word, names, mul, inv, identity):
    """Evaluate 'a*b^-1*c^2' over named elements."""
    word = word.strip()
    if word in ("e", "1"):
        return identity
    acc = identity
    for tok in word.split("*"):
        tok = tok.strip()
        if "^" in tok:
            base_s, exp_s = tok.split("^")
            exp = int(exp_s)
        else:
            base_s, exp = tok, 1
        if base_s not in names:
            raise KeyError(base_s)
        m = names[base_s]
        if exp < 0:
            m = inv(m)
            exp = -exp
        for _ in range(exp):
            acc = mul(acc, m)
    return acc


def _parse_int_matrix(tokens, section, n=3):
    vals = [int(t) for t in tokens]
    if len(vals) != n * n:
        raise DatasetError("parse", section, f"matrix wants {n * n} entries")
    return tuple(tuple(vals[i * n + j] for j in range(n)) for i in range(n))


# ------------------------------- dataset -----------------------------------
class Dataset:
    def __init__(self, path):
        self.path = Path(path)
        lines = _read_with_includes(self.path)
        canonical = "\n".join(ln for ln in lines if ln.strip()) + "\n"
        self.fingerprint = hashlib.sha256(canonical.encode()).hexdigest()[:16]
        self.sections = _parse_sections(lines)
        self.meta = {}
        self.ambient = {"e": mat_identity(3)}
        self.groups = {}
        self.group_order_declared = {}
        self.tables = {}           # group key or extension key -> CharacterTable
        self.extensions = {}
        self.twists = {}
        self.embspecs = {}
        self.complexes = {}
        self.coeffs = {}           # name -> {"mode": str, "twists": {groupkey: twistkey}}
        self._emb_cache = {}
        self._block_cache = {}
        self._load()

    # ------------------------------ loading --------------------------------
    def _load(self):
        order = {"meta": 0, "ambient": 1, "group": 2, "extension": 3, "table": 4,
                 "twist": 5, "embedding": 6, "complex": 7, "coefficients": 8}
        for kind, name, body in sorted(self.sections, key=lambda s: order.get(s[0], 99)):
            handler = getattr(self, f"_load_{kind}", None)
            if handler is None:
                raise DatasetError("parse", f"{kind} {name}", f"unknown section kind {kind!r}")
            handler(name, body)
        if not self.meta.get("complex"):
            raise DatasetError("validate", "meta", "no complex selected")
        self._validate_complex()

    def _load_meta(self, name, body):
        for ln in body:
            k, v = (ln.split(None, 1) + [""])[:2]
            self.meta[k] = v.strip()

    def _load_ambient(self, name, body):
        for ln in body:
            k, v = _kv(ln, "ambient")
            if not k.startswith("gen "):
                raise DatasetError("parse", "ambient", f"unexpected line {ln!r}")
            nm = k.split()[1]
            self.ambient[nm] = _parse_int_matrix(v.split(), "ambient")

    def _eval_ambient(self, word, section):
        try:
            return eval_word(word, self.ambient, mat_mul, mat_inv3, mat_identity(3))
        except KeyError as e:
            raise DatasetError("parse", section, f"unknown matrix name {e} in {word!r}")

    def _load_group(self, name, body):
        gens = []
        declared = None
        for ln in body:
            if ln.startswith("order"):
                declared = int(ln.split()[1])
            elif ln.startswith("gens"):
                for nm in ln.split()[1:]:
                    if nm not in self.ambient:
                        raise DatasetError("parse", f"group {name}", f"unknown generator {nm}")
                    gens.append((nm, self.ambient[nm]))
            elif ln.startswith("gen "):
                k, v = _kv(ln, f"group {name}")
                nm = k.split()[1]
                m = _parse_int_matrix(v.split(), f"group {name}")
                if nm in self.ambient and self.ambient[nm] != m:
                    raise DatasetError("validate", f"group {name}",
                                       f"generator {nm} conflicts with ambient")
                self.ambient.setdefault(nm, m)
                gens.append((nm, m))
            else:
                raise DatasetError("parse", f"group {name}", f"unexpected line {ln!r}")
        if not gens:
            raise DatasetError("parse", f"group {name}", "no generators")
        try:
            G = matrix_group(name, [m for _, m in gens], bound=5000)
        except ValueError as e:
            raise DatasetError("validate", f"group {name}", str(e))
        G.gen_names = {nm: m for nm, m in gens}
        if declared is not None and len(G) != declared:
            raise DatasetError("validate", f"group {name}",
                               f"enumerated order {len(G)} != declared {declared}")
        self.group_order_declared[name] = declared
        self.groups[name] = G

    def _group_word(self, G, word, section):
        names = dict(self.ambient)
        return eval_word(word, names, mat_mul, mat_inv3, mat_identity(3))

    def _load_table(self, name, body):
        gkey = None
        classes = []  # (label, word, size)
        rows = []     # (label, values)
        for ln in body:
            if ln.startswith("group"):
                gkey = ln.split()[1]
            elif ln.startswith("class"):
                k, v = _kv(ln, f"table {name}")
                label = k.split(None, 1)[1].strip()
                if ";" not in v:
                    raise DatasetError("parse", f"table {name}", "class wants 'word ; size'")
                w, sz = v.split(";")
                classes.append((label, w.strip(), int(sz)))
            elif ln.startswith("row"):
                k, v = _kv(ln, f"table {name}")
                label = k.split(None, 1)[1].strip()
                try:
                    vals = [parse_cyc(t) for t in v.split()]
                except ValueError as e:
                    raise DatasetError("parse", f"table {name}", str(e))
                rows.append((label, vals))
            else:
                raise DatasetError("parse", f"table {name}", f"unexpected line {ln!r}")
        if gkey in self.groups:
            G = self.groups[gkey]
            reps = []
            for label, w, sz in classes:
                try:
                    reps.append(self._group_word(G, w, f"table {name}"))
                except KeyError as e:
                    raise DatasetError("parse", f"table {name}", f"unknown name {e} in {w!r}")
        elif gkey in self.extensions:
            ext = self.extensions[gkey]
            G = ext.total
            reps = []
            for label, w, sz in classes:
                reps.append(self._cover_word(ext, w, f"table {name}"))
        else:
            raise DatasetError("parse", f"table {name}", f"unknown group {gkey!r}")
        for x in reps:
            if x not in G:
                raise DatasetError("validate", f"table {name}",
                                   "class representative not in group")
        try:
            T = CharacterTable(G, reps, [v for _, v in rows],
                               labels=[l for l, _ in rows], name=f"table {name}")
        except ValueError as e:
            raise DatasetError("validate", f"table {name}", str(e))
        for (label, w, sz), col in zip(classes, range(len(classes))):
            if T.sizes[col] != sz:
                raise DatasetError("validate", f"table {name}",
                                   f"class {label}: size {T.sizes[col]} != declared {sz}")
        T.class_labels = tuple(label for label, _, _ in classes)
        self.tables[gkey] = T

    def _cover_word(self, ext, word, section):
        zbit = 0
        parts = [p for p in word.split("*")]
        base_parts = []
        for p in parts:
            if p.strip() == "z":
                zbit ^= 1
            else:
                base_parts.append(p)
        base_word = "*".join(base_parts) if base_parts else "e"
        base_elt = self._group_word(ext.base, base_word, section)
        if base_elt not in ext.base:
            raise DatasetError("validate", section, f"{word!r} leaves the cover base")
        return (base_elt, zbit)

    def _load_extension(self, name, body):
        base_key = None
        n = 2
        covergens = {}
        zero_cocycle = False
        for ln in body:
            if ln.startswith("base"):
                base_key = ln.split()[1]
            elif ln.startswith("n "):
                n = int(ln.split()[1])
            elif ln.startswith("cocycle"):
                if ln.split()[1] != "zero":
                    raise DatasetError("parse", f"extension {name}",
                                       "only 'cocycle zero' or covergen form supported")
                zero_cocycle = True
            elif ln.startswith("covergen"):
                k, v = _kv(ln, f"extension {name}")
                nm = k.split()[1]
                toks = v.split()
                if len(toks) != 4:
                    raise DatasetError("parse", f"extension {name}",
                                       "covergen wants 4 entries")
                covergens[nm] = cyc_mat([[parse_cyc(toks[0]), parse_cyc(toks[1])],
                                         [parse_cyc(toks[2]), parse_cyc(toks[3])]])
            else:
                raise DatasetError("parse", f"extension {name}", f"unexpected line {ln!r}")
        if base_key not in self.groups:
            raise DatasetError("parse", f"extension {name}", f"unknown base {base_key!r}")
        base = self.groups[base_key]
        try:
            if zero_cocycle:
                ext = CentralExtension(base, n, lambda x, y: 0, name=name)
            else:
                for nm in base.gen_names:
                    if nm not in covergens:
                        raise DatasetError("parse", f"extension {name}",
                                           f"missing covergen for {nm}")
                lifts = [covergens[nm] for nm in base.gen_names]
                if n != 2:
                    raise DatasetError("parse", f"extension {name}",
                                       "covergen form implies n = 2")
                ext = extension_from_unitary_lift(base, lifts, name=name)
        except ValueError as e:
            raise DatasetError("validate", f"extension {name}", str(e))
        ext.base_key = base_key
        self.extensions[name] = ext

    def _load_twist(self, name, body):
        ext_key = None
        declared = None
        for ln in body:
            if ln.startswith("extension"):
                ext_key = ln.split()[1]
            elif ln.startswith("basis"):
                declared = ln.split()[1:]
            else:
                raise DatasetError("parse", f"twist {name}", f"unexpected line {ln!r}")
        if ext_key not in self.extensions:
            raise DatasetError("parse", f"twist {name}", f"unknown extension {ext_key!r}")
        ext = self.extensions[ext_key]
        if ext_key not in self.tables:
            raise DatasetError("validate", f"twist {name}",
                               f"extension {ext_key} has no cover table")
        table = self.tables[ext_key]
        decl_idx = None
        if declared is not None:
            try:
                decl_idx = tuple(table.labels.index(l) for l in declared)
            except ValueError:
                raise DatasetError("validate", f"twist {name}", "declared basis label unknown")
        try:
            tw = TwistData(ext, table, declared_basis=decl_idx, name=name)
            tw.verify_center_restriction()
            alpha_regular_classes(tw)
        except ValueError as e:
            raise DatasetError("validate", f"twist {name}", str(e))
        self.twists[name] = tw

    def _load_embedding(self, name, body):
        spec = {"source": None, "target": None, "conjugator": "e",
                "images": {}, "lifts": {}, "fuse": {}}
        for ln in body:
            if ln.startswith("source"):
                spec["source"] = ln.split()[1]
            elif ln.startswith("target"):
                spec["target"] = ln.split()[1]
            elif ln.startswith("conjugator"):
                spec["conjugator"] = ln.split(None, 1)[1].strip()
            elif ln.startswith("image"):
                k, v = _kv(ln, f"embedding {name}")
                spec["images"][k.split()[1]] = v
            elif ln.startswith("lift"):
                k, v = _kv(ln, f"embedding {name}")
                if v.strip() != "z":
                    raise DatasetError("parse", f"embedding {name}", "lift value must be z")
                spec["lifts"][k.split(None, 1)[1].strip()] = 1
            elif ln.startswith("fuse"):
                k, v = _kv(ln, f"embedding {name}")
                spec["fuse"][k.split(None, 1)[1].strip()] = v.strip()
            else:
                raise DatasetError("parse", f"embedding {name}", f"unexpected line {ln!r}")
        for side in ("source", "target"):
            if spec[side] not in self.groups:
                raise DatasetError("parse", f"embedding {name}",
                                   f"unknown {side} group {spec[side]!r}")
        self.embspecs[name] = spec

    def _load_complex(self, name, body):
        cells = []
        boundaries = {}
        for ln in body:
            if ln.startswith("cell"):
                toks = ln.split()
                spec = dict(zip(toks[2::2], toks[3::2]))
                cells.append(Cell(id=toks[1], dim=int(spec["dim"]),
                                  group_key=spec["group"], label=spec.get("label", "")))
            elif ln.startswith("bnd"):
                k, v = _kv(ln, f"complex {name}")
                cid = k.split()[1]
                incs = []
                for part in v.split(";"):
                    toks = part.split()
                    if len(toks) != 4:
                        raise DatasetError("parse", f"complex {name}",
                                           f"incidence wants 'face sign conj emb': {part!r}")
                    face, sign_s, conj_w, emb = toks
                    conj = self._eval_ambient(conj_w, f"complex {name}")
                    incs.append(Incidence(face=face, sign=int(sign_s),
                                          conjugator=conj, embedding=emb))
                boundaries[cid] = incs
            else:
                raise DatasetError("parse", f"complex {name}", f"unexpected line {ln!r}")
        for c in cells:
            if c.group_key not in self.groups:
                raise DatasetError("parse", f"complex {name}",
                                   f"cell {c.id}: unknown group {c.group_key!r}")
        try:
            X = EquivariantCWComplex(cells, boundaries)
        except ValueError as e:
            raise DatasetError("validate", f"complex {name}", str(e))
        self.complexes[name] = X

    def _load_coefficients(self, name, body):
        mode = None
        twmap = {}
        for ln in body:
            if ln.startswith("mode"):
                mode = ln.split()[1]
            elif ln.startswith("twist"):
                k, v = _kv(ln, f"coefficients {name}")
                twmap[k.split()[1]] = v.strip()
            else:
                raise DatasetError("parse", f"coefficients {name}", f"unexpected line {ln!r}")
        if mode not in ("untwisted", "cover_ring", "isotypic"):
            raise DatasetError("parse", f"coefficients {name}", f"bad mode {mode!r}")
        for gk, tk in twmap.items():
            if gk not in self.groups:
                raise DatasetError("parse", f"coefficients {name}", f"unknown group {gk!r}")
            if tk not in self.twists:
                raise DatasetError("parse", f"coefficients {name}", f"unknown twist {tk!r}")
        if mode == "untwisted" and twmap:
            raise DatasetError("validate", f"coefficients {name}",
                               "untwisted mode does not take twists")
        self.coeffs[name] = {"mode": mode, "twists": twmap}

    # --------------------------- resolved objects ---------------------------
    def complex(self):
        return self.complexes[self.meta["complex"]]

    def coefficients_by_mode(self, mode):
        hits = [nm for nm, c in self.coeffs.items() if c["mode"] == mode]
        if not hits:
            raise DatasetError("validate", "coefficients",
                               f"no coefficients section with mode {mode!r}")
        if len(hits) > 1:
            raise DatasetError("validate", "coefficients",
                               f"mode {mode!r} is ambiguous: {hits}")
        return hits[0]

    def embedding(self, emb_id, conjugator=None):
        """The verified Embedding for a spec, with the incidence's conjugator."""
        key = (emb_id, conjugator)
        if key in self._emb_cache:
            return self._emb_cache[key]
        spec = self.embspecs[emb_id]
        src = self.groups[spec["source"]]
        tgt = self.groups[spec["target"]]
        conj_spec = self._eval_ambient(spec["conjugator"], f"embedding {emb_id}")
        if conjugator is not None and conj_spec != mat_identity(3) \
                and conjugator != conj_spec:
            raise DatasetError("validate", f"embedding {emb_id}",
                               "conjugator disagrees with the incidence")
        conj = conjugator if conjugator is not None else conj_spec
        images = []
        for nm, m in src.gen_names.items():
            w = spec["images"].get(nm)
            images.append(self._eval_ambient(w, f"embedding {emb_id}") if w else m)
        try:
            e = Embedding(src, tgt, images,
                          conjugator=None if conj == mat_identity(3) else conj,
                          name=emb_id)
        except ValueError as err:
            raise DatasetError("validate", f"embedding {emb_id}", str(err))
        ci = mat_inv3(conj)
        for x in src.elements:
            if e.map[x] != mat_mul(mat_mul(ci, x), conj):
                raise DatasetError("validate", f"embedding {emb_id}",
                                   "map is not conjugation by the stated element")
        self._emb_cache[key] = e
        return e

    # ------------------------------ bases -----------------------------------
    def _basis(self, group_key, coeff):
        tk = coeff["twists"].get(group_key)
        if tk is None:
            return ("linear", self.tables[group_key])
        tw = self.twists[tk]
        if coeff["mode"] == "cover_ring":
            return ("cover", tw)
        return ("iso", tw)

    def basis_size(self, group_key, coeff):
        kind, obj = self._basis(group_key, coeff)
        if kind == "linear":
            return obj.n_irreducibles
        if kind == "cover":
            return obj.cover_table.n_irreducibles
        return len(obj.twisted_basis)

    def basis_labels(self, group_key, coeff):
        kind, obj = self._basis(group_key, coeff)
        if kind == "linear":
            return obj.labels
        if kind == "cover":
            return obj.cover_table.labels
        return tuple(obj.cover_table.labels[i] for i in obj.twisted_basis)

    # ------------------------------ blocks -----------------------------------
    def restriction_block(self, emb_id, coeff_key, conjugator=None) -> IntMatrix:
        """Restriction matrix of an embedding: rows = target basis, cols = source."""
        coeff = self.coeffs[coeff_key]
        cache_key = (emb_id, coeff_key, conjugator)
        if cache_key in self._block_cache:
            return self._block_cache[cache_key]
        spec = self.embspecs[emb_id]
        fkind, fobj = self._basis(spec["target"], coeff)
        ckind, cobj = self._basis(spec["source"], coeff)
        if fkind == "linear" and ckind == "linear":
            R = self._block_linear(emb_id, conjugator)
        elif fkind != "linear" and ckind == "linear":
            R = self._block_cover_to_linear(emb_id, fobj, conjugator)
        elif fkind != "linear" and ckind != "linear":
            R = self._block_cover_to_cover(emb_id, fobj, cobj, conjugator)
        else:
            raise DatasetError("validate", f"embedding {emb_id}",
                               "twisted cell under an untwisted face is inconsistent")
        if fkind == "iso":
            R = IntMatrix([R.entries[i] for i in fobj.twisted_basis])
        if ckind == "iso":
            R = IntMatrix([[row[j] for j in cobj.twisted_basis] for row in R.entries]) \
                if R.rows else IntMatrix.zero(0, len(cobj.twisted_basis))
        self._block_cache[cache_key] = R
        return R

    def _block_linear(self, emb_id, conjugator):
        spec = self.embspecs[emb_id]
        e = self.embedding(emb_id, conjugator)
        fus = fusion_from_embedding(e, self.tables[spec["source"]],
                                    self.tables[spec["target"]])
        self._check_declared_fusion(emb_id, fus)
        try:
            return restriction_matrix(fus)
        except ValueError as err:
            raise ComputeError(f"[embedding {emb_id}] {err}")

    def _block_cover_to_linear(self, emb_id, tw, conjugator):
        spec = self.embspecs[emb_id]
        e = self.embedding(emb_id, conjugator)
        src_table = self.tables[spec["source"]]
        lift_bits = {}
        for label, bit in spec["lifts"].items():
            if label not in src_table.class_labels:
                raise DatasetError("validate", f"embedding {emb_id}",
                                   f"lift label {label!r} not a source class")
            lift_bits[src_table.class_labels.index(label)] = bit
        fus = section_fusion(src_table, tw.extension, tw.cover_table,
                             lambda x: e.map[x], lift_bits=lift_bits, name=emb_id)
        self._check_declared_fusion(emb_id, fus)
        try:
            return restriction_matrix(fus)
        except ValueError as err:
            raise ComputeError(f"[embedding {emb_id}] {err} "
                               f"(a wrong rectification lift shows up here)")

    def _block_cover_to_cover(self, emb_id, tw_face, tw_cell, conjugator):
        spec = self.embspecs[emb_id]
        e = self.embedding(emb_id, conjugator)
        ext_s, ext_t = tw_cell.extension, tw_face.extension
        src_gens = list(ext_s.base.generators)
        candidates = []
        for bits in itertools.product((0, 1), repeat=len(src_gens)):
            images = [(e.map[g], b) for g, b in zip(src_gens, bits)]
            try:
                pe = Embedding(ext_s.total, ext_t.total, images,
                               name=f"{emb_id}*")
            except ValueError:
                continue
            candidates.append(pe)
        if not candidates:
            raise DatasetError("validate", f"embedding {emb_id}",
                               "no cover-level lift of the embedding exists "
                               "(incompatible cocycles)")
        mats = []
        for pe in candidates:
            fus = fusion_from_embedding(pe, tw_cell.cover_table, tw_face.cover_table)
            try:
                mats.append(restriction_matrix(fus))
            except ValueError as err:
                raise ComputeError(f"[embedding {emb_id}] {err}")
        if any(m != mats[0] for m in mats[1:]):
            raise DatasetError("validate", f"embedding {emb_id}",
                               "cover-level lifts give inconsistent restrictions")
        self._check_declared_fusion(
            emb_id, fusion_from_embedding(candidates[0], tw_cell.cover_table,
                                          tw_face.cover_table))
        R = mats[0]
        # central characters must not mix across the cover-to-cover block
        for i in range(R.rows):
            for j in range(R.cols):
                if R[i, j] and ((i in tw_face.twisted_basis) !=
                                (j in tw_cell.twisted_basis)):
                    raise DatasetError("validate", f"embedding {emb_id}",
                                       "block mixes central characters")
        return R

    def _check_declared_fusion(self, emb_id, fus: Fusion):
        spec = self.embspecs[emb_id]
        if not spec["fuse"]:
            return
        src_labels = fus.source.class_labels
        tgt_labels = fus.target.class_labels
        for slabel, tlabel in spec["fuse"].items():
            if slabel not in src_labels or tlabel not in tgt_labels:
                raise DatasetError("validate", f"embedding {emb_id}",
                                   f"fusion check labels {slabel!r} -> {tlabel!r} unknown")
            k = src_labels.index(slabel)
            want = tgt_labels.index(tlabel)
            if fus.cols[k] != want:
                raise DatasetError("validate", f"embedding {emb_id}",
                                   f"computed fusion sends {slabel!r} to "
                                   f"{tgt_labels[fus.cols[k]]!r}, dataset says {tlabel!r}")

    # --------------------------- validation ---------------------------------
    def _validate_complex(self):
        X = self.complex()
        for cid, incs in X.boundaries.items():
            cell_g = self.groups[X.cells[cid].group_key]
            for inc in incs:
                face_g = self.groups[X.cells[inc.face].group_key]
                ci = mat_inv3(inc.conjugator)
                if not verify_stabilizer_inclusion(cell_g, face_g, ci):
                    raise DatasetError(
                        "validate", f"complex {self.meta['complex']}",
                        f"stabilizer inclusion fails for {cid} -> {inc.face}")
                if inc.embedding not in self.embspecs:
                    raise DatasetError("validate", f"complex {self.meta['complex']}",
                                       f"unknown embedding {inc.embedding!r}")
                spec = self.embspecs[inc.embedding]
                if spec["source"] != X.cells[cid].group_key \
                        or spec["target"] != X.cells[inc.face].group_key:
                    raise DatasetError("validate", f"embedding {inc.embedding}",
                                       "source/target do not match the incidence")

    def coefficient_system(self, coeff_key) -> CoefficientSystem:
        coeff = self.coeffs[coeff_key]
        X = self.complex()
        sizes = {cid: self.basis_size(c.group_key, coeff)
                 for cid, c in X.cells.items()}

        def block_fn(cell_id, inc: Incidence):
            conj = None if inc.conjugator == mat_identity(3) else inc.conjugator
            return self.restriction_block(inc.embedding, coeff_key, conjugator=conj)

        twisted = frozenset(cid for cid, c in X.cells.items()
                            if c.group_key in coeff["twists"])
        return CoefficientSystem(coeff["mode"], sizes, block_fn,
                                 twisted_cells=twisted, label=coeff_key)

    def assemble(self, mode, direction="cochain"):
        coeff_key = self.coefficients_by_mode(mode)
        C = self.coefficient_system(coeff_key)
        X = self.complex()
        f = self.fingerprint
        if direction == "cochain":
            return assemble_cochain(X, C, fingerprint=f)
        return assemble_chain(X, C, fingerprint=f)

    def verify_all(self):
        """Run every gate, including assembly of each declared mode. Returns notes."""
        notes = []
        for gk, G in self.groups.items():
            notes.append(f"group {gk}: order {len(G)}"
                         + (" (declared)" if self.group_order_declared.get(gk) else ""))
        for tk in self.tables:
            notes.append(f"table {tk}: orthogonality exact")
        for nk, tw in self.twists.items():
            reg = alpha_regular_classes(tw)
            notes.append(f"twist {nk}: |twisted basis| = {len(tw.twisted_basis)} "
                         f"= #regular classes = {len(reg)}")
        X = self.complex()
        notes.append(f"complex {self.meta['complex']}: "
                     f"{sum(len(v) for v in X.by_dim.values())} cell orbits, "
                     f"stabilizer inclusions verified")
        for name, coeff in self.coeffs.items():
            B = self.assemble(coeff["mode"])
            notes.append(f"coefficients {name}: delta o delta = 0, "
                         f"ranks {[m.rows for m in B.diffs]}")
        return notes
