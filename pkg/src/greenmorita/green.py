"""Admissible degree sets and the triangular Ext-block algebras they cut out.

For a finite set of naturals containing 0, the block algebra of a module X
has carrier  (+)_{i,j, j-i in the set}  Ext^{j-i}(X, X), placed at position
(i, j) of a matrix indexed by the set.  Entries multiply like matrices, with
the Yoneda composition on Ext classes and any product whose landing degree
falls outside the set truncated to zero.  The admissibility condition --
for p, q, r in the set with p+q+r in the set, p+q is in iff q+r is -- is
exactly what makes this truncation associative, and ``associativity_probe``
exists to watch it fail on non-admissible sets.

Basis order is (row position asc, column position asc, coset index asc), so
structure constants are byte-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct

from .exactlin import Echelon, Mat, vec_axpy
from .algebra import Algebra, AlgebraError, from_structure_constants, radical
from .module import Bimodule
from .homology import _engine, yoneda_product


def admissibility_witness(elements):
    """None if the set is admissible; otherwise a witness triple (p, q, r)
    with p+q+r in the set but exactly one of p+q, q+r in it."""
    s = sorted(set(elements))
    if not s or s[0] != 0:
        return None if 0 in s else ("missing-zero",)
    sset = set(s)
    for p, q, r in iproduct(s, s, s):
        if p + q + r in sset and ((p + q in sset) != (q + r in sset)):
            return (p, q, r)
    return None


def is_admissible(elements):
    """Exhaustive check of the closure condition, 0 required."""
    s = set(elements)
    if 0 not in s:
        return False
    return admissibility_witness(s) is None


@dataclass(frozen=True)
class AdmissibleSet:
    """Sorted distinct naturals containing 0, satisfying the closure
    condition (verified exhaustively at construction)."""

    elements: tuple

    def __init__(self, elements):
        elems = tuple(sorted(set(int(x) for x in elements)))
        if not elems or elems[0] < 0:
            raise AlgebraError("degree sets are subsets of the naturals")
        if 0 not in elems:
            raise AlgebraError("degree sets must contain 0")
        w = admissibility_witness(elems)
        if w is not None:
            raise AlgebraError(f"set is not admissible; witness triple {w}")
        object.__setattr__(self, "elements", elems)

    @property
    def max(self):
        return self.elements[-1]

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)


@dataclass
class GreenAlgebra:
    """The assembled block algebra plus its bookkeeping.

    ``blocks`` lists (row, col, ExtSpace, offset); ``result`` is the
    validated structure-constant algebra; ``diagonal_idempotents[i]`` is the
    identity coset sitting at diagonal position i.
    """

    base: object
    module: object
    phi: object
    result: Algebra
    blocks: list
    diagonal_idempotents: dict

    @property
    def dim(self):
        return self.result.dim

    def block_slice(self, i, j):
        for (bi, bj, space, off) in self.blocks:
            if (bi, bj) == (i, j):
                return off, space.dim
        return None

    def global_index(self, i, j, t):
        off, size = self.block_slice(i, j)
        assert 0 <= t < size
        return off + t


def _assemble_blocks(a, x, positions):
    """Carrier blocks and the multiplication table for the given position
    set (admissible or not); shared by the constructor and the probe."""
    engine = _engine(a)
    pos = sorted(set(positions))
    pset = set(pos)
    blocks = []
    off = 0
    for i in pos:
        for j in pos:
            d = j - i
            if d < 0 or d not in pset:
                continue
            space = engine.ext(x, x, d)
            blocks.append((i, j, space, off))
            off += space.dim
    dim = off
    field = a.field

    index = {}
    for (i, j, space, boff) in blocks:
        for t in range(space.dim):
            index[(i, j, t)] = boff + t

    prod_cache = {}

    def degree_product(p, q, s, t):
        key = (p, q)
        if key not in prod_cache:
            sp = engine.ext(x, x, p)
            sq = engine.ext(x, x, q)
            tab = {}
            for ss in range(sp.dim):
                for tt in range(sq.dim):
                    el = yoneda_product(sp.basis()[ss], sq.basis()[tt])
                    tab[(ss, tt)] = el.coords
            prod_cache[key] = tab
        return prod_cache[key][(s, t)]

    table = [[{} for _ in range(dim)] for _ in range(dim)]
    for (i, j, sp, off1) in blocks:
        for (k, l, sq, off2) in blocks:
            if j != k:
                continue
            if (l - i) not in pset:
                continue  # landing degree truncated to zero
            tgt = None
            for (bi, bj, bspace, boff) in blocks:
                if (bi, bj) == (i, l):
                    tgt = (bspace, boff)
                    break
            assert tgt is not None
            bspace, boff = tgt
            p, q = j - i, l - j
            for s in range(sp.dim):
                row = table[off1 + s]
                for t in range(sq.dim):
                    coords = degree_product(p, q, s, t)
                    if coords:
                        row[off2 + t] = {boff + c: v for c, v in
                                         coords.items()}
    unit = {}
    engine_id = engine.identity_ext0(x)
    for (i, j, space, boff) in blocks:
        if i == j:
            for c, v in engine_id.coords.items():
                unit[boff + c] = v
    labels = []
    for (i, j, space, boff) in blocks:
        for t in range(space.dim):
            labels.append(f"({i},{j})#{t}")
    diag = {}
    for (i, j, space, boff) in blocks:
        if i == j:
            diag[i] = {boff + c: v for c, v in engine_id.coords.items()}
    return blocks, dim, table, unit, labels, diag


def green_algebra(a, x, phi):
    """The block algebra of x over the admissible set phi, validated through
    the full structure-constant checks (exhaustive associativity included)."""
    if not isinstance(phi, AdmissibleSet):
        phi = AdmissibleSet(phi)
    blocks, dim, table, unit, labels, diag = _assemble_blocks(
        a, x, phi.elements)
    result = from_structure_constants(dim, table, unit, a.field, labels)
    return GreenAlgebra(a, x, phi, result, blocks, diag)


@dataclass
class AssociativityReport:
    positions: tuple
    dim: int
    associative: bool
    witness: tuple = None   # (basis labels, block data) of the failing triple

    def describe(self):
        if self.associative:
            return f"associative on {self.positions} (dim {self.dim})"
        (u, v, w), detail = self.witness
        return (f"associativity fails on {self.positions} at basis triple "
                f"{u}, {v}, {w} ({detail})")


def associativity_probe(a, x, elements):
    """Build the would-be block algebra over an arbitrary 0-containing set
    and exhaustively test associativity, returning a witness triple on
    failure.  This is the research mode: non-admissible sets never leak into
    downstream computations because only the report escapes."""
    elems = tuple(sorted(set(int(e) for e in elements)))
    if 0 not in elems:
        raise AlgebraError("probe sets must contain 0")
    blocks, dim, table, unit, labels, diag = _assemble_blocks(a, x, elems)
    field = a.field

    def mul_vec(u, v):
        acc = {}
        for iu, cu in u.items():
            ti = table[iu]
            for iv, cv in v.items():
                vec_axpy(field, acc, field.mul(cu, cv), ti[iv])
        return acc

    for i in range(dim):
        ei = {i: field.one}
        for j in range(dim):
            tij = table[i][j]
            tj = table[j]
            for l in range(dim):
                lhs = {}
                for k, c in tij.items():
                    vec_axpy(field, lhs, c, table[k][l])
                rhs = {}
                for k, c in tj[l].items():
                    vec_axpy(field, rhs, c, table[i][k])
                if lhs != rhs:
                    detail = (f"blocks {labels[i]}, {labels[j]}, {labels[l]}")
                    return AssociativityReport(
                        elems, dim, False,
                        ((labels[i], labels[j], labels[l]), detail))
    return AssociativityReport(elems, dim, True)


def green_bimodule(a, x, y, phi, gx=None, gy=None):
    """The block bimodule with (i, j) entry Ext^{j-i}(x, y), a bimodule over
    (block algebra of x, block algebra of y) acting by truncated Yoneda
    composition on the matching side."""
    if not isinstance(phi, AdmissibleSet):
        phi = AdmissibleSet(phi)
    if gx is None:
        gx = green_algebra(a, x, phi)
    if gy is None:
        gy = green_algebra(a, y, phi)
    engine = _engine(a)
    pos = list(phi.elements)
    pset = set(pos)
    blocks = []
    off = 0
    for i in pos:
        for j in pos:
            d = j - i
            if d < 0 or d not in pset:
                continue
            space = engine.ext(x, y, d)
            blocks.append((i, j, space, off))
            off += space.dim
    dim = off
    field = a.field

    def find_block(blist, i, j):
        for (bi, bj, space, boff) in blist:
            if (bi, bj) == (i, j):
                return space, boff
        return None

    left_cache = {}
    right_cache = {}

    def left_prod(p, q, s, t):
        # Ext^p(x,x) rep s composed into Ext^q(x,y) rep t
        key = (p, q)
        if key not in left_cache:
            sp = engine.ext(x, x, p)
            sq = engine.ext(x, y, q)
            left_cache[key] = {
                (ss, tt): yoneda_product(sp.basis()[ss], sq.basis()[tt]).coords
                for ss in range(sp.dim) for tt in range(sq.dim)}
        return left_cache[key][(s, t)]

    def right_prod(p, q, s, t):
        # Ext^p(x,y) rep s composed into Ext^q(y,y) rep t
        key = (p, q)
        if key not in right_cache:
            sp = engine.ext(x, y, p)
            sq = engine.ext(y, y, q)
            right_cache[key] = {
                (ss, tt): yoneda_product(sp.basis()[ss], sq.basis()[tt]).coords
                for ss in range(sp.dim) for tt in range(sq.dim)}
        return right_cache[key][(s, t)]

    left_acts = [Mat.zeros(dim, dim, field) for _ in range(gx.dim)]
    for (i, j, sp, goff) in gx.blocks:
        for (k, l, sq, moff) in blocks:
            if j != k or (l - i) not in pset:
                continue
            tspace, toff = find_block(blocks, i, l)
            p, q = j - i, l - k
            for s in range(sp.dim):
                mat = left_acts[goff + s]
                for t in range(sq.dim):
                    coords = left_prod(p, q, s, t)
                    for c, v in coords.items():
                        mat.data[toff + c][moff + t] = v
    right_acts = [Mat.zeros(dim, dim, field) for _ in range(gy.dim)]
    for (i, j, sp, moff) in blocks:
        for (k, l, sq, goff) in gy.blocks:
            if j != k or (l - i) not in pset:
                continue
            tspace, toff = find_block(blocks, i, l)
            p, q = j - i, l - k
            for s in range(sp.dim):
                for t in range(sq.dim):
                    coords = right_prod(p, q, s, t)
                    mat = right_acts[goff + t]
                    for c, v in coords.items():
                        mat.data[toff + c][moff + s] = v
    bm = Bimodule(gx.result, gy.result, dim, left_acts, right_acts,
                  check=True)
    bm.summands = None
    return bm, blocks


def diagonal_end_algebra(g):
    """The degree-0 block as an algebra (the endomorphism algebra of the
    module, realized on Ext^0 cosets)."""
    space = None
    for (i, j, sp, off) in g.blocks:
        if i == j:
            space = sp
            break
    assert space is not None
    engine = _engine(g.base)
    field = g.base.field
    d = space.dim
    table = [[{} for _ in range(d)] for _ in range(d)]
    for s in range(d):
        for t in range(d):
            table[s][t] = yoneda_product(space.basis()[s],
                                         space.basis()[t]).coords
    unit = engine.identity_ext0(g.module).coords
    return from_structure_constants(d, table, unit, field, _trusted=True)


def radical_shape_check(g):
    """True iff rad of the block algebra equals (diagonal copies of
    rad End(X)) (+) (all strictly upper blocks), as subspaces."""
    field = g.base.field
    rad = radical(g.result)
    end0 = diagonal_end_algebra(g)
    rad_end = radical(end0)
    expected = Echelon(field, g.dim)
    for v in _expected_vectors(g, rad_end, field):
        expected.add(dict(v))
    actual = Echelon(field, g.dim)
    for row in rad.data:
        actual.add(dict(row))
    if expected.rank != actual.rank:
        return False
    vecs = _expected_vectors(g, rad_end, field)
    return all(expected.contains(dict(row)) for row in rad.data) and \
        all(actual.contains(dict(v)) for v in vecs)


def _expected_vectors(g, rad_end, field):
    out = []
    for (i, j, space, off) in g.blocks:
        if i == j:
            for row in rad_end.data:
                out.append({off + c: v for c, v in row.items()})
        else:
            for t in range(space.dim):
                out.append({off + t: field.one})
    return out
