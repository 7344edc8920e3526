"""Finite-dimensional associative unital algebras over an exact field.

An algebra is held by structure constants: ``table[i][j]`` is the sparse
coordinate vector of the basis product e_i * e_j.  Construction through
``from_structure_constants`` verifies associativity exhaustively over basis
triples and the two-sided unit law; constructions whose associativity is
inherited mathematically (opposite algebras, tensor products of validated
algebras, quotients of validated algebras) skip the cubic re-check and only
re-verify the unit law.

Idempotent and radical machinery is restricted to characteristic 0 and split
algebras; non-split inputs raise ``NonSplitError`` rather than ever returning
a wrong decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq
from sympy import Poly, Rational, Symbol

from .exactlin import (
    QQ,
    Echelon,
    FieldMismatch,
    Mat,
    require_char_zero,
    vec_axpy,
)


class AlgebraError(ValueError):
    pass


class NonSplitError(AlgebraError):
    """The semisimple quotient is not a product of full matrix algebras over
    the ground field (or no splitting element was found)."""


class Algebra:
    __slots__ = (
        "field", "dim", "table", "unit", "labels",
        "_gens", "_radical", "_rad_ech", "_idempotents", "_blocks",
        "_left_mats", "_right_mats", "_tensor_factors", "_op_of",
        "_self_injective", "_simple_cache", "_proj_cache", "_inj_cache",
        "paths",
    )

    def __init__(self, field, dim, table, unit, labels=None):
        self.field = field
        self.dim = dim
        self.table = table
        self.unit = unit
        self.labels = labels
        self._gens = None
        self._radical = None
        self._rad_ech = None
        self._idempotents = None
        self._blocks = None
        self._left_mats = [None] * dim
        self._right_mats = [None] * dim
        self._tensor_factors = None
        self._op_of = None
        self._self_injective = None
        self._simple_cache = None
        self._proj_cache = {}
        self._inj_cache = {}
        self.paths = None

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field!r})"

    def label(self, i):
        return self.labels[i] if self.labels else f"e{i}"

    # -- multiplication

    def mul_basis(self, i, j):
        return self.table[i][j]

    def mul_vec(self, u, v):
        """Product of two sparse coordinate vectors."""
        field = self.field
        table = self.table
        acc = {}
        for i, x in u.items():
            ti = table[i]
            for j, y in v.items():
                vec_axpy(field, acc, field.mul(x, y), ti[j])
        return acc

    def left_mult(self, i):
        """Matrix of left multiplication by basis element e_i."""
        m = self._left_mats[i]
        if m is None:
            cols = [self.table[i][j] for j in range(self.dim)]
            m = Mat.from_columns(cols, self.dim, self.field)
            self._left_mats[i] = m
        return m

    def right_mult(self, i):
        """Matrix of right multiplication by basis element e_i."""
        m = self._right_mats[i]
        if m is None:
            cols = [self.table[j][i] for j in range(self.dim)]
            m = Mat.from_columns(cols, self.dim, self.field)
            self._right_mats[i] = m
        return m

    def mult_matrix_of(self, v, side="left"):
        field = self.field
        acc = Mat.zeros(self.dim, self.dim, field)
        pick = self.left_mult if side == "left" else self.right_mult
        for i, c in v.items():
            acc = acc.add(pick(i).scale(c))
        return acc

    def is_commutative(self):
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(i))

    # -- generators

    def generators(self):
        """A small list of basis indices generating the algebra (with 1).

        Greedy: walk the basis in order and keep every element not already in
        the unital subalgebra generated by the elements kept so far.
        """
        if self._gens is None:
            gens = []
            ech = self._closure([])
            for i in range(self.dim):
                if not ech.contains({i: self.field.one}):
                    gens.append(i)
                    ech = self._closure(gens)
            assert ech.rank == self.dim
            self._gens = gens
        return self._gens

    def _closure(self, gen_indices):
        field = self.field
        ech = Echelon(field, self.dim)
        ech.add(dict(self.unit))
        work = [dict(self.unit)]
        gen_vecs = [{g: field.one} for g in gen_indices]
        while work:
            v = work.pop()
            for g in gen_vecs:
                for prod in (self.mul_vec(g, v), self.mul_vec(v, g)):
                    if ech.add(prod) is not None:
                        work.append(prod)
        return ech


def _check_unit(alg):
    field = alg.field
    for i in range(alg.dim):
        e_i = {i: field.one}
        if alg.mul_vec(alg.unit, e_i) != e_i:
            raise AlgebraError(f"unit law fails on the left at basis {i}")
        if alg.mul_vec(e_i, alg.unit) != e_i:
            raise AlgebraError(f"unit law fails on the right at basis {i}")


def _check_associativity(alg):
    """Exhaustive check of (e_i e_j) e_l == e_i (e_j e_l) over basis triples."""
    field = alg.field
    table = alg.table
    dim = alg.dim
    for i in range(dim):
        ti = table[i]
        for j in range(dim):
            tij = ti[j]
            tj = table[j]
            for l in range(dim):
                lhs = {}
                for k, c in tij.items():
                    vec_axpy(field, lhs, c, table[k][l])
                rhs = {}
                for k, c in tj[l].items():
                    vec_axpy(field, rhs, c, ti[k])
                if lhs != rhs:
                    raise AlgebraError(
                        f"associativity fails at basis triple ({i}, {j}, {l})")


def _normalize_table(field, dim, table):
    zero = field.zero
    out = []
    for i in range(dim):
        row = []
        for j in range(dim):
            row.append({k: x for k, x in table[i][j].items() if x != zero})
        out.append(row)
    return out


def from_structure_constants(dim, table, unit, field=QQ, labels=None,
                             _trusted=False):
    """Build an algebra, verifying the unit law and (unless the construction
    is one whose associativity is inherited) exhaustive associativity."""
    if len(table) != dim or any(len(r) != dim for r in table):
        raise AlgebraError("structure constant table has wrong shape")
    table = _normalize_table(field, dim, table)
    unit = {k: x for k, x in unit.items() if x != field.zero}
    alg = Algebra(field, dim, table, unit, labels)
    _check_unit(alg)
    if not _trusted:
        _check_associativity(alg)
    return alg


# ---------------------------------------------------------------------------
# named families

def nakayama(n, field=QQ):
    """The truncated polynomial algebra on one nilpotent generator of index n,
    with basis 1, x, ..., x^(n-1)."""
    if n < 1:
        raise AlgebraError("nakayama requires n >= 1")
    table = [[({i + j: field.one} if i + j < n else {}) for j in range(n)]
             for i in range(n)]
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, n)]
    return from_structure_constants(n, table, {0: field.one}, field, labels)


_LS_MONOMIALS = [(), (0,), (1,), (2,), (0, 1), (1, 2), (0, 2), (0, 1, 2)]


def liu_schulz(q, field=QQ):
    """The 8-dimensional local symmetric algebra on x0, x1, x2 with
    x_i^2 = 0 and x_{i+1} x_i = -q x_i x_{i+1} (indices mod 3).

    The monomial basis order is fixed: 1, x0, x1, x2, x0*x1, x1*x2, x0*x2,
    x0*x1*x2, so structure constants are byte-for-byte reproducible.  q must
    be a rational that is neither zero nor a root of unity (so q not in
    {0, 1, -1}); only the rational field is supported.
    """
    if field != QQ:
        raise AlgebraError("the Liu-Schulz family is only built over Q")
    q = mpq(q)
    if q == 0 or q == 1 or q == -1:
        raise AlgebraError("parameter must be nonzero and not a root of unity")
    # x_a x_b for a > b rewrites to swap_coeff * x_b x_a
    swap = {(1, 0): -q, (2, 1): -q, (2, 0): -1 / q}
    index = {mon: i for i, mon in enumerate(_LS_MONOMIALS)}

    def reduce_word(word):
        coeff = field.one
        w = list(word)
        changed = True
        while changed:
            changed = False
            for t in range(len(w) - 1):
                a, b = w[t], w[t + 1]
                if a == b:
                    return {}
                if a > b:
                    coeff = field.mul(coeff, swap[(a, b)])
                    w[t], w[t + 1] = b, a
                    changed = True
        return {index[tuple(w)]: coeff}

    table = [[reduce_word(m1 + m2) for m2 in _LS_MONOMIALS]
             for m1 in _LS_MONOMIALS]
    labels = ["1"] + ["*".join(f"x{i}" for i in mon)
                      for mon in _LS_MONOMIALS[1:]]
    return from_structure_constants(8, table, {0: field.one}, field, labels)


@dataclass(frozen=True)
class GroupSpec:
    """A finite cyclic group of order m, elements 0..m-1 under addition."""
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise AlgebraError("group order must be >= 1")

    def inverse(self, g):
        return (-g) % self.m

    def op(self, g, h):
        return (g + h) % self.m

    def elements(self):
        return range(self.m)


def group_algebra(g, field=QQ):
    if isinstance(g, int):
        g = GroupSpec(g)
    m = g.m
    table = [[{(a + b) % m: field.one} for b in range(m)] for a in range(m)]
    labels = [f"g{a}" for a in range(m)]
    return from_structure_constants(m, table, {0: field.one}, field, labels,
                                    _trusted=True)


def opposite(a):
    """Same basis, products reversed.  An involution on the nose."""
    table = [[a.table[j][i] for j in range(a.dim)] for i in range(a.dim)]
    out = from_structure_constants(a.dim, table, a.unit, a.field, a.labels,
                                   _trusted=True)
    out._op_of = a
    return out


def tensor_algebra(a, b):
    """a (x) b with the package-wide lexicographic basis (i, j) -> i*dim_b + j
    and componentwise multiplication."""
    if a.field != b.field:
        raise FieldMismatch("mixed field tags in tensor_algebra")
    field = a.field
    da, db = a.dim, b.dim
    dim = da * db
    mul = field.mul
    table = []
    for i1 in range(da):
        for i2 in range(db):
            row = []
            for j1 in range(da):
                pa = a.table[i1][j1]
                for j2 in range(db):
                    pb = b.table[i2][j2]
                    prod = {}
                    for k1, x in pa.items():
                        base = k1 * db
                        for k2, y in pb.items():
                            prod[base + k2] = mul(x, y)
                    row.append(prod)
            table.append(row)
    unit = {}
    for k1, x in a.unit.items():
        for k2, y in b.unit.items():
            unit[k1 * db + k2] = mul(x, y)
    labels = None
    if a.labels and b.labels:
        labels = [f"{la}(x){lb}" for la in a.labels for lb in b.labels]
    out = from_structure_constants(dim, table, unit, field, labels,
                                   _trusted=True)
    out._tensor_factors = (a, b)
    return out


def enveloping_algebra(a, b=None):
    """a (x) b^op; its left modules are exactly a-b-bimodules."""
    if b is None:
        b = a
    return tensor_algebra(a, opposite(b))


# ---------------------------------------------------------------------------
# quivers with relations

@dataclass(frozen=True)
class QuiverPresentation:
    """A quiver with relations and a path-length cutoff.

    Arrows are (source, target, label) with 0-based vertices.  A relation is
    a list of (coeff, path) terms, each path a tuple of arrow indices read
    left to right (composition convention: the path (a, b) means a then b, so
    target(a) must equal source(b)).  All terms of one relation share one
    (source, target) pair.  The cutoff bounds the path lengths enumerated in
    the quotient construction and must be at least the longest relation term.
    """
    vertices: int
    arrows: tuple
    relations: tuple
    cutoff: int

    def __post_init__(self):
        if self.vertices < 1:
            raise AlgebraError("quiver needs at least one vertex")
        for s, t, _lab in self.arrows:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise AlgebraError("arrow endpoint out of range")
        maxlen = 0
        for rel in self.relations:
            if not rel:
                raise AlgebraError("empty relation")
            ends = set()
            for _c, path in rel:
                if not path:
                    raise AlgebraError("relation terms must be nonempty paths")
                for u, v in zip(path, path[1:]):
                    if self.arrows[u][1] != self.arrows[v][0]:
                        raise AlgebraError(f"non-composable relation path {path}")
                ends.add((self.arrows[path[0]][0], self.arrows[path[-1]][1]))
                maxlen = max(maxlen, len(path))
            if len(ends) != 1:
                raise AlgebraError(
                    "relation terms do not share one (source, target) pair")
        if self.cutoff < maxlen:
            raise AlgebraError("cutoff below the longest relation path")


def _path_src(q, path):
    vertex, arrows = path
    return vertex if not arrows else q.arrows[arrows[0]][0]


def _path_tgt(q, path):
    vertex, arrows = path
    return vertex if not arrows else q.arrows[arrows[-1]][1]


def from_quiver(q):
    """Quotient of the path algebra by the two-sided ideal generated by the
    relations, computed inside the span of paths of length <= cutoff.

    The construction row-reduces all products path * relation * path that fit
    under the cutoff; the surviving path classes form the basis.  It fails
    unless every path of exactly the cutoff length reduces to shorter basis
    paths, which certifies finite-dimensionality and makes products of basis
    paths computable by repeated reduction.
    """
    field = QQ
    L = q.cutoff
    # paths by length; a path is (start_vertex, arrows tuple)
    paths = [(v, ()) for v in range(q.vertices)]
    by_tail = {}
    for a_idx, (s, _t, _lab) in enumerate(q.arrows):
        by_tail.setdefault(s, []).append(a_idx)
    frontier = list(paths)
    for _length in range(1, L + 1):
        nxt = []
        for p in frontier:
            for a_idx in by_tail.get(_path_tgt(q, p), []):
                nxt.append((p[0], p[1] + (a_idx,)))
        nxt.sort()
        paths.extend(nxt)
        frontier = nxt
    index = {p: i for i, p in enumerate(paths)}
    npaths = len(paths)

    ech = Echelon(field, npaths)
    for rel in q.relations:
        rel_src = q.arrows[rel[0][1][0]][0]
        rel_tgt = q.arrows[rel[0][1][-1]][1]
        rel_maxlen = max(len(path) for _c, path in rel)
        for p in paths:
            if _path_tgt(q, p) != rel_src:
                continue
            plen = len(p[1])
            if plen + rel_maxlen > L:
                continue
            for r in paths:
                if _path_src(q, r) != rel_tgt:
                    continue
                if plen + rel_maxlen + len(r[1]) > L:
                    continue
                vec = {}
                for c, path in rel:
                    key = (p[0], p[1] + path + r[1])
                    vec_axpy(field, vec, field.of(c), {index[key]: field.one})
                ech.add(vec)

    basis_paths = [paths[i] for i in ech.free_columns()]
    for p in basis_paths:
        if len(p[1]) >= L:
            raise AlgebraError(
                f"not stabilized at cutoff {L}: path of length {len(p[1])} "
                "survives reduction; raise the cutoff")
    basis_index = {p: t for t, p in enumerate(basis_paths)}

    def reduce_path(p):
        """Class of a path of length <= L in the surviving basis."""
        res = ech.reduce({index[p]: field.one})
        return {basis_index[paths[i]]: c for i, c in res.items()}

    def mul_paths(p1, p2):
        if _path_tgt(q, p1) != _path_src(q, p2):
            return {}
        arrows = p1[1] + p2[1]
        if len(arrows) <= L:
            return reduce_path((p1[0], arrows))
        keep = L - len(p1[1])
        head = reduce_path((p1[0], p1[1] + p2[1][:keep]))
        rest = (q.arrows[p2[1][keep]][0], p2[1][keep:])
        acc = {}
        for t, c in head.items():
            vec_axpy(field, acc, c, mul_paths(basis_paths[t], rest))
        return acc

    dim = len(basis_paths)
    table = [[mul_paths(p1, p2) for p2 in basis_paths] for p1 in basis_paths]
    unit = {}
    for v in range(q.vertices):
        vec_axpy(field, unit, field.one, reduce_path((v, ())))

    def path_label(p):
        if not p[1]:
            return f"e{p[0]}"
        return ".".join(q.arrows[a][2] for a in p[1])

    labels = [path_label(p) for p in basis_paths]
    alg = from_structure_constants(dim, table, unit, field, labels)
    alg.paths = basis_paths
    return alg


# ---------------------------------------------------------------------------
# radical (trace form, characteristic 0)

def radical(a):
    """Basis of the Jacobson radical as a Mat whose rows are the basis vectors.

    Computed as the radical of the symmetric trace form
    (x, y) -> trace(left multiplication by x*y), which equals the Jacobson
    radical in characteristic 0.  The result is verified to be closed under
    multiplication by the algebra on both sides.
    """
    require_char_zero(a.field, "radical")
    if a._radical is not None:
        return a._radical
    fast = _radical_of_tensor(a)
    if fast is not None:
        a._radical = fast
        return fast
    field = a.field
    dim = a.dim
    traces = []
    for k in range(dim):
        t = field.zero
        for i in range(dim):
            t = field.add(t, a.table[k][i].get(i, field.zero))
        traces.append(t)
    gram = Echelon(field, dim)
    for i in range(dim):
        row = {}
        for j in range(dim):
            s = field.zero
            for k, c in a.table[i][j].items():
                s = field.add(s, field.mul(c, traces[k]))
            if s != field.zero:
                row[j] = s
        gram.add(row)
    basis = gram.kernel_columns()
    rad = Mat(len(basis), dim, field, basis)
    _verify_ideal(a, rad)
    a._radical = rad
    return rad


def _radical_of_tensor(a):
    """rad(A (x) B) = rad A (x) B + A (x) rad B when both semisimple
    quotients are separable, which the split check guarantees."""
    if a._op_of is not None:
        return radical(a._op_of)
    if a._tensor_factors is None:
        return None
    fa, fb = a._tensor_factors
    primitive_idempotents(fa)  # certifies splitness (or raises)
    primitive_idempotents(fb)
    ra, rb = radical(fa), radical(fb)
    field = a.field
    ech = Echelon(field, a.dim)
    for r in ra.data:
        for j in range(fb.dim):
            ech.add({i * fb.dim + j: c for i, c in r.items()})
    for i in range(fa.dim):
        for s in rb.data:
            ech.add({i * fb.dim + j: c for j, c in s.items()})
    return Mat(ech.rank, a.dim, field, ech.echelon_rows())


def _verify_ideal(a, rad):
    ech = Echelon(a.field, a.dim)
    for r in rad.data:
        ech.add(dict(r))
    gen_vecs = [{g: a.field.one} for g in a.generators()]
    for r in rad.data:
        for g in gen_vecs:
            if not ech.contains(a.mul_vec(g, r)) or \
               not ech.contains(a.mul_vec(r, g)):
                raise AlgebraError("radical candidate is not a two-sided ideal")


def radical_echelon(a):
    if a._rad_ech is None:
        ech = Echelon(a.field, a.dim)
        for r in radical(a).data:
            ech.add(dict(r))
        a._rad_ech = ech
    return a._rad_ech


# ---------------------------------------------------------------------------
# primitive idempotents: center-split the semisimple quotient, split matrix
# blocks by factoring minimal polynomials, then lift through the radical


def _poly_from_minimal(d, lower):
    """sympy Poly x^d - sum lower[t] x^t over Q."""
    x = Symbol("x")
    expr = x**d
    for t, c in enumerate(lower):
        if c != 0:
            expr -= Rational(str(c)) * x**t
    return Poly(expr, x)


def _poly_to_mpq_coeffs(p):
    return [mpq(str(c)) for c in reversed(p.all_coeffs())]


def _poly_mul(f, g):
    out = [mpq(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_divmod(f, g):
    f = list(f)
    dg = len(g) - 1
    lead = g[-1]
    quo = [mpq(0)] * max(1, len(f) - dg)
    while len(f) - 1 >= dg and any(c != 0 for c in f):
        if f[-1] == 0:
            f.pop()
            continue
        shift = len(f) - 1 - dg
        c = f[-1] / lead
        quo[shift] = c
        for i in range(len(g)):
            f[shift + i] -= c * g[i]
        while len(f) > 1 and f[-1] == 0:
            f.pop()
    return quo, f


def _poly_xgcd(f, g):
    """(u, v, d) with u*f + v*g = d over Q, d monic."""
    r0, r1 = list(f), list(g)
    u0, u1 = [mpq(1)], [mpq(0)]
    v0, v1 = [mpq(0)], [mpq(1)]
    while any(c != 0 for c in r1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _poly_sub(u0, _poly_mul(q, u1))
        v0, v1 = v1, _poly_sub(v0, _poly_mul(q, v1))
    lead = r0[-1]
    r0 = [c / lead for c in r0]
    u0 = [c / lead for c in u0]
    v0 = [c / lead for c in v0]
    return u0, v0, r0


def _poly_sub(f, g):
    out = [mpq(0)] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] -= c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _eval_poly_at(field, alg_mul, unit, u, coeffs):
    """Evaluate a polynomial (coefficient list, ascending) at the sparse
    vector u, with the given unit as x^0, using alg_mul for products."""
    acc = {}
    power = dict(unit)
    for c in coeffs:
        vec_axpy(field, acc, field.of(c), power)
        power = alg_mul(power, u)
    return acc


class _Quotient:
    """A/rad with multiplication by project-after-multiplying."""

    def __init__(self, a):
        self.a = a
        self.field = a.field
        ech = radical_echelon(a)
        self.ech = ech
        self.free = ech.free_columns()
        self.pos = {c: t for t, c in enumerate(self.free)}
        self.dim = len(self.free)

    def project(self, vec):
        res = self.ech.reduce(vec)
        return {self.pos[c]: x for c, x in res.items()}

    def lift(self, svec):
        return {self.free[t]: x for t, x in svec.items()}

    def mul(self, u, v):
        return self.project(self.a.mul_vec(self.lift(u), self.lift(v)))

    @property
    def unit(self):
        return self.project(self.a.unit)


def _split_roots(poly):
    """(roots with multiplicity, all_linear flag).  roots: list of mpq."""
    factors = poly.factor_list()[1]
    roots = []
    for fac, mult in factors:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            roots.append((mpq(str(Rational(-c0, c1))), mult))
        else:
            return roots, False
    return roots, True


def _crt_idempotents(quot, u, unit_e, roots):
    """Orthogonal idempotents of k[u] (unit unit_e) cutting the spectrum of u
    into its distinct roots; min poly = prod (x - r)^m over the given roots."""
    x_poly = [mpq(0), mpq(1)]
    full = [mpq(1)]
    parts = []
    for r, m in roots:
        p = [mpq(1)]
        lin = _poly_sub(x_poly, [mpq(r)])
        for _ in range(m):
            p = _poly_mul(p, lin)
        parts.append(p)
        full = _poly_mul(full, p)
    idems = []
    for t, p_t in enumerate(parts):
        rest = [mpq(1)]
        for s, p_s in enumerate(parts):
            if s != t:
                rest = _poly_mul(rest, p_s)
        inv, _v, g = _poly_xgcd(rest, p_t)
        assert len(g) == 1 and g[0] == 1, "CRT factors not coprime"
        _, q_t = _poly_divmod(_poly_mul(inv, rest), full)
        idems.append(_eval_poly_at(quot.field, quot.mul, unit_e, u, q_t))
    return idems


def _sub_basis(quot, e):
    """Basis of e*S*e inside the quotient S."""
    field = quot.field
    ech = Echelon(field, quot.dim)
    basis = []
    for s in range(quot.dim):
        v = quot.mul(quot.mul(e, {s: field.one}), e)
        if ech.add(v) is not None:
            basis.append(v)
    return basis


def _split_in_quotient(quot, e, rng_iter):
    """List of primitive orthogonal idempotents of S under the idempotent e.

    dim(e S e) == 1 certifies primitivity and splitness of the block at once.
    """
    field = quot.field
    basis = _sub_basis(quot, e)
    if len(basis) == 1:
        return [e]

    saw_nonsplit_shape = False
    candidates = list(basis)
    candidates += [quot.mul(u, v) for u in basis for v in basis]
    for extra in rng_iter(len(basis)):
        candidates.append(_combine(field, basis, extra))

    for u in candidates:
        mp = _min_poly_of(quot, e, u)
        if mp is None:
            continue
        d, lower = mp
        if d <= 1:
            continue
        roots, all_linear = _split_roots(_poly_from_minimal(d, lower))
        if not all_linear:
            saw_nonsplit_shape = True
            continue
        if len(roots) < 2:
            continue
        parts = _crt_idempotents(quot, u, e, roots)
        for p in parts:
            assert quot.mul(p, p) == p, "CRT idempotent not idempotent"
        out = []
        for p in parts:
            out.extend(_split_in_quotient(quot, p, rng_iter))
        return out

    if saw_nonsplit_shape:
        raise NonSplitError(
            "non-split semisimple quotient: a block has elements with "
            "irreducible minimal polynomial of degree > 1 and no splitting "
            "element was found")
    raise NonSplitError("no splitting element found in a block of the "
                        "semisimple quotient")


def _combine(field, basis, coeffs):
    acc = {}
    for v, c in zip(basis, coeffs):
        vec_axpy(field, acc, field.of(c), v)
    return acc


def _min_poly_of(quot, unit_e, u):
    """Minimal polynomial of u inside the unital subalgebra with unit unit_e:
    (degree d, ascending coeffs c with u^d = sum_{t<d} c[t] u^t).

    Tags the fed powers so the dependency coefficients can be read off the
    first residual supported entirely on the tag block.
    """
    field = quot.field
    n = quot.dim
    ech = Echelon(field, 2 * n + 2)
    power = dict(unit_e)
    t = 0
    while True:
        tagged = dict(power)
        tagged[n + t] = field.one
        r = ech.reduce(tagged)
        if all(k >= n for k in r):
            assert r.get(n + t) == field.one
            return t, [field.neg(r.get(n + s, field.zero)) for s in range(t)]
        ech.add(r)
        power = quot.mul(power, u)
        t += 1
        assert t <= n + 1, "minimal polynomial search overran the dimension"


def primitive_idempotents(a):
    """A complete list of pairwise-orthogonal primitive idempotents summing
    to 1, as sparse vectors.  Requires characteristic 0 and a split algebra.

    ``idempotent_blocks(a)`` exposes which idempotents share a simple block.
    """
    require_char_zero(a.field, "primitive idempotents")
    if a._idempotents is not None:
        return [dict(v) for v in a._idempotents]
    fast = _idempotents_of_tensor(a)
    if fast is not None:
        return [dict(v) for v in fast]

    field = a.field
    quot = _Quotient(a)
    n = quot.dim

    # center of the quotient: kernel of z -> (s*z - z*s) stacked over basis s
    rowmap = {}
    for s in range(n):
        sv = {s: field.one}
        for z in range(n):
            zv = {z: field.one}
            diff = dict(quot.mul(sv, zv))
            vec_axpy(field, diff, field.neg(field.one), quot.mul(zv, sv))
            for i, c in diff.items():
                rowmap.setdefault(s * n + i, {})[z] = c
    cech = Echelon(field, n)
    for key in sorted(rowmap):
        cech.add(rowmap[key])
    center = cech.kernel_columns()

    def rng_iter(width):
        # deterministic small integer combinations, enough to split matrix
        # blocks whose basis elements alone do not
        combos = []
        for trial in range(24):
            combos.append([((trial * 31 + 7 * t) % 5) - 2 for t in range(width)])
        return combos

    # split the identity along the center, then inside blocks
    blocks = [quot.unit]
    for z in center:
        refined = []
        for e in blocks:
            u = quot.mul(e, z)
            mp = _min_poly_of(quot, e, u)
            d, lower = mp
            if d <= 1:
                refined.append(e)
                continue
            roots, all_linear = _split_roots(_poly_from_minimal(d, lower))
            if not all_linear:
                raise NonSplitError(
                    "non-split semisimple quotient: central element with "
                    "irreducible minimal polynomial of degree > 1")
            refined.extend(_crt_idempotents(quot, u, e, roots))
        blocks = refined

    prims = []
    block_ids = []
    for b_id, e in enumerate(blocks):
        parts = _split_in_quotient(quot, e, rng_iter)
        for p in parts:
            prims.append(p)
            block_ids.append(b_id)

    lifted = _lift_idempotents(a, quot, prims)
    a._idempotents = lifted
    a._blocks = block_ids
    return [dict(v) for v in lifted]


def _idempotents_of_tensor(a):
    if a._op_of is not None:
        src = a._op_of
        prims = primitive_idempotents(src)
        a._idempotents = prims
        a._blocks = list(idempotent_blocks(src))
        return prims
    if a._tensor_factors is None:
        return None
    fa, fb = a._tensor_factors
    pa = primitive_idempotents(fa)
    pb = primitive_idempotents(fb)
    ba = idempotent_blocks(fa)
    bb = idempotent_blocks(fb)
    field = a.field
    out = []
    blocks = []
    nb = max(bb) + 1 if bb else 1
    for ea, blk_a in zip(pa, ba):
        for eb, blk_b in zip(pb, bb):
            v = {}
            for i, x in ea.items():
                for j, y in eb.items():
                    v[i * fb.dim + j] = field.mul(x, y)
            out.append(v)
            blocks.append(blk_a * nb + blk_b)
    a._idempotents = out
    a._blocks = blocks
    return out


def idempotent_blocks(a):
    """block_ids[t] = simple block of the t-th primitive idempotent."""
    primitive_idempotents(a)
    return list(a._blocks)


def _lift_idempotents(a, quot, prims):
    """Lift a complete orthogonal system from A/rad to A via e <- 3e^2-2e^3,
    keeping orthogonality by working inside g A g for g = 1 - (sum lifted)."""
    field = a.field
    lifted = []
    g = dict(a.unit)
    for t, eps in enumerate(prims):
        if t == len(prims) - 1:
            e = dict(g)
        else:
            x = quot.lift(eps)
            e = a.mul_vec(a.mul_vec(g, x), g)
            for _ in range(a.dim.bit_length() + 3):
                sq = a.mul_vec(e, e)
                if sq == e:
                    break
                cube = a.mul_vec(sq, e)
                nxt = {}
                vec_axpy(field, nxt, field.of(3), sq)
                vec_axpy(field, nxt, field.of(-2), cube)
                e = nxt
            assert a.mul_vec(e, e) == e, "idempotent lift did not converge"
        lifted.append(e)
        vec_axpy(field, g, field.neg(field.one), e)
    total = {}
    for e in lifted:
        vec_axpy(field, total, field.one, e)
    assert total == a.unit, "lifted idempotents do not sum to 1"
    for i, ei in enumerate(lifted):
        assert a.mul_vec(ei, ei) == ei
        for j in range(i):
            assert not a.mul_vec(ei, lifted[j]) and \
                not a.mul_vec(lifted[j], ei), "lifted idempotents not orthogonal"
    return lifted


def is_split(a):
    try:
        primitive_idempotents(a)
        return True
    except NonSplitError:
        return False


def is_self_injective(a):
    """True iff the dual of the right regular module is projective as a left
    module, i.e. projectives and injectives coincide."""
    if a._self_injective is None:
        from .module import Module, is_projective
        acts = [a.right_mult(i).t() for i in range(a.dim)]
        d_reg = Module(a, a.dim, acts, check=False)
        a._self_injective = is_projective(d_reg)
    return a._self_injective
