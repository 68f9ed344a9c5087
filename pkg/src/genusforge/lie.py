"""Graded Lie algebras attached to expansion groups.

A graded algebra here is a tuple of F2 coordinate spaces, one per grade,
with every bracket driven by grade 1: the table entry for (generator x,
grade m basis vector k) is the coordinate mask of the bracket in grade
m+1, and brackets between grades >= 2 vanish identically.  Grade 1 is
always identified with the target space of phi, coordinate x <-> e_x.
"""

from __future__ import annotations

from itertools import combinations, product

from .f2 import F2Basis, F2Solver, bits_of, rank, solve
from .groups import (
    CosetGroup,
    ExpansionGroup,
    check_expansion_axioms,
    descending_central_series,
)
from .tensors import BlockShape, gov_space_general

__all__ = [
    "GradedLie",
    "governing_algebra",
    "governing_algebra_general",
    "lie_from_group",
    "check_lie_axioms",
    "lie_epimorphism",
    "tensor_pairing",
]


class GradedLie:
    """Graded Lie algebra over F2 with brackets driven by grade 1.

    dims[m-1] is the dimension of grade m and a homogeneous element is
    the pair (m, bits) with bits a coordinate mask.  tables[m][x][k]
    holds [e_x, b_k] for b_k the k-th basis vector of grade m, written
    in grade m+1 coordinates; the table for the top grade is omitted.
    labels, when present, names each basis vector (generator codes for
    group quotients, chain labels for the governing models).
    """

    __slots__ = ("shape", "dims", "tables", "labels")

    def __init__(self, shape: BlockShape, dims, tables, labels=None):
        self.shape = shape
        self.dims = tuple(dims)
        self.tables = tables
        self.labels = labels

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def nclass(self) -> int:
        return len(self.dims)

    def grade_dim(self, m: int) -> int:
        return self.dims[m - 1] if 1 <= m <= len(self.dims) else 0

    def bracket_gen(self, x: int, m: int, bits: int) -> int:
        """[e_x, v] for homogeneous v in grade m, as grade m+1 bits."""
        tab = self.tables.get(m)
        if tab is None:
            return 0
        out = 0
        row = tab[x]
        for k in bits_of(bits):
            out ^= row[k]
        return out

    def bracket(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        """Bracket of homogeneous elements (grade, bits)."""
        (m1, b1), (m2, b2) = a, b
        if m1 == 1:
            out = 0
            for x in bits_of(b1):
                out ^= self.bracket_gen(x, m2, b2)
            return m2 + 1, out
        if m2 == 1:
            return self.bracket(b, a)
        return m1 + m2, 0

    def nested(self, xs) -> tuple[int, int]:
        """Right-nested bracket of grade-1 basis vectors e_{xs[0]}, ..."""
        return self.nested_mixed([1 << x for x in xs])

    def nested_mixed(self, vecs) -> tuple[int, int]:
        """Right-nested bracket of arbitrary grade-1 elements."""
        if not vecs:
            raise ValueError("need at least one entry")
        acc = (1, vecs[-1])
        for v in reversed(vecs[:-1]):
            acc = self.bracket((1, v), acc)
        return acc

    def __repr__(self) -> str:
        return f"GradedLie(shape={list(self.shape.k)}, dims={list(self.dims)})"


# -- governing models in chain coordinates --

def _grade_meta(shape: BlockShape):
    """Per grade i >= 2: ordered (blocks, members, offset) triples.

    The component for a block set A is the even-weight subspace of the
    coordinates of its member union, in the chain basis (m_t, m_{t+1})
    over the sorted member list; offsets concatenate the components.
    """
    metas = {}
    for i in range(2, shape.n + 1):
        entries = []
        by_blocks = {}
        off = 0
        for A in combinations(range(shape.n), i):
            mem = tuple(sorted(x for s in A for x in shape.members(s)))
            entries.append((A, mem, off))
            by_blocks[A] = (mem, off)
            off += len(mem) - 1
        metas[i] = (entries, by_blocks, off)
    return metas


def _chain_bits(mem: tuple[int, ...], u: int, v: int) -> int:
    """Chain coordinates of e_u + e_v inside the component on mem."""
    p, q = mem.index(u), mem.index(v)
    if p > q:
        p, q = q, p
    return (1 << q) - (1 << p)


def governing_algebra_general(shape: BlockShape) -> GradedLie:
    """Universal graded Lie algebra of a block shape, chain basis.

    Grade 1 is F2^N.  Grade i >= 2 splits over block i-sets A; the
    bracket with e_x embeds a component into the one on A + {block x}
    and kills it when block x already occurs.
    """
    n, N = shape.n, shape.N
    metas = _grade_meta(shape)
    dims = [N]
    labels = {1: list(range(N))}
    for i in range(2, n + 1):
        entries, _, dim_i = metas[i]
        dims.append(dim_i)
        labels[i] = [(A, mem[t], mem[t + 1])
                     for A, mem, _ in entries
                     for t in range(len(mem) - 1)]
    tables = {}
    if n >= 2:
        _, by2, _ = metas[2]
        tab1 = []
        for x in range(N):
            bx = shape.block(x)
            row = []
            for y in range(N):
                by = shape.block(y)
                if bx == by:
                    row.append(0)
                else:
                    mem, off = by2[tuple(sorted((bx, by)))]
                    row.append(_chain_bits(mem, x, y) << off)
            tab1.append(row)
        tables[1] = tab1
    for m in range(2, n):
        entries, _, _ = metas[m]
        _, by_next, _ = metas[m + 1]
        tab = []
        for x in range(N):
            bx = shape.block(x)
            row = []
            for A, mem, _ in entries:
                for t in range(len(mem) - 1):
                    if bx in A:
                        row.append(0)
                    else:
                        mem2, off2 = by_next[tuple(sorted(A + (bx,)))]
                        row.append(_chain_bits(mem2, mem[t], mem[t + 1]) << off2)
            tab.append(row)
        tables[m] = tab
    return GradedLie(shape, dims, tables, labels)


def governing_algebra(n: int) -> GradedLie:
    """Universal graded Lie algebra on n marked involutions."""
    return governing_algebra_general(BlockShape([1] * n))


# -- Lie algebras of enumerated groups --

def lie_from_group(G) -> GradedLie:
    """Associated graded algebra of the descending central series.

    Grade 1 is G/[G,G] identified with the phi target via the marked
    generators; grade m >= 2 is the m-th subquotient with brackets
    induced by group commutators against the generators.
    """
    if isinstance(G, ExpansionGroup):
        return _lie_from_spans(G)
    if isinstance(G, CosetGroup):
        return _lie_from_sets(G)
    raise TypeError("need an enumerated group or a quotient of one")


def _lie_from_spans(G: ExpansionGroup) -> GradedLie:
    series = descending_central_series(G)
    spans = [list(b) for b in series if b]
    total = G.order.bit_length() - 1
    head = len(spans[0]) if spans else 0
    if total - head != G.shape.N:
        raise ValueError("generators do not span the abelianization")
    layers = spans + [[]]
    dims = [G.shape.N]
    reps = {1: list(G.gen_codes)}
    coord = {}
    for m in range(2, len(spans) + 2):
        nxt = layers[m - 1]
        B = F2Basis(nxt)
        rep_m = [v for v in layers[m - 2] if B.add(v)]
        sol = F2Solver(nxt)
        for v in rep_m:
            sol.add(v)
        lead = len(nxt)

        def cm(code: int, sol=sol, lead=lead) -> int:
            combo = sol.express(code)
            if combo is None:
                raise ValueError("commutator escaped its expected layer")
            return combo >> lead

        coord[m] = cm
        reps[m] = rep_m
        dims.append(len(rep_m))
    nclass = len(dims)
    tables = {}
    for m in range(1, nclass):
        tables[m] = [[coord[m + 1](G.commutator(gx, r)) for r in reps[m]]
                     for gx in G.gen_codes]
    for r in reps[nclass]:
        for gx in G.gen_codes:
            if G.commutator(gx, r) != G.identity:
                raise ValueError("series did not terminate at the top grade")
    return GradedLie(G.shape, dims, tables, dict(reps))


def _span_map(G, gens):
    """Greedy basis and coordinate table of a subgroup of ker(phi).

    Valid because ker(phi) is elementary abelian, so the subgroup is a
    vector space and every element is a product of a basis subset.
    """
    table = {G.identity: 0}
    basis = []
    for w in gens:
        if w in table:
            continue
        for e, bits in list(table.items()):
            table[G.mul(e, w)] = bits | (1 << len(basis))
        basis.append(w)
    return basis, table


def _lie_from_sets(G: CosetGroup) -> GradedLie:
    report = check_expansion_axioms(G)
    if not all(report.values()):
        raise ValueError("expansion axioms do not hold")

    def conj_closed(seed):
        out, seen = [], set()
        queue = [w for w in seed if w != G.identity]
        while queue:
            w = queue.pop()
            if w in seen:
                continue
            seen.add(w)
            out.append(w)
            for g in G.gen_codes:
                c = G.conj(g, w)
                if c != G.identity and c not in seen:
                    queue.append(c)
        return out

    gens = list(G.gen_codes)
    seed = [G.commutator(a, b) for a, b in combinations(gens, 2)]
    subgroups = []
    cur_gens = conj_closed(seed)
    while cur_gens:
        _, table = _span_map(G, cur_gens)
        subgroups.append(table)
        nxt = conj_closed([G.commutator(g, w) for g in gens for w in table])
        cur_gens = nxt
    total = len(G).bit_length() - 1
    head = (len(subgroups[0]).bit_length() - 1) if subgroups else 0
    if total - head != G.shape.N:
        raise ValueError("generators do not span the abelianization")
    dims = [G.shape.N]
    reps = {1: gens}
    coord = {}
    for m in range(2, len(subgroups) + 2):
        cur = subgroups[m - 2]
        nxt = subgroups[m - 1] if m - 1 < len(subgroups) else {G.identity: 0}
        basis, table = _span_map(G, list(nxt) + sorted(cur))
        lead = len(nxt).bit_length() - 1
        reps[m] = basis[lead:]
        dims.append(len(basis) - lead)

        def cm(code: int, table=table, lead=lead) -> int:
            return table[code] >> lead

        coord[m] = cm
    nclass = len(dims)
    tables = {}
    for m in range(1, nclass):
        tables[m] = [[coord[m + 1](G.commutator(gx, r)) for r in reps[m]]
                     for gx in gens]
    for r in reps[nclass]:
        for gx in gens:
            if G.commutator(gx, r) != G.identity:
                raise ValueError("series did not terminate at the top grade")
    return GradedLie(G.shape, dims, tables, dict(reps))


# -- axiom verification --

def check_lie_axioms(L: GradedLie, shape: BlockShape | None = None) -> dict:
    """Verify the defining conditions and the block conditions.

    axiom1: grade 1 is the phi target and the bracket is alternating,
    symmetric, graded, and satisfies Jacobi on basis triples.  axiom2:
    the kernel of psi is abelian.  axiom3: brackets against grade 1
    span every higher grade.  axiom4: right-nested brackets of grade-1
    entries do not see the order of the leading entries, vanish on a
    repeated leading entry, and [e_x, [e_x, -]] kills every grade.
    tilde1/tilde2 are the block refinements.
    """
    if shape is None:
        shape = L.shape
    N = shape.N
    nclass = L.nclass
    report = {}

    ok = L.dims[0] == N
    for x in range(N):
        if ok and L.bracket((1, 1 << x), (1, 1 << x))[1]:
            ok = False
    for x in range(N):
        for y in range(N):
            if L.bracket((1, 1 << x), (1, 1 << y))[1] != \
                    L.bracket((1, 1 << y), (1, 1 << x))[1]:
                ok = False
    if ok:
        for x in range(N):
            for y in range(N):
                ab = L.bracket((1, 1 << x), (1, 1 << y))
                for m in range(1, nclass + 1):
                    for k in range(L.dims[m - 1]):
                        c = (m, 1 << k)
                        acc = L.bracket((1, 1 << x), L.bracket((1, 1 << y), c))[1]
                        acc ^= L.bracket((1, 1 << y), L.bracket((1, 1 << x), c))[1]
                        acc ^= L.bracket(ab, c)[1]
                        if acc:
                            ok = False
    report["axiom1"] = ok

    ok = True
    for m1 in range(2, nclass + 1):
        for m2 in range(m1, nclass + 1):
            for k1 in range(L.dims[m1 - 1]):
                for k2 in range(L.dims[m2 - 1]):
                    if L.bracket((m1, 1 << k1), (m2, 1 << k2))[1]:
                        ok = False
    report["axiom2"] = ok

    ok = True
    for m in range(2, nclass + 1):
        tab = L.tables.get(m - 1)
        if tab is None:
            ok = L.dims[m - 1] == 0
            continue
        vecs = [e for row in tab for e in row]
        if rank(vecs) != L.dims[m - 1]:
            ok = False
    report["axiom3"] = ok

    ok = True
    for i in range(4, nclass + 2):
        for xs in product(range(N), repeat=i):
            base = L.nested(xs)[1]
            for s in range(i - 3):
                ys = list(xs)
                ys[s], ys[s + 1] = ys[s + 1], ys[s]
                if L.nested(ys)[1] != base:
                    ok = False
        free = i - 4
        for s, t in combinations(range(i - 2), 2):
            for sigma in range(1 << N):
                for rest in product(range(N), repeat=free + 2):
                    vecs = []
                    r = iter(rest)
                    for pos in range(i - 2):
                        if pos == s or pos == t:
                            vecs.append(sigma)
                        else:
                            vecs.append(1 << next(r))
                    vecs.append(1 << next(r))
                    vecs.append(1 << next(r))
                    if L.nested_mixed(vecs)[1]:
                        ok = False
    for x in range(N):
        for m in range(1, nclass + 1):
            for k in range(L.dims[m - 1]):
                if L.bracket_gen(x, m + 1, L.bracket_gen(x, m, 1 << k)):
                    ok = False
    report["axiom4"] = ok

    kb = [(1 << g) ^ (1 << r) for g, r in shape.ker_pi_basis()]
    ok = all(L.bracket((1, u), (1, v))[1] == 0 for u in kb for v in kb)
    for u in kb:
        for m in range(2, nclass + 1):
            for k in range(L.dims[m - 1]):
                acc = 0
                for x in bits_of(u):
                    acc ^= L.bracket_gen(x, m, 1 << k)
                if acc:
                    ok = False
    report["tilde1"] = ok

    ok = True
    for j in range(2, nclass + 2):
        for xs in product(range(N), repeat=j):
            blocks = [shape.block(x) for x in xs]
            if len(set(blocks)) < j and L.nested(xs)[1]:
                ok = False
    report["tilde2"] = ok
    return report


# -- comparison maps --

def lie_epimorphism(universal: GradedLie, target: GradedLie) -> dict[int, list[int]]:
    """Graded map fixed on grade 1 and extended along nested brackets.

    Returns, per grade, the image mask of each source basis vector.  A
    failure of well-definedness, surjectivity, or bracket compatibility
    means the source was not universal for the shape; that is reported
    as a classification violation rather than a value.
    """
    if universal.shape != target.shape:
        raise ValueError("shape mismatch")
    N = universal.shape.N
    if universal.nclass < target.nclass:
        raise RuntimeError("classification violation: target outlives the source")
    out = {1: [1 << x for x in range(N)]}
    for m in range(2, universal.nclass + 1):
        ds = universal.dims[m - 1]
        sol = F2Solver()
        tgt_parts = []
        pairs = []
        for xs in product(range(N), repeat=m):
            vs = universal.nested(xs)[1]
            vt = target.nested(xs)[1]
            sol.add(vs)
            tgt_parts.append(vt)
            pairs.append((vs, vt))
        imgs = []
        for k in range(ds):
            combo = sol.express(1 << k)
            if combo is None:
                raise RuntimeError(
                    "classification violation: grade not spanned by nested brackets")
            img = 0
            for j in bits_of(combo):
                img ^= tgt_parts[j]
            imgs.append(img)
        for vs, vt in pairs:
            mapped = 0
            for k in bits_of(vs):
                mapped ^= imgs[k]
            if mapped != vt:
                raise RuntimeError(
                    "classification violation: inconsistent extension")
        out[m] = imgs
    for m in range(1, target.nclass + 1):
        if rank(out.get(m, [])) != target.dims[m - 1]:
            raise RuntimeError("classification violation: not surjective")
    for m in range(1, universal.nclass + 1):
        nxt = out.get(m + 1)
        tab = universal.tables.get(m)
        for x in range(N):
            for k in range(universal.dims[m - 1]):
                lhs = 0
                if tab is not None:
                    for j in bits_of(tab[x][k]):
                        lhs ^= nxt[j]
                rhs = target.bracket_gen(x, m, out[m][k])
                if lhs != rhs:
                    raise RuntimeError(
                        "classification violation: brackets disagree")
    return out


def tensor_pairing(L: GradedLie, i: int) -> list[int] | None:
    """Functionals on grade i matching each governing-span tensor.

    Row k of the answer is the mask of a linear form whose value on the
    class of any nested bracket equals the k-th tensor evaluated at the
    same argument tuple; None when some tensor admits no such form.
    The pairing is perfect when the masks have full rank.
    """
    shape = L.shape
    d = L.grade_dim(i)
    tuples = list(product(range(shape.N), repeat=i))
    nest = [L.nested(xs)[1] for xs in tuples]
    mats = []
    for t in gov_space_general(shape, i):
        rhs = 0
        for r, xs in enumerate(tuples):
            rhs |= t.eval(xs) << r
        m = solve(nest, rhs, cols=max(d, 1))
        if m is None:
            return None
        mats.append(m)
    return mats
