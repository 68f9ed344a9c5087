"""Expansion maps on enumerated universal groups, in monomial coordinates.

A map Phi on the group is stored by its coefficients over the
distinguished basis: the characters chi_x together with the coefficient
extractors Phi_(A,x), where Phi_(A,x)(sigma) reads the t_{A - block(x)}
monomial of the polynomial part of component x.  Value tables are bit
masks indexed by the group's sorted code order.  Cornering, commuting
vectors, the theta 2-cocycle, and layer reconstruction all act on the
coefficient side; tables are materialized only on small groups.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from .f2 import F2Basis, F2Solver, bits_of, kernel_basis, rank, solve
from .groups import ExpansionGroup, ResourceLimitError, build_universal_general, \
    descending_central_series
from .f2 import F2Vector
from .tensors import BlockShape, governing_tensor_general

__all__ = [
    "PhiMap",
    "CommVector",
    "ThetaCocycle",
    "ExpansionMap",
    "build_phi_basis",
    "phi_one_basis",
    "phi_layer",
    "lcomm_check",
    "corner_operator",
    "inflate",
    "shuffling_check",
    "restriction_kernel_check",
    "cocycle_view",
    "coboundary",
    "theta",
    "solve_cochain",
    "realize_commuting_vector",
    "nil_deg",
    "reconstruct_layer",
    "reconstruct_report",
]

TABLE_CEILING = 1 << 16


def _pack_bits(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


class _Context:
    """Enumerated universal group of a shape plus its Phi bookkeeping."""

    __slots__ = ("shape", "group", "labels", "index", "order", "_tables",
                 "_solver", "_series", "_blockchi", "_mulpos", "_checked")

    def __init__(self, shape: BlockShape):
        self.shape = shape
        self.group = build_universal_general(shape)
        labels = [("chi", x) for x in range(shape.N)]
        for size in range(2, shape.n + 1):
            for A in combinations(range(shape.n), size):
                for i in A:
                    for x in shape.members(i):
                        labels.append(("phi", A, x))
        self.labels = labels
        self.index = {lab: p for p, lab in enumerate(labels)}
        self.order = self.group.order
        self._tables = {}
        self._solver = None
        self._series = None
        self._blockchi = None
        self._mulpos = {}
        self._checked = False

    # -- single-element reads --

    def eval_label(self, label, code: int) -> int:
        if label[0] == "chi":
            return (self.group.phi(code) >> label[1]) & 1
        _, A, x = label
        comp = self.group.comps[x]
        idx = 0
        bx = self.shape.block(x)
        for s in A:
            if s != bx:
                idx |= 1 << comp.pos[s]
        return (code >> (comp.poly_off + idx)) & 1

    # -- whole tables --

    def _codes(self) -> np.ndarray:
        return self.group.codes

    def pos_of(self, code: int) -> int:
        codes = self._codes()
        p = int(np.searchsorted(codes, np.uint64(code)))
        if p >= len(codes) or int(codes[p]) != code:
            raise ValueError("code outside the enumerated group")
        return p

    def positions(self, arr: np.ndarray) -> np.ndarray:
        return np.searchsorted(self._codes(), arr)

    def _guard(self):
        if self.order > TABLE_CEILING:
            raise ResourceLimitError(self.order)

    def table(self, label) -> int:
        tab = self._tables.get(label)
        if tab is None:
            self._guard()
            codes = self._codes()
            if label[0] == "chi":
                bits = self.group.phi_bit_array(codes, label[1])
            else:
                _, A, x = label
                comp = self.group.comps[x]
                idx = 0
                bx = self.shape.block(x)
                for s in A:
                    if s != bx:
                        idx |= 1 << comp.pos[s]
                shift = np.uint64(comp.poly_off + idx)
                bits = ((codes >> shift) & np.uint64(1)).astype(np.uint8)
            tab = _pack_bits(bits)
            self._tables[label] = tab
        return tab

    def all_tables(self) -> list[int]:
        tabs = [self.table(lab) for lab in self.labels]
        if not self._checked:
            if rank(tabs) != len(tabs):
                raise ValueError("distinguished family is dependent")
            self._checked = True
        return tabs

    def solver(self) -> F2Solver:
        if self._solver is None:
            self._solver = F2Solver(self.all_tables())
        return self._solver

    def series(self) -> list[list[int]]:
        if self._series is None:
            self._series = [list(b) for b in descending_central_series(self.group) if b]
        return self._series

    def block_char(self, s: int) -> int:
        if self._blockchi is None:
            self._blockchi = {}
        tab = self._blockchi.get(s)
        if tab is None:
            tab = 0
            for x in self.shape.members(s):
                tab ^= self.table(("chi", x))
            self._blockchi[s] = tab
        return tab

    def chi_set(self, B) -> int:
        """Value table of the product of the block characters over B."""
        tab = (1 << self.order) - 1
        for s in B:
            tab &= self.block_char(s)
        return tab

    def mul_positions(self, p: int) -> np.ndarray:
        """Positions of codes[p] * codes[q] over all q."""
        row = self._mulpos.get(p)
        if row is None:
            self._guard()
            prods = self.group.mul_left_array(int(self._codes()[p]), self._codes())
            row = self.positions(prods)
            self._mulpos[p] = row
        return row


_CONTEXTS: dict[tuple[int, ...], _Context] = {}


def _context(shape: BlockShape) -> _Context:
    ctx = _CONTEXTS.get(shape.k)
    if ctx is None:
        ctx = _Context(shape)
        _CONTEXTS[shape.k] = ctx
    return ctx


class PhiMap:
    """Function on the enumerated universal group, by basis coefficients."""

    __slots__ = ("shape", "coords", "_nil")

    def __init__(self, shape: BlockShape, coords: int = 0):
        self.shape = shape
        self.coords = coords
        self._nil = None

    def labels(self) -> list:
        ctx = _context(self.shape)
        return [ctx.labels[p] for p in bits_of(self.coords)]

    def eval(self, code: int) -> int:
        ctx = _context(self.shape)
        out = 0
        for p in bits_of(self.coords):
            out ^= ctx.eval_label(ctx.labels[p], code)
        return out

    @property
    def values(self) -> int:
        ctx = _context(self.shape)
        out = 0
        for p in bits_of(self.coords):
            out ^= ctx.table(ctx.labels[p])
        return out

    @property
    def nil_deg(self) -> int:
        if self._nil is None:
            self._nil = nil_deg(self.shape, self)
        return self._nil

    def is_zero(self) -> bool:
        return self.coords == 0

    def __xor__(self, other: "PhiMap") -> "PhiMap":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PhiMap(self.shape, self.coords ^ other.coords)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PhiMap) and self.shape == other.shape
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash((self.shape.k, self.coords))

    def __repr__(self) -> str:
        return f"PhiMap(shape={list(self.shape.k)}, coords={bin(self.coords)})"


class CommVector:
    """One corner map per block, pairwise compatible under cornering."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape: BlockShape, entries):
        entries = tuple(entries)
        if len(entries) != shape.n:
            raise ValueError("need one entry per block")
        for i, phi in enumerate(entries):
            if phi.shape != shape.drop(i):
                raise ValueError(f"entry {i} lives on the wrong corner")
        self.shape = shape
        self.entries = entries

    def is_commuting(self) -> bool:
        n = self.shape.n
        for i, j in combinations(range(n), 2):
            if n == 2:
                continue
            left = corner_operator(self.shape.drop(i),
                                   _drop_index(self.shape, i, j),
                                   self.entries[i])
            right = corner_operator(self.shape.drop(j),
                                    _drop_index(self.shape, j, i),
                                    self.entries[j])
            if left != right:
                return False
        return True

    def __repr__(self) -> str:
        return f"CommVector(shape={list(self.shape.k)})"


class ThetaCocycle:
    """Pairing table theta(sigma, tau) in the group's sorted code order."""

    __slots__ = ("shape", "rows")

    def __init__(self, shape: BlockShape, rows):
        rows = tuple(rows)
        if rows and rows[0] & 1:
            raise ValueError("theta must vanish at the identity pair")
        self.shape = shape
        self.rows = rows

    def bit(self, p: int, q: int) -> int:
        return (self.rows[p] >> q) & 1

    @classmethod
    def from_function(cls, shape: BlockShape, fn) -> "ThetaCocycle":
        ctx = _context(shape)
        codes = [int(c) for c in ctx._codes()]
        rows = []
        for a in codes:
            row = 0
            for q, b in enumerate(codes):
                row |= fn(a, b) << q
            rows.append(row)
        return cls(shape, rows)

    def is_cocycle(self, samples: int = 4096, seed: int = 0) -> bool:
        """2-cocycle identity; exhaustive up to order 256, sampled above."""
        ctx = _context(self.shape)
        order = ctx.order
        R = np.zeros((order, order), dtype=np.uint8)
        for p, row in enumerate(self.rows):
            R[p] = np.frombuffer(
                np.unpackbits(
                    np.frombuffer(row.to_bytes((order + 7) // 8, "little"),
                                  dtype=np.uint8),
                    bitorder="little", count=order), dtype=np.uint8)
        M = np.vstack([ctx.mul_positions(p) for p in range(order)])
        if order <= 256:
            pairs = product(range(order), repeat=2)
        else:
            rng = np.random.default_rng(seed)
            pairs = zip(rng.integers(0, order, samples),
                        rng.integers(0, order, samples))
        for p, q in pairs:
            acc = R[M[p, q]] ^ R[p, M[q]] ^ R[q]
            if R[p, q]:
                acc ^= 1
            if acc.any():
                return False
        return True

    def __repr__(self) -> str:
        return f"ThetaCocycle(shape={list(self.shape.k)}, order={len(self.rows)})"


class ExpansionMap:
    """A pointed family of coefficient tables phi_B on one group.

    support lists the block characters carried by the map, pointer marks
    the distinguished one, and coords assigns to every subset B of the
    non-pointed support positions the value table of phi_B; phi_empty is
    the pointed character itself.
    """

    __slots__ = ("group", "support", "pointer", "coords")

    def __init__(self, group: ExpansionGroup, support, pointer: int, coords):
        self.group = group
        self.support = list(support)
        self.pointer = pointer
        self.coords = dict(coords)

    def verify(self) -> bool:
        """Coboundary recursion on all pairs plus the pointed-base case."""
        ctx = _context(self.group.shape)
        chi = 0
        for x in bits_of(self.support[self.pointer].bits):
            chi ^= ctx.table(("chi", x))
        if self.coords[()] != chi:
            return False
        others = [t for t in range(len(self.support)) if t != self.pointer]
        order = ctx.order
        full = (1 << order) - 1
        for r in range(len(others) + 1):
            for B in combinations(others, r):
                tab = self.coords[B]
                for p in range(order):
                    mrow = ctx.mul_positions(p)
                    left = _gather_bits(tab, mrow, order)
                    acc = left ^ ((full if (tab >> p) & 1 else 0)) ^ tab
                    for s in range(1, r + 1):
                        for S in combinations(B, s):
                            chi_s = full
                            for t in S:
                                blk = 0
                                for x in bits_of(self.support[t].bits):
                                    blk ^= ctx.table(("chi", x))
                                chi_s &= blk
                            if (chi_s >> p) & 1:
                                rest = tuple(t for t in B if t not in S)
                                acc ^= self.coords[rest]
                    if acc:
                        return False
        return True


def _gather_bits(tab: int, positions: np.ndarray, order: int) -> int:
    arr = np.unpackbits(
        np.frombuffer(tab.to_bytes((order + 7) // 8, "little"), dtype=np.uint8),
        bitorder="little", count=order)
    return _pack_bits(arr[positions])


# -- the distinguished basis --

def build_phi_basis(shape: BlockShape) -> list[PhiMap]:
    """Characters first, then the coefficient extractors, one PhiMap each."""
    ctx = _context(shape)
    return [PhiMap(shape, 1 << p) for p in range(len(ctx.labels))]


def phi_one_basis(shape: BlockShape) -> list[PhiMap]:
    """Characters and the shuffled block products chi_A, spanning layer 1."""
    ctx = _context(shape)
    out = [PhiMap(shape, 1 << x) for x in range(shape.N)]
    for size in range(2, shape.n + 1):
        for A in combinations(range(shape.n), size):
            coords = 0
            for i in A:
                for x in shape.members(i):
                    coords |= 1 << ctx.index[("phi", A, x)]
            out.append(PhiMap(shape, coords))
    return out


def expansion_map(shape: BlockShape, A, x: int) -> ExpansionMap:
    """The pointed family of one extractor: phi_B reads t_B monomials."""
    A = tuple(sorted(set(A)))
    ctx = _context(shape)
    bx = shape.block(x)
    if bx not in A:
        raise ValueError("pointer block must lie in the support")
    support = [F2Vector(shape.N, shape.block_mask(s)) for s in A]
    pointer = A.index(bx)
    others = [t for t in range(len(A)) if t != pointer]
    coords = {}
    for r in range(len(others) + 1):
        for B in combinations(others, r):
            sub = tuple(sorted({bx} | {A[t] for t in B}))
            if len(sub) == 1:
                coords[B] = ctx.table(("chi", x))
            else:
                coords[B] = ctx.table(("phi", sub, x))
    return ExpansionMap(ctx.group, support, pointer, coords)


# -- cornering --

def _drop_maps(shape: BlockShape, d: int):
    kept_blocks = [s for s in range(shape.n) if s != d]
    bmap = {s: t for t, s in enumerate(kept_blocks)}
    xs = [x for x in range(shape.N) if shape.block(x) != d]
    xmap = {x: t for t, x in enumerate(xs)}
    return bmap, xmap


def _drop_index(shape: BlockShape, dropped: int, s: int) -> int:
    """Index of original block s inside shape.drop(dropped)."""
    return s - 1 if s > dropped else s


def corner_operator(shape: BlockShape, i: int, phi: PhiMap) -> PhiMap:
    """Strip block i: extractors lose one support block, characters die."""
    if not 0 <= i < shape.n:
        raise ValueError("block index out of range")
    if shape.n == 1:
        raise ValueError("cannot corner a single block")
    if phi.shape != shape:
        raise ValueError("map lives on a different shape")
    ctx = _context(shape)
    sub = _context(shape.drop(i))
    bmap, xmap = _drop_maps(shape, i)
    out = 0
    for p in bits_of(phi.coords):
        label = ctx.labels[p]
        if label[0] == "chi":
            continue
        _, A, x = label
        if i not in A or shape.block(x) == i:
            continue
        rest = tuple(bmap[s] for s in A if s != i)
        if len(rest) == 1:
            out ^= 1 << sub.index[("chi", xmap[x])]
        else:
            out ^= 1 << sub.index[("phi", rest, xmap[x])]
    return PhiMap(shape.drop(i), out)


def inflate(shape: BlockShape, gone, phi: PhiMap) -> PhiMap:
    """Rename a corner map back to the ambient labels.

    Extractor values only watch monomials and vector coordinates away
    from the removed blocks, so the renamed map is the pullback along
    the quotient that kills the generators of those blocks.
    """
    gone = sorted({gone} if isinstance(gone, int) else set(gone))
    corner = shape.drop(gone)
    if phi.shape != corner:
        raise ValueError("map does not live on the indicated corner")
    kept_blocks = [s for s in range(shape.n) if s not in gone]
    kept_xs = [x for x in range(shape.N) if shape.block(x) not in gone]
    ctx = _context(shape)
    sub = _context(corner)
    out = 0
    for p in bits_of(phi.coords):
        label = sub.labels[p]
        if label[0] == "chi":
            out ^= 1 << ctx.index[("chi", kept_xs[label[1]])]
        else:
            _, A, x = label
            big = tuple(kept_blocks[s] for s in A)
            out ^= 1 << ctx.index[("phi", big, kept_xs[x])]
    return PhiMap(shape, out)


# -- pointwise identities --

def lcomm_check(shape: BlockShape, A, pointer_x: int, gens) -> tuple[int, int]:
    """Extractor value on a nested commutator vs the governing tensor."""
    A = tuple(sorted(set(A)))
    gens = tuple(gens)
    if len(gens) != len(A):
        raise ValueError("tuple length must match the support size")
    ctx = _context(shape)
    if len(A) == 1:
        label = ("chi", pointer_x)
        code = ctx.group.gen_codes[gens[0]]
    else:
        label = ("phi", A, pointer_x)
        code = ctx.group.nested_commutator([ctx.group.gen_codes[y] for y in gens])
    left = ctx.eval_label(label, code)
    tensor = governing_tensor_general(shape, A, shape.block(pointer_x), (pointer_x,))
    return left, tensor.eval(gens)


def shuffling_check(shape: BlockShape, A) -> bool:
    """Summing the extractors over all pointers gives the block product."""
    A = tuple(sorted(set(A)))
    ctx = _context(shape)
    total = 0
    if len(A) == 1:
        for x in shape.members(A[0]):
            total ^= ctx.table(("chi", x))
    else:
        for i in A:
            for x in shape.members(i):
                total ^= ctx.table(("phi", A, x))
    return total == ctx.chi_set(A)


def restriction_kernel_check(shape: BlockShape) -> dict:
    """Restrict the Phi space to the commutator subgroup and compare.

    The restriction should hit the full dual of the commutator subgroup
    and its kernel should be exactly layer 1.
    """
    ctx = _context(shape)
    series = ctx.series()
    comm = series[0] if series else []
    rows = []
    for lab in ctx.labels:
        row = 0
        for t, w in enumerate(comm):
            row |= ctx.eval_label(lab, w) << t
        rows.append(row)
    image_dim = rank(rows)
    ker = kernel_basis([_transpose_mask(rows, t) for t in range(len(comm))],
                       cols=len(ctx.labels))
    predicted = [p.coords for p in phi_one_basis(shape)]
    return {
        "surjective": image_dim == len(comm),
        "image_dim": image_dim,
        "kernel_dim": len(ker),
        "kernel_matches": sorted(_span_canon(ker)) == sorted(_span_canon(predicted)),
    }


def _transpose_mask(rows: list[int], t: int) -> int:
    out = 0
    for k, row in enumerate(rows):
        out |= ((row >> t) & 1) << k
    return out


def _span_canon(vecs) -> list[int]:
    b = F2Basis(vecs)
    return b.basis()


# -- coboundaries and cocycles --

def coboundary(phi: PhiMap) -> ThetaCocycle:
    """dPhi(sigma, tau) = Phi(sigma tau) + Phi(sigma) + Phi(tau)."""
    ctx = _context(phi.shape)
    order = ctx.order
    tab = phi.values
    full = (1 << order) - 1
    rows = []
    for p in range(order):
        row = _gather_bits(tab, ctx.mul_positions(p), order)
        row ^= full if (tab >> p) & 1 else 0
        row ^= tab
        rows.append(row)
    return ThetaCocycle(phi.shape, rows)


def cocycle_view(phi: PhiMap) -> dict:
    """All cornered tables of one map with the recursion certificate.

    tables[B] is the value table on the ambient group of the B-fold
    corner pulled back along the quotient killing the blocks of B; the
    certificate checks, on every pair and every B, the recursion
    phi_B(st) = phi_B(s) + sum over S disjoint from B of
    chi_S(s) phi_{B+S}(t), the empty S counting 1.  At B empty this is
    the coboundary expansion of phi itself.
    """
    shape = phi.shape
    ctx = _context(shape)
    order = ctx.order
    full = (1 << order) - 1
    tables = {(): phi.values}
    for r in range(1, shape.n + 1):
        for B in combinations(range(shape.n), r):
            if r == shape.n:
                tables[B] = 0
                continue
            cur = phi
            cur_shape = shape
            dropped = []
            for b in B:
                cur = corner_operator(cur_shape, _shifted_index(b, dropped), cur)
                cur_shape = cur.shape
                dropped.append(b)
            tables[B] = inflate(shape, B, cur).values
    certified = True
    chis = {B: ctx.chi_set(B) for B in tables if B}
    for B, tab in tables.items():
        comp = [s for s in range(shape.n) if s not in B]
        for p in range(order):
            acc = _gather_bits(tab, ctx.mul_positions(p), order)
            acc ^= full if (tab >> p) & 1 else 0
            acc ^= tab
            for r in range(1, len(comp) + 1):
                for S in combinations(comp, r):
                    if (chis[S] >> p) & 1:
                        acc ^= tables[tuple(sorted(B + S))]
            if acc:
                certified = False
    return {"tables": tables, "certified": certified}


def _shifted_index(b: int, dropped: list[int]) -> int:
    return b - sum(1 for d in dropped if d < b)


def _composite(shape: BlockShape, v: CommVector, B) -> PhiMap:
    B = sorted(B)
    phi = v.entries[B[0]]
    dropped = [B[0]]
    for b in B[1:]:
        phi = corner_operator(phi.shape, _shifted_index(b, dropped), phi)
        dropped.append(b)
    return phi


def theta(shape: BlockShape, v: CommVector) -> ThetaCocycle:
    """theta(s,t) sums chi_B(s) times the B-fold corner of v at t."""
    if v.shape != shape:
        raise ValueError("vector lives on a different shape")
    if not v.is_commuting():
        raise ValueError("vector is not commuting")
    ctx = _context(shape)
    order = ctx.order
    parts = []
    for r in range(1, shape.n):
        for B in combinations(range(shape.n), r):
            tab = inflate(shape, B, _composite(shape, v, B)).values
            if tab:
                parts.append((ctx.chi_set(B), tab))
    rows = []
    for p in range(order):
        row = 0
        for chi, tab in parts:
            if (chi >> p) & 1:
                row ^= tab
        rows.append(row)
    return ThetaCocycle(shape, rows)


def solve_cochain(G: ExpansionGroup, th: ThetaCocycle):
    """Value table with coboundary th, spread over the Cayley graph.

    The identity gets 0 and every generator is seeded 0; each edge then
    forces the product's value.  A conflicting edge means th is not a
    coboundary under this seeding, hence not one at all, and the answer
    is absent.  Small groups get a full closing verification.
    """
    order = G.order
    if len(th.rows) != order:
        raise ValueError("table size differs from the group order")
    codes = G.codes
    gen_pos = [int(np.searchsorted(codes, np.uint64(g))) for g in G.gen_codes]
    perms = [np.searchsorted(codes, G.right_mul_array(codes, g))
             for g in G.gen_codes]
    val = np.full(order, -1, dtype=np.int8)
    val[0] = 0
    for gp in gen_pos:
        val[gp] = 0
    frontier = [0] + gen_pos
    while frontier:
        nxt = []
        for p in frontier:
            for gi, perm in enumerate(perms):
                q = int(perm[p])
                cand = int(val[p]) ^ ((th.rows[p] >> gen_pos[gi]) & 1)
                if val[q] < 0:
                    val[q] = cand
                    nxt.append(q)
                elif int(val[q]) != cand:
                    return None
        frontier = nxt
    table = _pack_bits((val == 1).astype(np.uint8))
    if order * order <= 1 << 20:
        full = (1 << order) - 1
        for p in range(order):
            prods = G.mul_left_array(int(codes[p]), codes)
            row = _gather_bits(table, np.searchsorted(codes, prods), order)
            row ^= full if (table >> p) & 1 else 0
            row ^= table
            if row != th.rows[p]:
                return None
    return table


# -- realization and layer reconstruction --

def _corner_matrix(shape: BlockShape, i: int) -> list[int]:
    """Corner coordinates of every basis map under the block-i operator."""
    ctx = _context(shape)
    return [corner_operator(shape, i, PhiMap(shape, 1 << p)).coords
            for p in range(len(ctx.labels))]


def realize_commuting_vector(shape: BlockShape, v: CommVector) -> PhiMap:
    """Solve for a map whose corners are the given vector."""
    if v.shape != shape:
        raise ValueError("vector lives on a different shape")
    if not v.is_commuting():
        raise ValueError("vector is not commuting")
    ctx = _context(shape)
    width = len(ctx.labels)
    rows, rhs, r = [], 0, 0
    for i in range(shape.n):
        mat = _corner_matrix(shape, i)
        sub = _context(shape.drop(i))
        for l in range(len(sub.labels)):
            row = 0
            for k in range(width):
                row |= ((mat[k] >> l) & 1) << k
            rows.append(row)
            rhs |= ((v.entries[i].coords >> l) & 1) << r
            r += 1
    coords = solve(rows, rhs, cols=width)
    if coords is None:
        raise RuntimeError("commuting vector admits no realization")
    return PhiMap(shape, coords)


def nil_deg(shape: BlockShape, phi: PhiMap) -> int:
    """Largest series depth the map still sees; 0 for the zero map."""
    if phi.coords == 0:
        return 0
    ctx = _context(shape)
    deepest = 1
    for m, basis in enumerate(ctx.series(), start=2):
        if any(phi.eval(w) for w in basis):
            deepest = m
    return deepest


def phi_layer(shape: BlockShape, j: int) -> list[PhiMap]:
    """Maps vanishing on the (j+1)-th term of the central series."""
    if j < 0:
        raise ValueError("layer index must be nonnegative")
    ctx = _context(shape)
    width = len(ctx.labels)
    if j == 0:
        return []
    series = ctx.series()
    conds = []
    for basis in series[j - 1:]:
        for w in basis:
            row = 0
            for p, lab in enumerate(ctx.labels):
                row |= ctx.eval_label(lab, w) << p
            conds.append(row)
    if not conds:
        return [PhiMap(shape, 1 << p) for p in range(width)]
    return [PhiMap(shape, c) for c in kernel_basis(conds, cols=width)]


def reconstruct_report(shape: BlockShape, j: int, corner_spaces) -> dict:
    """Commuting vectors from corner layers, filtered, lifted, spanned.

    corner_spaces[i] is a basis of the (j-1)-th layer on the corner
    without block i.  The commuting conditions cut a kernel; survivors
    of the coboundary test are realized and joined with layer 1.
    """
    if j < 2:
        raise ValueError("reconstruction starts at layer 2")
    corner_spaces = [list(c) for c in corner_spaces]
    if len(corner_spaces) != shape.n or any(not c for c in corner_spaces):
        raise ValueError("need a nonempty basis for every corner")
    for i, space in enumerate(corner_spaces):
        for phi in space:
            if phi.shape != shape.drop(i):
                raise ValueError(f"corner basis {i} lives on the wrong shape")
    ctx = _context(shape)
    sizes = [len(c) for c in corner_spaces]
    offs = [sum(sizes[:i]) for i in range(shape.n)]
    width = sum(sizes)
    conds = []
    for i, jj in combinations(range(shape.n), 2):
        if shape.n == 2:
            continue
        sub = _context(shape.drop((i, jj)))
        li = [corner_operator(shape.drop(i), _drop_index(shape, i, jj), p).coords
              for p in corner_spaces[i]]
        lj = [corner_operator(shape.drop(jj), _drop_index(shape, jj, i), p).coords
              for p in corner_spaces[jj]]
        for l in range(len(sub.labels)):
            row = 0
            for k, c in enumerate(li):
                row |= ((c >> l) & 1) << (offs[i] + k)
            for k, c in enumerate(lj):
                row |= ((c >> l) & 1) << (offs[jj] + k)
            if row:
                conds.append(row)
    if conds:
        kernel = kernel_basis(conds, cols=width)
    else:
        kernel = [1 << t for t in range(width)]
    span = F2Basis()
    obstructions = 0
    for kv in kernel:
        entries = []
        for i in range(shape.n):
            c = 0
            for k in range(sizes[i]):
                if (kv >> (offs[i] + k)) & 1:
                    c ^= corner_spaces[i][k].coords
            entries.append(PhiMap(shape.drop(i), c))
        v = CommVector(shape, entries)
        if solve_cochain(ctx.group, theta(shape, v)) is None:
            obstructions += 1
            continue
        span.add(realize_commuting_vector(shape, v).coords)
    for phi in phi_one_basis(shape):
        span.add(phi.coords)
    basis = [PhiMap(shape, c) for c in span.basis()]
    return {
        "shape": list(shape.k),
        "j": j,
        "dim": len(basis),
        "basis_coords": [p.coords for p in basis],
        "obstruction_count": obstructions,
        "commvect_dim": len(kernel),
        "lifted_count": len(kernel) - obstructions,
        "basis": basis,
    }


def reconstruct_layer(shape: BlockShape, j: int, corner_spaces) -> list[PhiMap]:
    return reconstruct_report(shape, j, corner_spaces)["basis"]
