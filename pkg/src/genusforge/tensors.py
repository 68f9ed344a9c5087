"""Governing tensor spaces and constraint spaces over GF(2).

A multilinear map is stored as a bit table over injective basis tuples;
tuples that repeat an index or leave the support evaluate to zero.
Block structure enters through BlockShape, and the plain spaces are the
all-blocks-of-size-one case.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Iterable

from .f2 import F2Basis, bits_of, kernel_basis, parity, spans_equal

__all__ = [
    "BlockShape",
    "MultiTensor",
    "inj_tuples",
    "inj_index",
    "governing_tensor",
    "governing_tensor_general",
    "P_decompose",
    "P_reassemble",
    "cons_rows",
    "tilde_rows",
    "cons_space",
    "cons_space_general",
    "gov_space",
    "gov_space_general",
    "gov_equals_cons_check",
]


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for j in indices:
        m |= 1 << j
    return m


class BlockShape:
    """Partition of {0..N-1} into n consecutive blocks of sizes k[s]."""

    __slots__ = ("k", "n", "N", "_block", "_starts")

    def __init__(self, k: Iterable[int]) -> None:
        k = tuple(int(v) for v in k)
        if not k or min(k) < 1:
            raise ValueError("block sizes must be positive")
        self.k = k
        self.n = len(k)
        self.N = sum(k)
        starts, acc = [], 0
        for v in k:
            starts.append(acc)
            acc += v
        self._starts = tuple(starts)
        self._block = tuple(s for s, v in enumerate(k) for _ in range(v))

    def block(self, x: int) -> int:
        """Block index of coordinate x."""
        return self._block[x]

    def first(self, s: int) -> int:
        """First coordinate of block s."""
        return self._starts[s]

    def members(self, s: int) -> tuple[int, ...]:
        a = self._starts[s]
        return tuple(range(a, a + self.k[s]))

    def block_mask(self, s: int) -> int:
        return ((1 << self.k[s]) - 1) << self._starts[s]

    def full_mask(self) -> int:
        return (1 << self.N) - 1

    def pi(self, v: int) -> int:
        """Block-sum projection onto F2^n."""
        out = 0
        for s in range(self.n):
            out |= parity(v & self.block_mask(s)) << s
        return out

    def ker_pi_basis(self) -> list[tuple[int, int]]:
        """Pairs (first member, other member) spanning ker pi."""
        out = []
        for s in range(self.n):
            g = self._starts[s]
            for r in self.members(s)[1:]:
                out.append((g, r))
        return out

    def drop(self, blocks) -> "BlockShape":
        """Shape left after removing the given block or blocks."""
        gone = {blocks} if isinstance(blocks, int) else set(blocks)
        kept = [v for s, v in enumerate(self.k) if s not in gone]
        if not kept:
            raise ValueError("cannot drop every block")
        return BlockShape(kept)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BlockShape) and self.k == other.k

    def __hash__(self) -> int:
        return hash(self.k)

    def __repr__(self) -> str:
        return f"BlockShape({list(self.k)})"


@lru_cache(maxsize=None)
def inj_tuples(support: int, arity: int) -> tuple[tuple[int, ...], ...]:
    """Injective basis tuples inside the support, lexicographic."""
    return tuple(itertools.permutations(tuple(bits_of(support)), arity))


@lru_cache(maxsize=None)
def inj_index(support: int, arity: int) -> dict[tuple[int, ...], int]:
    return {t: p for p, t in enumerate(inj_tuples(support, arity))}


class MultiTensor:
    """Multilinear map (F2^N)^arity -> F2 vanishing on repeated indices.

    bits is the value table over inj_tuples(support, arity).
    """

    __slots__ = ("N", "arity", "support", "bits")

    def __init__(self, N: int, arity: int, support: int | None = None,
                 bits: int = 0) -> None:
        if arity < 1:
            raise ValueError("arity must be positive")
        if support is None:
            support = (1 << N) - 1
        if support >> N:
            raise ValueError("support beyond ambient dimension")
        self.N = N
        self.arity = arity
        self.support = support
        self.bits = bits

    def eval(self, tup: Iterable[int]) -> int:
        """Value on a tuple of basis indices."""
        tup = tuple(tup)
        if len(tup) != self.arity:
            raise ValueError("tuple length differs from arity")
        for j in tup:
            if not 0 <= j < self.N:
                raise ValueError(f"index {j} outside 0..{self.N - 1}")
        pos = inj_index(self.support, self.arity).get(tup)
        return 0 if pos is None else self.bits >> pos & 1

    def eval_vectors(self, vecs: Iterable[int]) -> int:
        """Multilinear evaluation on bitmask vectors."""
        vecs = list(vecs)
        if len(vecs) != self.arity:
            raise ValueError("tuple length differs from arity")
        idx = inj_index(self.support, self.arity)
        total = 0
        for tup in itertools.product(*(tuple(bits_of(v)) for v in vecs)):
            pos = idx.get(tup)
            if pos is not None:
                total ^= self.bits >> pos & 1
        return total

    def nonzero(self) -> list[tuple[int, ...]]:
        tuples = inj_tuples(self.support, self.arity)
        return [tuples[p] for p in bits_of(self.bits)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def embed(self, support: int) -> "MultiTensor":
        """The same map indexed over a larger support."""
        if support & self.support != self.support:
            raise ValueError("new support must contain the old one")
        if support == self.support:
            return MultiTensor(self.N, self.arity, support, self.bits)
        idx = inj_index(support, self.arity)
        bits = 0
        for tup in self.nonzero():
            bits |= 1 << idx[tup]
        return MultiTensor(self.N, self.arity, support, bits)

    def __xor__(self, other: "MultiTensor") -> "MultiTensor":
        if (self.N, self.arity) != (other.N, other.arity):
            raise ValueError("shape mismatch")
        sup = self.support | other.support
        return MultiTensor(
            self.N, self.arity, sup,
            self.embed(sup).bits ^ other.embed(sup).bits,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiTensor):
            return NotImplemented
        if (self.N, self.arity) != (other.N, other.arity):
            return False
        sup = self.support | other.support
        return self.embed(sup).bits == other.embed(sup).bits

    def __repr__(self) -> str:
        return (
            f"MultiTensor(N={self.N}, arity={self.arity}, "
            f"support=0b{self.support:b}, weight={self.bits.bit_count()})"
        )

    def to_text(self) -> str:
        """Serialize as a header line plus one line per nonzero tuple."""
        mask = "".join(
            "1" if self.support >> j & 1 else "0" for j in range(self.N)
        )
        lines = [f"{self.N} {self.arity} {mask}"]
        for tup in self.nonzero():
            lines.append(",".join(map(str, tup)) + "=1")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MultiTensor":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty tensor text")
        head = lines[0].split()
        if len(head) != 3:
            raise ValueError("header must be 'N arity support-mask'")
        N, arity = int(head[0]), int(head[1])
        support = 0
        for j, ch in enumerate(head[2]):
            if ch == "1":
                support |= 1 << j
            elif ch != "0":
                raise ValueError(f"bad mask bit {ch!r}")
        t = cls(N, arity, support)
        idx = inj_index(support, arity)
        for ln in lines[1:]:
            lhs, _, rhs = ln.partition("=")
            tup = tuple(int(v) for v in lhs.split(","))
            if tup not in idx:
                raise ValueError(f"tuple {tup} not injective inside support")
            if rhs == "1":
                t.bits |= 1 << idx[tup]
            elif rhs != "0":
                raise ValueError(f"bad value {rhs!r}")
        return t


def governing_tensor(n: int, A: Iterable[int], x: int) -> MultiTensor:
    """Sum over bijections [i] -> A pinning x to one of the last two slots.

    At arity 1 this degenerates to the character of x.
    """
    A = tuple(sorted(set(A)))
    if x not in A:
        raise ValueError("x must lie in A")
    if A and not 0 <= A[0] <= A[-1] < n:
        raise ValueError("A leaves the ambient index range")
    i = len(A)
    t = MultiTensor(n, i, mask_of(A))
    if i == 1:
        t.bits = 1
        return t
    idx = inj_index(t.support, i)
    for perm in itertools.permutations(A):
        if perm[-1] == x or perm[-2] == x:
            t.bits |= 1 << idx[perm]
    return t


def governing_tensor_general(shape: BlockShape, A: Iterable[int], x: int,
                             T: Iterable[int]) -> MultiTensor:
    """Block-summed bijection sum with the T-character pinned at the end.

    A collects block indices, x is the distinguished block, and T is a
    nonempty subset of the members of block x replacing its character.
    """
    A = tuple(sorted(set(A)))
    if x not in A:
        raise ValueError("x must lie in A")
    if A and not 0 <= A[0] <= A[-1] < shape.n:
        raise ValueError("A leaves the block index range")
    T = tuple(sorted(set(T)))
    if not T:
        raise ValueError("T must be nonempty")
    if any(shape.block(j) != x for j in T):
        raise ValueError("T must sit inside block x")
    i = len(A)
    pools = [shape.members(s) for s in A if s != x]
    pools.append(T)
    support = mask_of(j for pool in pools for j in pool)
    t = MultiTensor(shape.N, i, support)
    idx = inj_index(support, i)
    if i == 1:
        for j in T:
            t.bits |= 1 << idx[(j,)]
        return t
    last = len(pools) - 1
    for perm in itertools.permutations(range(len(pools))):
        if perm[-1] == last or perm[-2] == last:
            for combo in itertools.product(*(pools[s] for s in perm)):
                t.bits |= 1 << idx[combo]
    return t


def P_decompose(t: MultiTensor) -> dict[int, MultiTensor]:
    """Slot-zero components j -> b(e_j, -) over the support of t."""
    if t.arity < 2:
        raise ValueError("arity must be at least 2")
    idx = inj_index(t.support, t.arity)
    comps: dict[int, MultiTensor] = {}
    for j in bits_of(t.support):
        sub = t.support & ~(1 << j)
        comp = MultiTensor(t.N, t.arity - 1, sub)
        for p, tail in enumerate(inj_tuples(sub, t.arity - 1)):
            if t.bits >> idx[(j,) + tail] & 1:
                comp.bits |= 1 << p
        comps[j] = comp
    return comps


def P_reassemble(comps: dict[int, MultiTensor]) -> MultiTensor:
    """Rebuild a tensor from its slot-zero components."""
    if not comps:
        raise ValueError("nothing to reassemble")
    support = mask_of(comps)
    some = next(iter(comps.values()))
    t = MultiTensor(some.N, some.arity + 1, support)
    idx = inj_index(support, t.arity)
    for j, comp in comps.items():
        if comp.support != support & ~(1 << j) or comp.arity + 1 != t.arity:
            raise ValueError("components disagree on shape")
        for p, tail in enumerate(inj_tuples(comp.support, comp.arity)):
            if comp.bits >> p & 1:
                t.bits |= 1 << idx[(j,) + tail]
    return t


@lru_cache(maxsize=None)
def cons_rows(support: int, arity: int) -> tuple[tuple[str, tuple, int], ...]:
    """Labeled constraint rows cutting the consistent maps out of tilde-Multi.

    Arity 2 imposes Symmetry, arity 3 lifts it through every slot-zero
    component and adds one Hall-Witt row per 3-subset, higher arities lift
    the previous stage and add Commutativity of the first two slots.
    """
    idx = inj_index(support, arity)
    members = tuple(bits_of(support))
    rows: list[tuple[str, tuple, int]] = []
    if arity >= 3:
        for j in members:
            sub = support & ~(1 << j)
            sub_tuples = inj_tuples(sub, arity - 1)
            for kind, path, bits in cons_rows(sub, arity - 1):
                lifted = 0
                for p in bits_of(bits):
                    lifted |= 1 << idx[(j,) + sub_tuples[p]]
                rows.append((kind, (j,) + path, lifted))
    if arity == 2:
        for a, b in itertools.combinations(members, 2):
            rows.append(("sym", (a, b), 1 << idx[(a, b)] | 1 << idx[(b, a)]))
    elif arity == 3:
        for a, b, c in itertools.combinations(members, 3):
            bits = 1 << idx[(a, b, c)] | 1 << idx[(c, a, b)] | 1 << idx[(b, c, a)]
            rows.append(("hw", (a, b, c), bits))
    elif arity >= 4:
        for a, b in itertools.combinations(members, 2):
            rest = support & ~(1 << a) & ~(1 << b)
            for tail in inj_tuples(rest, arity - 2):
                bits = 1 << idx[(a, b) + tail] | 1 << idx[(b, a) + tail]
                rows.append(("comm", (a, b) + tail, bits))
    return tuple(rows)


def tilde_rows(shape: BlockShape,
               arity: int) -> tuple[tuple[str, tuple, int], ...]:
    """Extra vanishing rows for the block-refined constraint space.

    Three families: a kernel vector of the block-sum projection in any of
    the first arity-2 slots, kernel vectors in both of the last two slots,
    and basis tuples meeting one block twice.
    """
    support = shape.full_mask()
    idx = inj_index(support, arity)
    kernel = shape.ker_pi_basis()
    rows: list[tuple[str, tuple, int]] = []

    def row(kind: str, path: tuple, tuples: Iterable[tuple[int, ...]]) -> None:
        bits = 0
        for t in tuples:
            if len(set(t)) == len(t):
                bits ^= 1 << idx[t]
        if bits:
            rows.append((kind, path, bits))

    for h in range(arity - 2):
        for a, b in kernel:
            for rest in inj_tuples(support, arity - 1):
                row("ker-prefix", (h, a, b) + rest,
                    (rest[:h] + (v,) + rest[h:] for v in (a, b)))

    if arity >= 2:
        for a, b in kernel:
            for c, d in kernel:
                for rest in inj_tuples(support, arity - 2):
                    row("ker-pair", (a, b, c, d) + rest,
                        (rest + (p, q) for p in (a, b) for q in (c, d)))

    for pos, tup in enumerate(inj_tuples(support, arity)):
        blocks = [shape.block(j) for j in tup]
        if len(set(blocks)) < arity:
            rows.append(("block-pair", tup, 1 << pos))

    return tuple(rows)


def _support_of(n: int, B: Iterable[int] | int | None) -> int:
    if B is None:
        return (1 << n) - 1
    if isinstance(B, int):
        return B
    return mask_of(B)


def _solution_basis(support: int, arity: int,
                    rows: Iterable[int], N: int) -> list[MultiTensor]:
    cols = len(inj_tuples(support, arity))
    return [
        MultiTensor(N, arity, support, v)
        for v in kernel_basis(list(rows), cols)
    ]


def cons_space(n: int, B: Iterable[int] | int | None,
               i: int) -> list[MultiTensor]:
    """Basis of the consistent maps of arity i supported on B."""
    if i < 1:
        raise ValueError("arity must be positive")
    support = _support_of(n, B)
    rows = [bits for _, _, bits in cons_rows(support, i)]
    return _solution_basis(support, i, rows, n)


def cons_space_general(shape: BlockShape, i: int) -> list[MultiTensor]:
    """Basis of the block-refined consistent maps of arity i."""
    if i < 1:
        raise ValueError("arity must be positive")
    support = shape.full_mask()
    rows = [bits for _, _, bits in cons_rows(support, i)]
    rows += [bits for _, _, bits in tilde_rows(shape, i)]
    return _solution_basis(support, i, rows, shape.N)


def gov_space(n: int, B: Iterable[int] | int | None,
              i: int) -> list[MultiTensor]:
    """Echelon basis of the span of governing tensors supported on B."""
    support = _support_of(n, B)
    basis = F2Basis()
    for A in itertools.combinations(tuple(bits_of(support)), i):
        for x in A:
            basis.add(governing_tensor(n, A, x).embed(support).bits)
    return [MultiTensor(n, i, support, v) for v in basis.basis()]


def gov_space_general(shape: BlockShape, i: int) -> list[MultiTensor]:
    """Echelon basis of the span of block-refined governing tensors."""
    support = shape.full_mask()
    basis = F2Basis()
    for A in itertools.combinations(range(shape.n), i):
        for x in A:
            mem = shape.members(x)
            for size in range(1, len(mem) + 1):
                for T in itertools.combinations(mem, size):
                    t = governing_tensor_general(shape, A, x, T)
                    basis.add(t.embed(support).bits)
    return [MultiTensor(shape.N, i, support, v) for v in basis.basis()]


def gov_equals_cons_check(arg: int | BlockShape, i: int) -> dict:
    """Compare the governing span with the constraint kernel as subspaces."""
    if isinstance(arg, BlockShape):
        gov = gov_space_general(arg, i)
        cons = cons_space_general(arg, i)
    else:
        gov = gov_space(arg, None, i)
        cons = cons_space(arg, None, i)
    equal = spans_equal([t.bits for t in gov], [t.bits for t in cons])
    return {"dim_gov": len(gov), "dim_cons": len(cons), "equal": equal}


def cons_dim_formula(b: int, i: int) -> int:
    """Predicted dimension of the plain constraint space."""
    return b if i == 1 else (i - 1) * comb(b, i)


def cons_dim_formula_general(shape: BlockShape, i: int) -> int:
    """Predicted dimension of the block-refined constraint space."""
    if i == 1:
        return shape.N
    return shape.N * comb(shape.n - 1, i - 1) - comb(shape.n, i)
