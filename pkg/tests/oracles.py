"""Independent brute-force reference computations for the test suite.

Everything here recomputes expected values from first principles with
deliberately different data structures (dict tables, frozensets) than
the package itself, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from math import comb


# ---------------------------------------------------------------------------
# naive GF(2) spans over arbitrary hashable "coordinates"


def span_dim(sets) -> int:
    """Dimension of the span of subsets under symmetric difference."""
    basis: dict = {}
    for s in sets:
        s = frozenset(s)
        while s:
            key = min(s)
            if key in basis:
                s = s ^ basis[key]
            else:
                basis[key] = s
                break
    return len(basis)


def in_naive_span(sets, target) -> bool:
    return span_dim(list(sets)) == span_dim(list(sets) + [target])


# ---------------------------------------------------------------------------
# governing tensors evaluated straight from their defining formulas


def gov_value(A, x, tup) -> int:
    """Value of the plain governing tensor at a basis tuple."""
    total = 0
    if len(A) == 1:
        return int(tup[0] == x)
    for perm in itertools.permutations(sorted(A)):
        if perm[-1] == x or perm[-2] == x:
            total ^= int(all(t == p for t, p in zip(tup, perm)))
    return total


def gov_general_value(shape, A, x, T, tup) -> int:
    """Value of the block-refined governing tensor at a basis tuple."""
    T = set(T)
    if len(A) == 1:
        return int(tup[0] in T)
    symbols = [("b", s) for s in sorted(A) if s != x] + [("T",)]
    total = 0
    for perm in itertools.permutations(symbols):
        if perm[-1] != ("T",) and perm[-2] != ("T",):
            continue
        prod = 1
        for t, sym in zip(tup, perm):
            if sym[0] == "b":
                prod &= int(shape.block(t) == sym[1])
            else:
                prod &= int(t in T)
        total ^= prod
    return total


def injective_tuples(indices, arity):
    return list(itertools.permutations(sorted(indices), arity))


def gov_support_set(n, A, x):
    """Nonzero injective tuples of the plain governing tensor."""
    tuples = injective_tuples(range(n), len(A))
    return frozenset(t for t in tuples if gov_value(A, x, t))


def gov_dim_naive(n, i) -> int:
    sets = []
    for A in itertools.combinations(range(n), i):
        for x in A:
            sets.append(gov_support_set(n, A, x))
    return span_dim(sets)


def gov_general_dim_naive(shape, i) -> int:
    sets = []
    tuples = injective_tuples(range(shape.N), i)
    for A in itertools.combinations(range(shape.n), i):
        for x in A:
            mem = shape.members(x)
            for size in range(1, len(mem) + 1):
                for T in itertools.combinations(mem, size):
                    s = frozenset(
                        t for t in tuples
                        if gov_general_value(shape, A, x, T, t)
                    )
                    sets.append(s)
    return span_dim(sets)


def tilde_gov_dim_by_counting(shape, i) -> int:
    """Per-subset count of the block-refined governing span."""
    total = 0
    for A in itertools.combinations(range(shape.n), i):
        total += sum(shape.k[s] for s in A) - 1
    return total


# ---------------------------------------------------------------------------
# canonical tuples and the rewriting procedure


def canonical_tuples(n, i):
    """Injective tuples with increasing prefix and maximal last entry."""
    if i == 1:
        return [(x,) for x in range(n)]
    out = []
    for A in itertools.combinations(range(n), i):
        m = A[-1]
        for p in A[:-1]:
            prefix = tuple(sorted(set(A) - {m, p}))
            out.append(prefix + (p, m))
    return out


def rewrite_value(values, tup) -> int:
    """Resolve any injective tuple from canonical values.

    Sorting the prefix uses Commutativity, swapping the last two entries
    uses Symmetry, and a maximal entry stuck at the end of the prefix is
    pushed out with one Hall-Witt split.
    """
    i = len(tup)
    tup = tuple(sorted(tup[: i - 2])) + tuple(tup[i - 2:])
    m = max(tup)
    if tup[-1] == m:
        return values[tup]
    if tup[-2] == m:
        swapped = tup[: i - 2] + (tup[-1], tup[-2])
        return values[swapped]
    pre, c, a, b = tup[: i - 3], tup[i - 3], tup[i - 2], tup[i - 1]
    return rewrite_value(values, pre + (b, a, c)) ^ rewrite_value(
        values, pre + (a, b, c)
    )


# ---------------------------------------------------------------------------
# small group-theory references


def closure_by_sets(gens, mul, identity):
    """Breadth-first closure using plain Python sets."""
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def group_order_by_sets(gens, mul, identity) -> int:
    return len(closure_by_sets(gens, mul, identity))


def _act_set(vec, polys):
    """Reference action on square-free monomials, one index at a time."""
    out = frozenset(polys)
    for j in sorted(vec):
        nxt = set()
        for B in out:
            if j in B:
                nxt ^= {B}
            else:
                nxt ^= {B, B | frozenset([j])}
        out = frozenset(nxt)
    return out


def tuple_model_gens(k):
    """Universal block-shape generators in a tuple-of-frozensets model.

    Component x of generator j is ({t_empty} if j == x else nothing, no
    vector) inside the same block, and (nothing, {block(j)}) across blocks.
    """
    n = len(k)
    N = sum(k)
    block = [s for s, v in enumerate(k) for _ in range(v)]
    gens = []
    for j in range(N):
        comps = []
        for x in range(N):
            if block[j] == block[x]:
                polys = frozenset([frozenset()]) if j == x else frozenset()
                vec = frozenset()
            else:
                polys = frozenset()
                vec = frozenset([block[j]])
            comps.append((polys, vec))
        gens.append(tuple(comps))
    identity = tuple((frozenset(), frozenset()) for _ in range(N))
    return gens, identity


def tuple_model_mul(a, b):
    out = []
    for (p1, v1), (p2, v2) in zip(a, b):
        out.append((p1 ^ _act_set(v1, p2), v1 ^ v2))
    return tuple(out)


def tuple_model_inv(a):
    return tuple((_act_set(v, p), v) for p, v in a)


def series_dims_by_sets(gens, mul, inv, identity):
    """Graded dimensions of the descending central series, all set-based."""
    import math

    def comm(a, b):
        return mul(mul(a, b), mul(inv(a), inv(b)))

    def subgroup(elements):
        elements = [e for e in set(elements) if e != identity]
        if not elements:
            return {identity}
        return closure_by_sets(elements, mul, identity)

    G = closure_by_sets(gens, mul, identity)
    dims = []
    prev = G
    cur = subgroup([comm(a, b) for a in G for b in G])
    while len(cur) > 1:
        dims.append(int(math.log2(len(prev) / len(cur))))
        nxt = subgroup([comm(g, w) for g in G for w in cur])
        prev, cur = cur, nxt
    dims.append(int(math.log2(len(prev))))
    return tuple(dims)


# ---------------------------------------------------------------------------
# elementary number theory


def jacobi_by_euler(a, p) -> int:
    """Legendre symbol of a mod an odd prime via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def is_prime_naive(m) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True
