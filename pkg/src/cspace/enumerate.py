"""Isomorph-free generation of colored spaces under hereditary constraints.

The engine grows spaces one point at a time starting from the unique
2-point space. Extending a k-point space assigns colors to the k new
pairs by depth-first search; a genuinely new color may only enter as the
next unused index (first-use ascending along the assignment order), which
kills pure renaming duplicates before keying. Partial assignments are
pruned as soon as the realized triangle-type set exceeds the cap, valid
because classes of an induced subspace inject into the parent's classes.
Each level is deduplicated through a canonical store keyed by the
isomorphism key; results are independent of insertion order and of the
worker count.

The all-colorings streamer below is the ground-truth oracle route: every
set partition of the pair slots, no isomorphism reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import get_context

from .core import ColoredSpace, pair_index, triple_list
from .errors import (
    BadArityError,
    BudgetExceededError,
    PreconditionFailedError,
    TooLargeError,
)
from .isometry import canonical_key_of_colors

# Bell(15) is ~1.38e9: the n=6 full stream is an opt-in slow job, anything
# beyond that is out of reach for a stream of Python objects.
MAX_FULL_STREAM_POINTS = 6


@lru_cache(maxsize=None)
def bell_number(m: int) -> int:
    """Number of set partitions of m slots (Bell triangle)."""
    if m < 0:
        raise ValueError("negative size")
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def restricted_growth_strings(m: int, prefix: tuple[int, ...] = ()):
    """Yield all restricted growth strings of length m extending prefix.

    RGS encode set partitions: a[0] = 0 and a[i] <= 1 + max(a[:i]).
    """
    a = list(prefix) + [0] * (m - len(prefix))
    mx = max(prefix, default=-1)

    def rec(i: int, mx: int):
        if i == m:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, mx if v <= mx else v)

    if len(prefix) > m:
        return
    yield from rec(len(prefix), mx)


def rgs_prefixes(m: int, depth: int) -> list[tuple[int, ...]]:
    """All valid RGS prefixes of the given depth; shards for parallel runs."""
    depth = min(depth, m)
    return [p for p in restricted_growth_strings(depth)]


def iter_all_colorings(n: int, prefix: tuple[int, ...] = ()):
    """Stream every coloring of the n-point pair slots as a ColoredSpace."""
    m = n * (n - 1) // 2
    for colors in restricted_growth_strings(m, prefix):
        yield ColoredSpace(n, max(colors) + 1, colors)


def enumerate_all_colorings(n: int, sink=None) -> int:
    """Ground-truth stream: one space per set partition of the pair slots."""
    if n < 2:
        raise PreconditionFailedError(f"need n >= 2, have {n}")
    if n > MAX_FULL_STREAM_POINTS:
        raise TooLargeError(
            f"full stream capped at n = {MAX_FULL_STREAM_POINTS}"
            f" (Bell({n * (n - 1) // 2}) colorings)"
        )
    count = 0
    for space in iter_all_colorings(n):
        count += 1
        if sink is not None:
            sink(space)
    return count


def _no_monochromatic_triangle(space: ColoredSpace) -> bool:
    colors = space.colors
    for i, j, k in triple_list(space.n):
        if colors[i] == colors[j] == colors[k]:
            return False
    return True


# Every registered predicate must be hereditary: true on a space implies
# true on each induced subspace, otherwise level pruning is unsound.
HEREDITARY_PREDICATES = {
    "no_monochromatic_triangle": _no_monochromatic_triangle,
}


@dataclass(frozen=True)
class EnumerationConstraints:
    n_target: int
    max_colors: int | None = None
    max_a3: int | None = None
    extra_predicate: str | None = None

    def __post_init__(self):
        if self.n_target < 2:
            raise PreconditionFailedError("n_target must be at least 2")
        if self.max_colors is not None and self.max_colors < 1:
            raise PreconditionFailedError("max_colors must be positive")
        if self.max_a3 is not None and self.max_a3 < 1:
            raise PreconditionFailedError("max_a3 must be positive")
        if (
            self.extra_predicate is not None
            and self.extra_predicate not in HEREDITARY_PREDICATES
        ):
            raise PreconditionFailedError(
                f"unknown predicate {self.extra_predicate!r}"
            )


class CanonicalStore:
    """Set of canonical keys with hit counts and a deterministic payload.

    Keeps the minimum color tuple seen per key, so the final contents do
    not depend on insertion order or on how work was split.
    """

    def __init__(self):
        self._data: dict[bytes, tuple[tuple[int, ...], int]] = {}

    def add(self, key: bytes, colors: tuple[int, ...]) -> bool:
        cur = self._data.get(key)
        if cur is None:
            self._data[key] = (colors, 1)
            return True
        best, count = cur
        self._data[key] = (min(best, colors), count + 1)
        return False

    def merge(self, other: "CanonicalStore") -> None:
        for key, (colors, count) in other._data.items():
            cur = self._data.get(key)
            if cur is None:
                self._data[key] = (colors, count)
            else:
                self._data[key] = (min(cur[0], colors), cur[1] + count)

    def sorted_items(self) -> list[tuple[bytes, tuple[int, ...], int]]:
        return [
            (key, colors, count)
            for key, (colors, count) in sorted(self._data.items())
        ]

    def __len__(self):
        return len(self._data)


def _automorphisms(mat: list[list[int]], k: int, cap: int) -> list[tuple[int, ...]]:
    """Color-preserving vertex permutations, at most cap of them.

    A truncated list is fine: extension deduplication below stays sound
    for any subset containing the identity, larger subsets just skip more
    duplicate work.
    """
    auts: list[tuple[int, ...]] = []
    img = [-1] * k
    used = [False] * k

    def rec(d: int):
        if len(auts) >= cap:
            return
        if d == k:
            auts.append(tuple(img))
            return
        rowd = mat[d]
        for w in range(k):
            if used[w]:
                continue
            roww = mat[w]
            if all(rowd[i] == roww[img[i]] for i in range(d)):
                img[d] = w
                used[w] = True
                rec(d + 1)
                used[w] = False

    rec(0)
    return auts


def _orbit_minimal(new: tuple[int, ...], auts, c_parent: int, k: int) -> bool:
    """True when no parent automorphism produces a smaller extension.

    Permuting an extension vector by a parent automorphism (with fresh
    colors renamed back to first-use order) yields an isomorphic child,
    so only the orbit minimum needs canonical keying.
    """
    for sigma in auts:
        rename: dict[int, int] = {}
        nxt = c_parent
        smaller = False
        for i in range(k):
            v = new[sigma[i]]
            if v >= c_parent:
                t = rename.get(v)
                if t is None:
                    rename[v] = t = nxt
                    nxt += 1
                v = t
            if v != new[i]:
                smaller = v < new[i]
                break
        if smaller:
            return False
    return True


@lru_cache(maxsize=None)
def _child_layout(k: int):
    """Positions of parent pairs and new pairs inside the child tuple."""
    n = k + 1
    parent_pos = []
    new_pos = [0] * k
    for i in range(n):
        for j in range(i + 1, n):
            if j < k:
                parent_pos.append((pair_index(n, i, j), pair_index(k, i, j)))
            else:
                new_pos[i] = pair_index(n, i, j)
    return tuple(parent_pos), tuple(new_pos)


def _extend_parent(parent: tuple[int, ...], k: int, cons: EnumerationConstraints,
                   counter: list[int], budget: int | None):
    """DFS over colorings of the k new pairs; yields complete child tuples."""
    c_parent = max(parent) + 1 if parent else 1
    mat = [[0] * k for _ in range(k)]
    pos = 0
    for i in range(k):
        for j in range(i + 1, k):
            mat[i][j] = mat[j][i] = parent[pos]
            pos += 1
    parent_types = set()
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                a, b, c = mat[i][j], mat[i][l], mat[j][l]
                if a > b:
                    a, b = b, a
                if b > c:
                    b, c = c, b
                if a > b:
                    a, b = b, a
                parent_types.add((a, b, c))
    max_a3 = cons.max_a3
    max_colors = cons.max_colors
    new_cols = [0] * k
    types = set(parent_types)

    def rec(j: int, used: int):
        counter[0] += 1
        if budget is not None and counter[0] > budget:
            raise BudgetExceededError(
                f"node budget {budget} exhausted", frontier=None
            )
        if j == k:
            yield tuple(new_cols)
            return
        top = used if (max_colors is not None and used >= max_colors) else used + 1
        for color in range(top):
            new_cols[j] = color
            added = []
            ok = True
            if max_a3 is not None:
                for jp in range(j):
                    a, b, c = mat[jp][j], new_cols[jp], color
                    if a > b:
                        a, b = b, a
                    if b > c:
                        b, c = c, b
                    if a > b:
                        a, b = b, a
                    t = (a, b, c)
                    if t not in types:
                        types.add(t)
                        added.append(t)
                        if len(types) > max_a3:
                            ok = False
                            break
            if ok:
                yield from rec(j + 1, used + 1 if color == used else used)
            for t in added:
                types.discard(t)

    auts = _automorphisms(mat, k, cap=48)[1:]  # drop the identity
    parent_pos, new_pos = _child_layout(k)
    for new in rec(0, c_parent):
        if auts and not _orbit_minimal(new, auts, c_parent, k):
            continue
        child = [0] * ((k + 1) * k // 2)
        for cpos, ppos in parent_pos:
            child[cpos] = parent[ppos]
        for i in range(k):
            child[new_pos[i]] = new[i]
        yield tuple(child)


def _extend_chunk(args):
    """Worker: extend a chunk of parent representatives, dedup locally."""
    k, parents, cons, budget = args
    counter = [0]
    store = CanonicalStore()
    predicate = (
        HEREDITARY_PREDICATES[cons.extra_predicate]
        if cons.extra_predicate
        else None
    )
    for parent in parents:
        for child in _extend_parent(parent, k, cons, counter, budget):
            if predicate is not None and not predicate(
                ColoredSpace(k + 1, max(child) + 1, child)
            ):
                continue
            store.add(canonical_key_of_colors(child, k + 1), child)
    return store, counter[0]


def enumerate_spaces(
    constraints: EnumerationConstraints,
    sink=None,
    *,
    jobs: int = 1,
    budget_nodes: int | None = None,
    resume: tuple[int, list[tuple[int, ...]]] | None = None,
) -> int:
    """Emit one representative per isomorphism class at the target size.

    Level-by-level augmentation with per-level canonical deduplication.
    Output order is normalized by sorting on canonical keys, so runs with
    different worker counts emit byte-identical streams. A node budget
    raises BudgetExceededError whose frontier holds the last completed
    level for resumption.
    """
    cons = constraints
    level, reps = 2, [(0,)]
    if resume is not None:
        level, reps = resume
        reps = list(reps)
    if cons.max_colors is not None and cons.max_colors < 1:
        raise PreconditionFailedError("max_colors must be positive")
    predicate = (
        HEREDITARY_PREDICATES[cons.extra_predicate] if cons.extra_predicate else None
    )
    if level == 2 and predicate is not None:
        reps = [
            colors
            for colors in reps
            if predicate(ColoredSpace(2, 1, colors))
        ]
    spent = 0
    while level < cons.n_target:
        k = level
        remaining = None if budget_nodes is None else budget_nodes - spent
        try:
            if jobs > 1 and len(reps) > 1:
                chunks = [reps[i::jobs] for i in range(jobs)]
                per_chunk = None if remaining is None else remaining // jobs
                with get_context("fork").Pool(jobs) as pool:
                    results = pool.map(
                        _extend_chunk,
                        [(k, chunk, cons, per_chunk) for chunk in chunks if chunk],
                    )
                store = CanonicalStore()
                nodes = 0
                for part, used in results:
                    store.merge(part)
                    nodes += used
            else:
                store, nodes = _extend_chunk((k, reps, cons, remaining))
        except BudgetExceededError as exc:
            raise BudgetExceededError(
                f"node budget {budget_nodes} exhausted at level {k + 1}",
                frontier=(k, reps),
            ) from exc
        spent += nodes
        reps = [colors for _, colors, _ in store.sorted_items()]
        level += 1
    if sink is not None:
        for colors in reps:
            sink(ColoredSpace(cons.n_target, max(colors) + 1, colors))
    return len(reps)


def random_colors(rng: random.Random, n: int, c: int) -> tuple[int, ...]:
    """Uniform color per pair, then the smallest deterministic set of
    reassignments restoring surjectivity: ascending missing colors each
    claim the first pair whose color still has multiplicity two."""
    npairs = n * (n - 1) // 2
    if not (1 <= c <= npairs):
        raise BadArityError(f"c={c} outside 1..{npairs}")
    colors = rng.choices(range(c), k=npairs)
    counts = [0] * c
    for col in colors:
        counts[col] += 1
    for missing in range(c):
        if counts[missing]:
            continue
        for pos, col in enumerate(colors):
            if counts[col] >= 2:
                counts[col] -= 1
                colors[pos] = missing
                counts[missing] += 1
                break
    return tuple(colors)


def random_space(n: int, c: int, seed: int) -> ColoredSpace:
    """Seed-deterministic space: same seed, same space."""
    return ColoredSpace(n, c, random_colors(random.Random(seed), n, c))
