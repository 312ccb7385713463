"""Isometry and isomorphism testing, canonical keys, isometric sequences.

Two point subsets are isometric when a bijection between them preserves
the color of every pair (colors are never renamed). Two spaces are
isomorphic when a point bijection combined with a color bijection maps
one onto the other.

Canonical keys are lexicographically minimal flattened color vectors over
all vertex orderings. The flattening is vertex-incremental: placing the
d-th vertex appends the d-1 colors towards the already-placed vertices.
A prefix of the ordering therefore determines a prefix of the vector,
which makes branch-and-bound pruning sound: an ordering prefix is
abandoned as soon as its partial vector exceeds the incumbent. Vertices
with identical rows (twins) generate automorphisms; only one member of a
twin class is expanded per search node.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .core import ColoredSpace, pair_index, triple_list
from .errors import BadKError, SizeMismatchError, TooSmallError

IsometryKey = bytes
IsomorphismKey = bytes
IsometricSequence = tuple[int, ...]
TriangleType = tuple[int, int, int]
TriangleTypeSet = frozenset[TriangleType]

_TIGHT, _BETTER = 0, 1


def _matrix(colors, n: int) -> list[list[int]]:
    mat = [[-1] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            mat[i][j] = mat[j][i] = colors[k]
            k += 1
    return mat


def _submatrix(space: ColoredSpace, points) -> list[list[int]]:
    pts = list(points)
    k = len(pts)
    mat = [[-1] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            col = space.color_of(pts[a], pts[b])
            mat[a][b] = mat[b][a] = col
    return mat


def _twin_ids(mat: list[list[int]], k: int) -> list[int]:
    """twin_ids[v] groups vertices with identical rows off {v, w}.

    Swapping two twins is an automorphism regardless of what else is
    placed, so one representative per class suffices at a search node.
    """
    ids = [-1] * k
    nid = 0
    for v in range(k):
        if ids[v] >= 0:
            continue
        ids[v] = nid
        rowv = mat[v]
        for w in range(v + 1, k):
            if ids[w] >= 0:
                continue
            roww = mat[w]
            if all(rowv[x] == roww[x] for x in range(k) if x != v and x != w):
                ids[w] = nid
        nid += 1
    return ids


def _min_vector(mat: list[list[int]], k: int, rename: bool) -> list[int]:
    """Lex-min flattened color vector over all vertex orderings.

    With rename=True colors are renamed by first appearance along the
    vector, which makes the result invariant under color bijections.
    """
    if k <= 1:
        return []
    twin = _twin_ids(mat, k)
    ncolors = max(max(row) for row in mat) + 1
    ren = [-1] * ncolors
    order = [0] * k
    placed = [False] * k
    vec: list[int] = []
    best: list[int] | None = None

    def rec(d: int, ren_n: int, state: int) -> bool:
        nonlocal best
        if d == k:
            if best is None or state == _BETTER:
                best = vec.copy()
                return True
            return False
        base = d * (d - 1) // 2
        seen: set[int] = set()
        cands = []
        bb = best
        for v in range(k):
            if placed[v] or twin[v] in seen:
                continue
            seen.add(twin[v])
            row = mat[v]
            block = []
            fresh = []
            rn = ren_n
            # compare against the incumbent while building; a prefix that
            # exceeds it can never start a minimal completion
            compare = state == _TIGHT and bb is not None
            cmp_res = 0
            for i in range(d):
                c = row[order[i]]
                if rename:
                    t = ren[c]
                    if t < 0:
                        ren[c] = t = rn
                        fresh.append(c)
                        rn += 1
                else:
                    t = c
                if compare and cmp_res == 0:
                    bv = bb[base + i]
                    if t > bv:
                        cmp_res = 1
                        break
                    if t < bv:
                        cmp_res = -1
                block.append(t)
            for c in fresh:
                ren[c] = -1
            if cmp_res != 1:
                cands.append((block, v, cmp_res))
        cands.sort(key=lambda e: e[0])
        updated = False
        for block, v, cmp_res in cands:
            if updated:
                # incumbent changed inside this node; our prefix now ties
                # it, so re-evaluate the candidate against the new best
                seg = best[base : base + d]
                if block > seg:
                    break
                st = _BETTER if block < seg else _TIGHT
            elif state == _TIGHT:
                st = _BETTER if cmp_res < 0 else _TIGHT
            else:
                st = _BETTER
            placed[v] = True
            order[d] = v
            fresh = []
            rn = ren_n
            if rename:
                for i in range(d):
                    c = mat[v][order[i]]
                    if ren[c] < 0:
                        ren[c] = rn
                        fresh.append(c)
                        rn += 1
            vec.extend(block)
            if rec(d + 1, rn, st):
                updated = True
            if d:
                del vec[-d:]
            for c in fresh:
                ren[c] = -1
            placed[v] = False
        return updated

    rec(0, 0, _TIGHT)
    assert best is not None
    return best


def canonical_key_of_colors(colors, n: int) -> IsomorphismKey:
    """Isomorphism key computed straight from a flat color sequence."""
    if n <= 1:
        return b""
    return bytes(_min_vector(_matrix(colors, n), n, rename=True))


def isomorphism_key(space: ColoredSpace) -> IsomorphismKey:
    """Canonical certificate: equal keys iff the spaces are isomorphic."""
    return canonical_key_of_colors(space.colors, space.n)


def isomorphic(s1: ColoredSpace, s2: ColoredSpace) -> bool:
    if s1.n != s2.n or s1.color_count != s2.color_count:
        return False
    return isomorphism_key(s1) == isomorphism_key(s2)


def isometry_key(space: ColoredSpace, points) -> IsometryKey:
    """Canonical certificate of a subset's class: colors stay fixed."""
    pts = tuple(points)
    if len(pts) < 1:
        raise TooSmallError("isometry key needs at least one point")
    if len(pts) == 1:
        return b""
    return bytes(_min_vector(_submatrix(space, pts), len(pts), rename=False))


def isometric(space: ColoredSpace, ys, zs) -> bool:
    """Exhaustive bijection search; the oracle the keys are checked against."""
    Y = tuple(ys)
    Z = tuple(zs)
    if len(Y) != len(Z):
        raise SizeMismatchError(f"|Y|={len(Y)} vs |Z|={len(Z)}")
    if len(Y) <= 1:
        return True
    k = len(Y)
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    for perm in permutations(Z):
        for a, b in pairs:
            if space.color_of(Y[a], Y[b]) != space.color_of(perm[a], perm[b]):
                break
        else:
            return True
    return False


def a_k(space: ColoredSpace, k: int) -> tuple[int, list[tuple[int, ...]]]:
    """Number of k-point classes plus the lex-least subset of each class."""
    if not (1 <= k <= space.n):
        raise BadKError(k, space.n)
    reps: dict[bytes, tuple[int, ...]] = {}
    for subset in combinations(range(space.n), k):
        key = isometry_key(space, subset)
        if key not in reps:
            reps[key] = subset
    return len(reps), sorted(reps.values())


def isometric_sequence(space: ColoredSpace) -> IsometricSequence:
    return tuple(a_k(space, k)[0] for k in range(1, space.n + 1))


def a3_set(space: ColoredSpace) -> TriangleTypeSet:
    """All triangle types (sorted color triples) realized in the space.

    Fast path: sorting the three colors is exactly the lex-min key of a
    3-subset, so this agrees with the generic isometry_key route.
    """
    if space.n < 3:
        raise TooSmallError("triangle types need at least 3 points")
    colors = space.colors
    out = set()
    for i, j, k in triple_list(space.n):
        a, b, c = colors[i], colors[j], colors[k]
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
        if a > b:
            a, b = b, a
        out.add((a, b, c))
    return frozenset(out)


def a3_count_of_colors(colors, n: int) -> int:
    """Triangle-type count straight from a flat color sequence."""
    out = set()
    for i, j, k in triple_list(n):
        a, b, c = colors[i], colors[j], colors[k]
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
        if a > b:
            a, b = b, a
        out.add(a << 16 | b << 8 | c)
    return len(out)


def is_unimodal(seq) -> bool:
    """True when the sequence rises (weakly) then falls (weakly)."""
    vals = list(seq)
    i = 0
    while i + 1 < len(vals) and vals[i] <= vals[i + 1]:
        i += 1
    while i + 1 < len(vals) and vals[i] >= vals[i + 1]:
        i += 1
    return i == len(vals) - 1


def pair_color(space: ColoredSpace, x: int, y: int) -> int:
    return space.colors[pair_index(space.n, x, y)]
