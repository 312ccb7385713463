"""Constructors for the named reference configurations.

Each constructor returns a validated ColoredSpace with a documented,
deterministic choice wherever the informal description leaves freedom
(which perfect matching, which pairing of matchings across the two
sides). Color roles follow a fixed numbering so tests can name them.
"""

from __future__ import annotations

from .core import ColoredSpace, new_space, pair_list
from .errors import PreconditionFailedError, SpaceError


class NotAMatchingError(SpaceError):
    """A provided edge set is not a matching."""


class OverlapError(SpaceError):
    """Provided edge sets overlap or collide with a fixed role."""


OCTA_SIDE, OCTA_ANTIPODAL = 0, 1
HEX_SIDE, HEX_SHORT, HEX_LONG = 0, 1, 2


def octahedron() -> ColoredSpace:
    """Six points, two colors: 12 side pairs and 3 antipodal pairs.

    Antipodal partners are i and i+3, forming a perfect matching.
    """
    n = 6
    assignments = []
    for i, j in pair_list(n):
        color = OCTA_ANTIPODAL if j - i == 3 else OCTA_SIDE
        assignments.append(((i, j), color))
    return new_space(n, 2, assignments)


def hexagon() -> ColoredSpace:
    """Six points on a cycle: sides, short diagonals, long diagonals."""
    n = 6
    assignments = []
    for i, j in pair_list(n):
        d = min(j - i, 6 - (j - i))
        assignments.append(((i, j), {1: HEX_SIDE, 2: HEX_SHORT, 3: HEX_LONG}[d]))
    return new_space(n, 3, assignments)


def monochromatic(n: int) -> ColoredSpace:
    """Every pair the same color; the isometric sequence is all ones."""
    if n < 2:
        raise PreconditionFailedError("monochromatic needs n >= 2")
    return new_space(n, 1, [((i, j), 0) for i, j in pair_list(n)])


def rainbow(n: int) -> ColoredSpace:
    """Every pair its own color; a_k = C(n,k) for 2 <= k <= n-1."""
    if n < 2:
        raise PreconditionFailedError("rainbow needs n >= 2")
    return new_space(
        n, n * (n - 1) // 2, [(p, k) for k, p in enumerate(pair_list(n))]
    )


# Roles for the four witness configurations below.
ALPHA, BETA, GAMMA, DELTA = 0, 1, 2, 3

# The three perfect matchings of a 4-clique {a, a+1, a+2, a+3}, as offsets.
_K4_MATCHINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def witness_cross_matchings() -> ColoredSpace:
    """8 points split 4+4; all cross pairs share one color, the pairs
    inside each side split into three perfect matchings.

    Realizes the triangle-type set {aab, aac, aad, bcd} on X and on large
    subsets; the deterministic matching choice pairs the i-th matching of
    {0..3} with the i-th matching of {4..7}.
    """
    n = 8
    colors = {}
    for side in (0, 4):
        for m, matching in enumerate(_K4_MATCHINGS):
            for a, b in matching:
                colors[(side + a, side + b)] = BETA + m
    assignments = []
    for i, j in pair_list(n):
        assignments.append(((i, j), colors.get((i, j), ALPHA)))
    return new_space(n, 4, assignments)


def witness_quad_edge() -> ColoredSpace:
    """6 points split 4+2; cross pairs one color, a perfect matching on
    the quad, the rest of the quad, and the single far edge.

    Realizes {aab, aac, bbc, aad}. The quad matching is {01, 23}.
    """
    n = 6
    quad_matching = {(0, 1), (2, 3)}
    assignments = []
    for i, j in pair_list(n):
        if i < 4 and j >= 4:
            color = ALPHA
        elif j < 4:
            color = GAMMA if (i, j) in quad_matching else BETA
        else:
            color = DELTA
        assignments.append(((i, j), color))
    return new_space(n, 4, assignments)


def witness_marked_edge() -> ColoredSpace:
    """6 points split 3+3 with one marked cross edge {0, 3}.

    The marked edge is its own color; other cross pairs share a color;
    pairs avoiding both marked endpoints inside a side share a color;
    the remaining pairs (side pairs at a marked endpoint) share a color.
    Realizes {aab, aac, bbc, abd}.
    """
    n = 6
    y0, z0 = 0, 3
    assignments = []
    for i, j in pair_list(n):
        cross = (i < 3) != (j < 3)
        if cross:
            color = DELTA if (i, j) == (y0, z0) else ALPHA
        elif y0 in (i, j) or z0 in (i, j):
            color = BETA
        else:
            color = GAMMA
        assignments.append(((i, j), color))
    return new_space(n, 4, assignments)


def witness_twin_triangles() -> ColoredSpace:
    """6 points split 3+3; both sides are monochromatic triangles and the
    nine cross pairs split into three perfect matchings (offsets 0,1,2).

    Realizes {aaa, abc, acd, adb}.
    """
    n = 6
    assignments = []
    for i, j in pair_list(n):
        if (i < 3) == (j < 3):
            color = ALPHA
        else:
            offset = (j - 3 - i) % 3
            color = BETA + offset
        assignments.append(((i, j), color))
    return new_space(n, 4, assignments)


def _validate_matchings(n: int, matchings) -> list[set[tuple[int, int]]]:
    norm: list[set[tuple[int, int]]] = []
    seen_vertices: set[int] = set()
    seen_edges: set[tuple[int, int]] = set()
    for edges in matchings:
        cur = set()
        verts: set[int] = set()
        for x, y in edges:
            if x == y or not (0 <= x < n and 0 <= y < n):
                raise NotAMatchingError(f"bad edge ({x}, {y})")
            e = (min(x, y), max(x, y))
            if e in seen_edges:
                raise OverlapError(f"edge {e} used twice")
            if x in verts or y in verts:
                raise NotAMatchingError(f"edge {e} shares a vertex inside its matching")
            if x in seen_vertices or y in seen_vertices:
                raise NotAMatchingError(f"edge {e} breaks the union-is-a-matching rule")
            cur.add(e)
            verts.update(e)
            seen_edges.add(e)
        seen_vertices.update(verts)
        norm.append(cur)
    return norm


def family_matchings(n: int, matchings) -> ColoredSpace:
    """Disjoint matchings, one color each, plus one remainder color.

    The matchings must be pairwise vertex-disjoint (their union is again
    a matching). Matching i gets color i; the remainder gets the last.
    """
    norm = _validate_matchings(n, matchings)
    edge_color = {}
    for m, edges in enumerate(norm):
        for e in edges:
            edge_color[e] = m
    k = len(norm)
    remainder = [p for p in pair_list(n) if p not in edge_color]
    c = k + (1 if remainder else 0)
    assignments = [(p, edge_color.get(p, k)) for p in pair_list(n)]
    return new_space(n, c, assignments)


def family_two_cliques(sizes: tuple[int, int], matchings) -> ColoredSpace:
    """Two cliques of one color, cross matchings, and a cross remainder.

    Points 0..p-1 form one clique, p..p+q-1 the other. Each matching must
    consist of cross pairs only; the clique color is 0, matchings get
    1..k, remaining cross pairs get k+1.
    """
    p, q = sizes
    if p < 2 or q < 2:
        raise PreconditionFailedError("both cliques need at least 2 points")
    n = p + q
    norm = _validate_matchings(n, matchings)
    edge_color = {}
    for m, edges in enumerate(norm):
        for x, y in edges:
            if (x < p) == (y < p):
                raise OverlapError(f"matching edge ({x}, {y}) does not cross the cliques")
            edge_color[(x, y)] = 1 + m
    k = len(norm)
    assignments = []
    saw_remainder = False
    for i, j in pair_list(n):
        if (i < p) == (j < p):
            color = 0
        elif (i, j) in edge_color:
            color = edge_color[(i, j)]
        else:
            color = 1 + k
            saw_remainder = True
        assignments.append(((i, j), color))
    return new_space(n, 1 + k + (1 if saw_remainder else 0), assignments)


def family_edge_apex(n: int) -> ColoredSpace:
    """One marked edge {0,1}; edges from 0, edges from 1, and the rest.

    Four colors: the pairs inside X minus the marked edge get 0, edges
    from point 1 get 1, edges from point 0 get 2, the marked edge gets 3.
    Has a_2 = a_3 = 4 for every n >= 5.
    """
    if n < 4:
        raise PreconditionFailedError("edge apex needs n >= 4")
    assignments = []
    for i, j in pair_list(n):
        if (i, j) == (0, 1):
            color = 3
        elif i == 0:
            color = 2
        elif i == 1:
            color = 1
        else:
            color = 0
        assignments.append(((i, j), color))
    return new_space(n, 4, assignments)
