"""Data model for finite colored spaces.

A colored space is a set of n points (labelled 0..n-1) together with a
total coloring of all C(n,2) unordered point pairs. Colors are contiguous
integers 0..c-1 and every color occurs on at least one pair, so the number
of 2-point classes always equals the color count.

Pairs are traversed in a fixed row-major order throughout the package:
(0,1), (0,2), ..., (0,n-1), (1,2), ... All "first occurrence" rules refer
to this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    ColorOutOfRangeError,
    DuplicatePairError,
    EmptyColorSetError,
    MissingPairError,
    BadKError,
    SamePointError,
    TooLargeError,
    TooSmallError,
    UnusedColorError,
)

# Points are dense small integers so pair indices fit comfortably in
# machine words; 16 keeps C(n,2) <= 120 (one byte per color in keys).
MAX_POINTS = 16

Color = int
ColorSet = frozenset[int]
Pair = tuple[int, int]


def pair_index(n: int, x: int, y: int) -> int:
    """Index of the unordered pair {x, y} in the fixed row-major order."""
    if x == y:
        raise SamePointError(x)
    if x > y:
        x, y = y, x
    return x * (2 * n - x - 1) // 2 + (y - x - 1)


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[Pair, ...]:
    """All pairs (i, j) with i < j in fixed traversal order."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def triple_list(n: int) -> tuple[tuple[int, int, int], ...]:
    """For each 3-subset x<y<z the pair indices of (xy, xz, yz)."""
    out = []
    for x in range(n):
        for y in range(x + 1, n):
            for z in range(y + 1, n):
                out.append(
                    (pair_index(n, x, y), pair_index(n, x, z), pair_index(n, y, z))
                )
    return tuple(out)


@dataclass(frozen=True)
class ColoredSpace:
    """n points with a total pair coloring; immutable value object.

    colors[k] is the color of the k-th pair in fixed traversal order.
    """

    n: int
    color_count: int
    colors: tuple[int, ...]

    def color_of(self, x: int, y: int) -> int:
        return self.colors[pair_index(self.n, x, y)]

    def pairs(self):
        """Yield ((x, y), color) in fixed traversal order."""
        return zip(pair_list(self.n), self.colors)

    def __repr__(self):
        return f"ColoredSpace(n={self.n}, c={self.color_count})"


def _make_space(n: int, color_count: int, colors: tuple[int, ...]) -> ColoredSpace:
    """Trusted constructor: caller guarantees contiguity and surjectivity."""
    return ColoredSpace(n, color_count, colors)


def new_space(n: int, c: int, assignments) -> ColoredSpace:
    """Build and validate a colored space from explicit pair assignments.

    assignments: iterable of ((x, y), color). Every pair must be assigned
    exactly once and every color 0..c-1 must occur.
    """
    if n < 1:
        raise TooSmallError(f"need at least one point, got n={n}")
    if n > MAX_POINTS:
        raise TooLargeError(f"n={n} exceeds the supported maximum {MAX_POINTS}")
    npairs = n * (n - 1) // 2
    if npairs == 0:
        if c != 0:
            raise UnusedColorError(0)
        return ColoredSpace(n, 0, ())
    if c < 1:
        raise UnusedColorError(0)
    slots: list[int | None] = [None] * npairs
    for (x, y), color in assignments:
        if x == y:
            raise SamePointError(x)
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"point out of range in pair ({x}, {y})")
        k = pair_index(n, x, y)
        if slots[k] is not None:
            raise DuplicatePairError((min(x, y), max(x, y)))
        if not (0 <= color < c):
            raise ColorOutOfRangeError(color, c, pair=(min(x, y), max(x, y)))
        slots[k] = color
    for k, v in enumerate(slots):
        if v is None:
            raise MissingPairError(pair_list(n)[k])
    used = set(slots)
    for color in range(c):
        if color not in used:
            raise UnusedColorError(color)
    return ColoredSpace(n, c, tuple(slots))  # type: ignore[arg-type]


def space_from_colors(n: int, colors) -> ColoredSpace:
    """Build a space from a flat color sequence in fixed pair order.

    Colors need not be contiguous; they are renamed by first occurrence.
    """
    colors = list(colors)
    if len(colors) != n * (n - 1) // 2:
        raise MissingPairError(pair_list(n)[len(colors)] if colors else (0, 1))
    rename: dict[int, int] = {}
    out = []
    for v in colors:
        if v not in rename:
            rename[v] = len(rename)
        out.append(rename[v])
    return ColoredSpace(n, len(rename), tuple(out))


def color_of(space: ColoredSpace, x: int, y: int) -> int:
    """Color of the unordered pair {x, y}; symmetric in its arguments."""
    return space.colors[pair_index(space.n, x, y)]


@dataclass(frozen=True)
class SubspaceView:
    """An induced subspace plus the color renormalization that built it.

    renorm maps parent colors present inside the point subset to the
    contiguous colors of the induced space, in first-occurrence order
    under the sorted-pair traversal of the subset.
    """

    parent: ColoredSpace
    points: tuple[int, ...]
    renorm: dict[int, int]
    space: ColoredSpace


def induced_subspace(space: ColoredSpace, points) -> SubspaceView:
    pts = tuple(sorted(set(points)))
    if len(pts) < 2:
        raise TooSmallError(f"subspace needs at least 2 points, got {len(pts)}")
    renorm: dict[int, int] = {}
    colors = []
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            col = space.color_of(pts[a], pts[b])
            if col not in renorm:
                renorm[col] = len(renorm)
            colors.append(renorm[col])
    sub = ColoredSpace(len(pts), len(renorm), tuple(colors))
    return SubspaceView(space, pts, renorm, sub)


@dataclass(frozen=True)
class ColorGraph:
    """The simple graph formed by the union of one or more color classes."""

    owner: ColoredSpace
    color_set: ColorSet
    edges: frozenset[Pair]


def color_graph(space: ColoredSpace, color_set) -> ColorGraph:
    cs = frozenset(color_set)
    _check_colors(space, cs)
    edges = frozenset(p for p, col in space.pairs() if col in cs)
    return ColorGraph(space, cs, edges)


def degree(space: ColoredSpace, color: int, x: int) -> int:
    """Number of neighbours of x inside the single color class."""
    return sum(1 for y in range(space.n) if y != x and space.color_of(x, y) == color)


def _max_degrees(space: ColoredSpace) -> list[int]:
    """Per color, the maximum vertex degree of its class graph."""
    deg = [[0] * space.n for _ in range(space.color_count)]
    for (x, y), col in space.pairs():
        deg[col][x] += 1
        deg[col][y] += 1
    return [max(row) for row in deg] if space.color_count else []


def m_stats(space: ColoredSpace, k: int) -> tuple[ColorSet, int]:
    """Colors whose class graph has a vertex of degree >= k, with count."""
    if not (1 <= k <= space.n):
        raise BadKError(k, space.n)
    maxdeg = _max_degrees(space)
    members = frozenset(c for c, d in enumerate(maxdeg) if d >= k)
    return members, len(members)


def is_matching(space: ColoredSpace, color_set) -> bool:
    """True iff the union graph of the given colors has max degree <= 1."""
    cs = frozenset(color_set)
    _check_colors(space, cs)
    deg = [0] * space.n
    for (x, y), col in space.pairs():
        if col in cs:
            deg[x] += 1
            deg[y] += 1
            if deg[x] > 1 or deg[y] > 1:
                return False
    return True


def _check_colors(space: ColoredSpace, cs: frozenset) -> None:
    if not cs:
        raise EmptyColorSetError("color set must be non-empty")
    for col in cs:
        if not (0 <= col < space.color_count):
            raise ColorOutOfRangeError(col, space.color_count)
