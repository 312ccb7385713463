"""Color fusions: coarsenings of the pair-color partition.

A fusion merges color classes; it can only merge, never split, so every
class count a_k is non-increasing under fusion. The two finders below
locate fusions with guaranteed drops: one merges exactly two colors and
lowers the triangle-type count by at least one (needs a color with a
degree-2 vertex), the other works on spaces where every color class is a
matching and merges one or two disjoint color pairs with the type count
dropping at least as much as the color count.

Both finders try proof-guided candidates first, in a fixed deterministic
scan order, then fall back to exhaustive merge search in lexicographic
order; the first candidate whose recomputed drops satisfy the contract is
returned. Exhausting all candidates without success raises
CounterexampleToContract carrying a full falsification report, because
that outcome would contradict a proven statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import ColoredSpace, m_stats
from .errors import (
    ArityMismatchError,
    CounterexampleToContract,
    PreconditionFailedError,
    SizeMismatchError,
)
from .isometry import a3_set


@dataclass(frozen=True)
class FusionMap:
    """Total surjection from source colors onto a smaller color range.

    Normal form: target colors are numbered by smallest source preimage,
    so chains and serializations are reproducible.
    """

    source_colors: int
    target_colors: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source_colors:
            raise ArityMismatchError(
                f"mapping length {len(self.mapping)} != source {self.source_colors}"
            )
        if self.target_colors > self.source_colors:
            raise ArityMismatchError("fusion cannot increase the color count")
        if set(self.mapping) != set(range(self.target_colors)):
            raise ArityMismatchError("mapping is not onto 0..target_colors-1")

    def serialize(self) -> list[int]:
        return list(self.mapping)

    @staticmethod
    def identity(c: int) -> "FusionMap":
        return FusionMap(c, c, tuple(range(c)))

    @staticmethod
    def merging(c: int, groups) -> "FusionMap":
        """Merge each group of source colors; normal-form numbering."""
        rep = list(range(c))
        for group in groups:
            members = sorted(set(group))
            for m in members[1:]:
                rep[m] = members[0]
        # resolve chains (groups may share members)
        for col in range(c):
            r = col
            while rep[r] != r:
                r = rep[r]
            rep[col] = r
        target = {}
        mapping = []
        for col in range(c):
            r = rep[col]
            if r not in target:
                target[r] = len(target)
            mapping.append(target[r])
        return FusionMap(c, len(target), tuple(mapping))


def apply_fusion(space: ColoredSpace, fmap: FusionMap) -> ColoredSpace:
    if fmap.source_colors != space.color_count:
        raise ArityMismatchError(
            f"map covers {fmap.source_colors} colors, space has {space.color_count}"
        )
    colors = tuple(fmap.mapping[c] for c in space.colors)
    return ColoredSpace(space.n, fmap.target_colors, colors)


def is_fusion_of(coarse: ColoredSpace, fine: ColoredSpace) -> bool:
    """True iff every fine color class lies inside one coarse class."""
    if coarse.n != fine.n:
        raise SizeMismatchError(f"n={coarse.n} vs n={fine.n}")
    image: dict[int, int] = {}
    for cf, cc in zip(fine.colors, coarse.colors):
        if image.setdefault(cf, cc) != cc:
            return False
    return True


@dataclass
class FalsificationReport:
    """Everything needed to replay a failed finder run."""

    finder: str
    space: ColoredSpace
    constraints: dict
    attempted: list[tuple]

    def to_dict(self) -> dict:
        return {
            "finder": self.finder,
            "n": self.space.n,
            "colors": list(self.space.colors),
            "constraints": self.constraints,
            "attempted": [list(map(list, merge)) for merge in self.attempted],
        }


def _a2_a3(space: ColoredSpace) -> tuple[int, int]:
    return space.color_count, len(a3_set(space))


def _try_merges(space, candidates, contract, finder, constraints):
    a2, a3 = _a2_a3(space)
    attempted = []
    seen = set()
    for groups in candidates:
        norm = tuple(sorted(tuple(sorted(g)) for g in groups))
        if norm in seen:
            continue
        seen.add(norm)
        if any(len(set(g)) != len(g) for g in norm):
            continue
        flat = [c for g in norm for c in g]
        if len(set(flat)) != len(flat):
            continue
        attempted.append(norm)
        fmap = FusionMap.merging(space.color_count, norm)
        merged = apply_fusion(space, fmap)
        b2, b3 = _a2_a3(merged)
        if contract(a2 - b2, a3 - b3):
            return fmap
    raise CounterexampleToContract(
        FalsificationReport(finder, space, constraints, attempted)
    )


def find_reducing_fusion(space: ColoredSpace) -> FusionMap:
    """A merge of exactly two colors with the type count dropping.

    Requires at least two colors, some color with a vertex of degree two,
    and at least five points. Contract: the merged space has one color
    fewer and at least one triangle type fewer.
    """
    a2 = space.color_count
    m2 = m_stats(space, 2)[1]
    if a2 < 2:
        raise PreconditionFailedError(f"need a2 >= 2, have {a2}")
    if m2 == 0:
        raise PreconditionFailedError("need a color with a degree-2 vertex")
    if space.n < 5:
        raise PreconditionFailedError(f"need n >= 5, have {space.n}")

    def candidates():
        col = space.color_of
        n = space.n
        for x2 in range(n):
            for x1 in range(n):
                if x1 == x2:
                    continue
                for x3 in range(x1 + 1, n):
                    if x3 == x2 or col(x1, x2) != col(x2, x3):
                        continue
                    alpha = col(x1, x2)
                    all_far_equal = True
                    for x4 in range(n):
                        if x4 in (x1, x2, x3):
                            continue
                        r41, r43 = col(x4, x1), col(x4, x3)
                        if r41 != r43:
                            all_far_equal = False
                            yield [(r41, r43)]
                        elif r41 != alpha:
                            all_far_equal = False
                            yield [(alpha, r41)]
                        elif col(x1, x3) != col(x2, x4):
                            all_far_equal = False
                            yield [(col(x1, x3), col(x2, x4))]
                    if all_far_equal:
                        beta = col(x1, x3)
                        if alpha != beta:
                            yield [(alpha, beta)]
        # exhaustive fallback
        for a, b in combinations(range(space.color_count), 2):
            yield [(a, b)]

    return _try_merges(
        space,
        candidates(),
        lambda d2, d3: d2 == 1 and d3 >= 1,
        "reducing_fusion",
        {"a2": a2, "m2": m2, "n": space.n},
    )


def find_matching_fusion(space: ColoredSpace) -> FusionMap:
    """A merge of one or two disjoint color pairs on all-matching spaces.

    Requires every color class to be a matching and at least five points.
    Contract: the color count drops by at most two and the triangle-type
    count drops by at least as much. The exhaustive fallback also covers
    the complete-rainbow case, where only a simultaneous two-pair merge
    achieves the contract.
    """
    a2 = space.color_count
    m2 = m_stats(space, 2)[1]
    if m2 != 0:
        raise PreconditionFailedError("every color class must be a matching")
    if space.n < 5:
        raise PreconditionFailedError(f"need n >= 5, have {space.n}")

    def candidates():
        col = space.color_of
        n = space.n
        classes: dict[int, list[tuple[int, int]]] = {}
        for (x, y), color in space.pairs():
            classes.setdefault(color, []).append((x, y))
        for alpha in range(space.color_count):
            edges = classes[alpha]
            if len(edges) < 2:
                continue
            for (x1, x2), (y1, y2) in combinations(edges, 2):
                cross = (
                    col(x1, y1),
                    col(x1, y2),
                    col(x2, y1),
                    col(x2, y2),
                )
                distinct = len(set(cross))
                if distinct == 4:
                    yield [(cross[0], cross[3])]
                elif distinct == 3:
                    if cross[0] == cross[3]:
                        yield [(cross[1], cross[2])]
                    elif cross[1] == cross[2]:
                        yield [(cross[0], cross[3])]
                else:
                    for z in range(n):
                        if z in (x1, x2, y1, y2):
                            continue
                        yield [
                            (col(z, x1), col(z, y2)),
                            (col(z, x2), col(z, y1)),
                        ]
        # exhaustive fallback: single merges, then disjoint double merges
        pairs = list(combinations(range(space.color_count), 2))
        for p in pairs:
            yield [p]
        for p, q in combinations(pairs, 2):
            if not set(p) & set(q):
                yield [p, q]

    return _try_merges(
        space,
        candidates(),
        lambda d2, d3: d2 <= 2 and d2 <= d3,
        "matching_fusion",
        {"a2": a2, "m2": m2, "n": space.n},
    )


def fusion_chain(space: ColoredSpace) -> list[tuple[FusionMap, ColoredSpace]]:
    """Apply contract-satisfying fusions until at most two colors remain.

    Chooses the finder by whether any color has a degree-2 vertex. The
    terminal space is checked directly for a2 <= a3; a violation would
    be reported as a falsification, never expected.
    """
    if space.n < 5:
        raise PreconditionFailedError(f"need n >= 5, have {space.n}")
    steps: list[tuple[FusionMap, ColoredSpace]] = []
    current = space
    while current.color_count >= 3:
        if m_stats(current, 2)[1] > 0:
            fmap = find_reducing_fusion(current)
        else:
            fmap = find_matching_fusion(current)
        current = apply_fusion(current, fmap)
        steps.append((fmap, current))
    a2, a3 = _a2_a3(current)
    if a2 > a3:
        raise CounterexampleToContract(
            FalsificationReport(
                "chain_terminus", current, {"a2": a2, "a3": a3}, []
            )
        )
    return steps


def chain_log(space: ColoredSpace, steps) -> list[dict]:
    """JSON-friendly step records: map, class counts, drops per step."""
    out = []
    prev2, prev3 = _a2_a3(space)
    for idx, (fmap, result) in enumerate(steps):
        a2, a3 = _a2_a3(result)
        out.append(
            {
                "step": idx,
                "map": fmap.serialize(),
                "a2": a2,
                "a3": a3,
                "da2": prev2 - a2,
                "da3": prev3 - a3,
            }
        )
        prev2, prev3 = a2, a3
    return out
