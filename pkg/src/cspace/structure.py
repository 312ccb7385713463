"""Closed color sets, structural checkers, and partition-pattern matching.

A color set is closed when any triangle with two sides colored inside the
set has its third side inside it as well; equivalently, the union graph
of the set is a disjoint union of cliques. Both routes are implemented
independently and compared against each other in the verification jobs.

The checkers in this module turn proven structural statements into
executable predicates. Each returns a CheckReport with `applicable`
(did the hypotheses fire) kept separate from `holds` so vacuous truth
stays visible in reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

from .core import ColoredSpace, m_stats
from .errors import EmptyColorSetError, PreconditionFailedError
from .isometry import a3_set


# ---------------------------------------------------------------------------
# closed sets


def is_closed(space: ColoredSpace, color_set) -> bool:
    """Definitional route: no realized triangle type leaks out of the set."""
    cs = _as_colorset(space, color_set)
    for a, b, c in a3_set(space) if space.n >= 3 else ():
        if a in cs and b in cs and c not in cs:
            return False
        if a in cs and c in cs and b not in cs:
            return False
        if b in cs and c in cs and a not in cs:
            return False
    return True


def connected_components(space: ColoredSpace, color_set) -> list[tuple[int, ...]]:
    """Components of the union graph; isolated points are singleton parts."""
    cs = _as_colorset(space, color_set)
    parent = list(range(space.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (x, y), col in space.pairs():
        if col in cs:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    groups: dict[int, list[int]] = {}
    for v in range(space.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(sorted(g)) for g in groups.values())


def is_closed_via_cliques(space: ColoredSpace, color_set) -> bool:
    """Graph route: every component of the union graph is a clique."""
    cs = _as_colorset(space, color_set)
    comps = connected_components(space, cs)
    comp_id = {}
    for idx, comp in enumerate(comps):
        for v in comp:
            comp_id[v] = idx
    edges_in = [0] * len(comps)
    for (x, y), col in space.pairs():
        if col in cs:
            edges_in[comp_id[x]] += 1
    return all(
        edges_in[idx] == comb(len(comp), 2) for idx, comp in enumerate(comps)
    )


def _as_colorset(space: ColoredSpace, color_set) -> frozenset[int]:
    cs = frozenset(color_set)
    if not cs:
        raise EmptyColorSetError("color set must be non-empty")
    return cs


@lru_cache(maxsize=None)
def _subset_masks(c: int) -> tuple[list[int], int]:
    """For each color i, the bitmap over all 2^c subsets containing i."""
    full = (1 << (1 << c)) - 1
    has = []
    for i in range(c):
        bm = 0
        for g in range(1 << c):
            if g >> i & 1:
                bm |= 1 << g
        has.append(bm)
    return has, full


def closed_family_bitmaps(space: ColoredSpace) -> tuple[int, int]:
    """Closed-set indicators over all 2^c color subsets, via both routes.

    Bit g of each returned integer is set when the subset with bitmask g
    is closed. The first route unfolds the definition over realized
    triangle types; the second expresses components-are-cliques as the
    absence of an induced two-edge path, ranging over concrete vertex
    triples. Exhaustive sweeps compare the two words instead of calling
    the per-subset predicates four million times.
    """
    c = space.color_count
    has, full = _subset_masks(c)
    violating_def = 0
    if space.n >= 3:
        for a, b, g in a3_set(space):
            violating_def |= has[a] & has[b] & (full ^ has[g])
            violating_def |= has[a] & has[g] & (full ^ has[b])
            violating_def |= has[b] & has[g] & (full ^ has[a])
    violating_path = 0
    col = space.color_of
    for x in range(space.n):
        for y in range(x + 1, space.n):
            for z in range(y + 1, space.n):
                cxy, cxz, cyz = col(x, y), col(x, z), col(y, z)
                violating_path |= has[cxy] & has[cyz] & (full ^ has[cxz])
                violating_path |= has[cxy] & has[cxz] & (full ^ has[cyz])
                violating_path |= has[cxz] & has[cyz] & (full ^ has[cxy])
    return full ^ violating_def, full ^ violating_path


# ---------------------------------------------------------------------------
# check reports


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one structural check on one space."""

    check_id: str
    applicable: bool
    holds: bool
    witness: dict | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "check": self.check_id,
                "applicable": self.applicable,
                "holds": self.holds,
                "witness": self.witness,
            },
            sort_keys=True,
        )


def check_degree_bound(space: ColoredSpace, k: int) -> CheckReport:
    """If no color graph has a vertex of degree above k, then
    n <= 1 + k*a2, strictly when k is odd and a2 is even."""
    if not (1 <= k < space.n):
        raise PreconditionFailedError(f"k={k} outside 1..{space.n - 1}")
    mk1, count = m_stats(space, k + 1)
    if count:
        return CheckReport("degree_bound", False, True)
    a2 = space.color_count
    bound = 1 + k * a2
    holds = space.n <= bound
    if holds and k % 2 == 1 and a2 % 2 == 0:
        holds = space.n < bound
    return CheckReport(
        "degree_bound", True, holds, {"k": k, "bound": bound, "n": space.n}
    )


def check_m2_collapse(space: ColoredSpace) -> CheckReport:
    """If a2 = a3 = m2 then there are at most two colors."""
    if space.n < 3:
        return CheckReport("m2_collapse", False, True)
    a2 = space.color_count
    a3 = len(a3_set(space))
    m2 = m_stats(space, 2)[1]
    if not (a2 == a3 == m2):
        return CheckReport("m2_collapse", False, True)
    return CheckReport(
        "m2_collapse", True, a2 <= 2, {"a2": a2, "a3": a3, "m2": m2}
    )


def check_unique_type_color(space: ColoredSpace) -> CheckReport:
    """A color appearing in exactly one triangle type forces structure.

    For every tuple (a, b, g, d) of colors where the sorted type (b, g, d)
    is the unique realized type containing d, and a is none of b, g, d:
    either (a, b, g) is realized, or both (a, b, b) and (a, g, g) are.
    With n >= 5 both b and g must have a vertex of degree two.
    """
    if space.n < 3:
        return CheckReport("unique_type_color", False, True)
    types = a3_set(space)
    m2 = m_stats(space, 2)[0]
    fired = False
    for d in range(space.color_count):
        containing = [t for t in types if d in t]
        if len(containing) != 1:
            continue
        rest = list(containing[0])
        rest.remove(d)
        b, g = rest
        for a in range(space.color_count):
            if a in (b, g, d):
                continue
            fired = True
            ok = tuple(sorted((a, b, g))) in types or (
                tuple(sorted((a, b, b))) in types
                and tuple(sorted((a, g, g))) in types
            )
            if ok and space.n >= 5:
                ok = b in m2 and g in m2
            if not ok:
                return CheckReport(
                    "unique_type_color",
                    True,
                    False,
                    {"a": a, "b": b, "g": g, "d": d},
                )
    return CheckReport("unique_type_color", fired, True)


def check_closed_triple(space: ColoredSpace) -> CheckReport:
    """With four colors, a closed 3-subset {a, b, g} forces the types
    (a, d, d), (b, d, d), (g, d, d) where d is the leftover color."""
    if space.color_count != 4 or space.n < 3:
        return CheckReport("closed_triple", False, True)
    types = a3_set(space)
    fired = False
    for triple in combinations(range(4), 3):
        if not is_closed(space, triple):
            continue
        fired = True
        (d,) = set(range(4)) - set(triple)
        for col in triple:
            if tuple(sorted((col, d, d))) not in types:
                return CheckReport(
                    "closed_triple", True, False, {"triple": triple, "d": d, "missing": col}
                )
    return CheckReport("closed_triple", fired, True)


# ---------------------------------------------------------------------------
# triangle-type shape analysis (four-color spaces)

# Shapes are type sets over abstract colors 0..3, with an optional point
# bound that must hold whenever the shape is realized.
_A, _B, _C, _D = 0, 1, 2, 3
SHAPES_NO_MONO = (
    (frozenset({(_A, _A, _B), (_A, _A, _C), (_A, _A, _D), (_B, _C, _D)}), 8),
    (frozenset({(_A, _A, _B), (_A, _A, _C), (_B, _B, _C), (_A, _A, _D)}), 6),
    (frozenset({(_A, _A, _B), (_A, _A, _C), (_B, _B, _C), (_A, _B, _D)}), 6),
)
SHAPES_CLOSED_MONO = (
    (frozenset({(_A, _A, _A), (_A, _B, _C), (_A, _C, _D), (_A, _B, _D)}), 6),
    (frozenset({(_A, _A, _A), (_A, _B, _B), (_A, _C, _C), (_B, _C, _D)}), None),
    (frozenset({(_A, _A, _A), (_A, _B, _B), (_A, _B, _C), (_A, _B, _D)}), None),
)
SHAPES_OPEN_MONO = (
    (frozenset({(_A, _A, _A), (_A, _A, _B), (_A, _A, _C), (_A, _A, _D)}), None),
)


def a3_shape_matches(types: frozenset, shape: frozenset) -> bool:
    """True when some color bijection maps the realized set onto the shape."""
    colors = sorted({c for t in types for c in t})
    symbols = sorted({c for t in shape for c in t})
    if len(colors) != len(symbols) or len(types) != len(shape):
        return False
    for perm in permutations(symbols):
        ren = dict(zip(colors, perm))
        if {tuple(sorted(ren[c] for c in t)) for t in types} == shape:
            return True
    return False


def _check_shapes(space, check_id, shapes, hypothesis) -> CheckReport:
    if space.n < 3 or space.color_count != 4:
        return CheckReport(check_id, False, True)
    types = a3_set(space)
    if len(types) != 4 or not hypothesis(space, types):
        return CheckReport(check_id, False, True)
    for shape, bound in shapes:
        if a3_shape_matches(types, shape):
            ok = bound is None or space.n <= bound
            return CheckReport(
                check_id, True, ok, {"bound": bound, "n": space.n}
            )
    return CheckReport(check_id, True, False, {"types": sorted(types)})


def check_shapes_no_mono(space: ColoredSpace) -> CheckReport:
    """Four equal counts, some color with a degree-3 vertex, and no
    monochromatic triangle: the type set matches one of three shapes,
    with point bounds 8, 6, 6."""

    def hyp(space, types):
        if m_stats(space, 3)[1] == 0:
            return False
        return all(not (t[0] == t[1] == t[2]) for t in types)

    return _check_shapes(space, "shapes_no_mono", SHAPES_NO_MONO, hyp)


def check_shapes_closed_mono(space: ColoredSpace) -> CheckReport:
    """Four equal counts and a monochromatic triangle whose color forms
    a closed singleton: three possible shapes, the first bounded by 6."""

    def hyp(space, types):
        return any(
            t[0] == t[1] == t[2] and is_closed(space, {t[0]}) for t in types
        )

    return _check_shapes(space, "shapes_closed_mono", SHAPES_CLOSED_MONO, hyp)


def check_shapes_open_mono(space: ColoredSpace) -> CheckReport:
    """Four equal counts and a monochromatic triangle whose color is not
    closed: the type set is the monochromatic color doubled with each
    other color."""

    def hyp(space, types):
        return any(
            t[0] == t[1] == t[2] and not is_closed(space, {t[0]}) for t in types
        )

    return _check_shapes(space, "shapes_open_mono", SHAPES_OPEN_MONO, hyp)


def check_a3_bound(space: ColoredSpace) -> bool:
    """1 <= a3 <= C(a2 + 2, 3); vacuous below three points."""
    if space.n < 3:
        return True
    a3 = len(a3_set(space))
    return 1 <= a3 <= comb(space.color_count + 2, 3)


def standard_checks(space: ColoredSpace) -> list[CheckReport]:
    """The full battery run by the verification jobs."""
    out = [check_degree_bound(space, k) for k in range(1, space.n)]
    out.append(check_m2_collapse(space))
    out.append(check_unique_type_color(space))
    out.append(check_closed_triple(space))
    out.append(check_shapes_no_mono(space))
    out.append(check_shapes_closed_mono(space))
    out.append(check_shapes_open_mono(space))
    return out


# ---------------------------------------------------------------------------
# partition patterns


@dataclass(frozen=True)
class MatchingsPlusRemainder:
    """Every color but one is a matching and their union is a matching."""

    matching_colors: frozenset[int]
    remainder_color: int

    def to_dict(self) -> dict:
        return {
            "variant": "matchings_plus_remainder",
            "matching_colors": sorted(self.matching_colors),
            "remainder_color": self.remainder_color,
        }


@dataclass(frozen=True)
class TwoCliquesCrossMatchings:
    """One color is two disjoint cliques covering all points; matching
    colors cross between the cliques; one color takes the leftovers."""

    parts: tuple[tuple[int, ...], tuple[int, ...]]
    clique_color: int
    matching_colors: frozenset[int]
    remainder_color: int

    def to_dict(self) -> dict:
        return {
            "variant": "two_cliques_cross_matchings",
            "parts": [list(self.parts[0]), list(self.parts[1])],
            "clique_color": self.clique_color,
            "matching_colors": sorted(self.matching_colors),
            "remainder_color": self.remainder_color,
        }


@dataclass(frozen=True)
class EdgeApex:
    """A single marked edge, the stars of its two endpoints, and the rest."""

    edge: tuple[int, int]
    delta: int
    gamma: int
    beta: int
    alpha: int

    def to_dict(self) -> dict:
        return {
            "variant": "edge_apex",
            "edge": list(self.edge),
            "delta": self.delta,
            "gamma": self.gamma,
            "beta": self.beta,
            "alpha": self.alpha,
        }


PatternMatch = MatchingsPlusRemainder | TwoCliquesCrossMatchings | EdgeApex


def _color_degrees(space: ColoredSpace) -> list[list[int]]:
    deg = [[0] * space.n for _ in range(space.color_count)]
    for (x, y), col in space.pairs():
        deg[col][x] += 1
        deg[col][y] += 1
    return deg


def classify_patterns(space: ColoredSpace) -> list[PatternMatch]:
    """All partition-pattern instantiations the space realizes.

    Returns every match rather than the first: on small or degenerate
    spaces the patterns can overlap and the verifier wants the full
    picture. Matching colors are single color classes and the remainder
    is a single, present color; zero matching colors are accepted only
    when no other color exists.
    """
    if space.n < 2:
        raise PreconditionFailedError("patterns need at least 2 points")
    matches: list[PatternMatch] = []
    c = space.color_count
    deg = _color_degrees(space)
    is_matching_color = [max(deg[col]) <= 1 for col in range(c)]

    # every color as remainder; the rest must be matchings with matching union
    for rho in range(c):
        rest = [col for col in range(c) if col != rho]
        if rest and not all(is_matching_color[col] for col in rest):
            continue
        union_deg = [0] * space.n
        ok = True
        for (x, y), col in space.pairs():
            if col != rho:
                union_deg[x] += 1
                union_deg[y] += 1
                if union_deg[x] > 1 or union_deg[y] > 1:
                    ok = False
                    break
        if ok:
            matches.append(MatchingsPlusRemainder(frozenset(rest), rho))

    # every color whose graph is exactly two cliques covering the points
    for kappa in range(c):
        comps = connected_components(space, {kappa})
        if len(comps) != 2 or any(len(comp) < 2 for comp in comps):
            continue
        if not is_closed_via_cliques(space, {kappa}):
            # both components complete means the clique color covers
            # every same-side pair, so all other colors cross
            continue
        others = [col for col in range(c) if col != kappa]
        for rho in others:
            rest = [col for col in others if col != rho]
            if rest and not all(is_matching_color[col] for col in rest):
                continue
            union_deg = [0] * space.n
            ok = True
            for (x, y), col in space.pairs():
                if col != kappa and col != rho:
                    union_deg[x] += 1
                    union_deg[y] += 1
                    if union_deg[x] > 1 or union_deg[y] > 1:
                        ok = False
                        break
            if ok:
                matches.append(
                    TwoCliquesCrossMatchings(
                        (comps[0], comps[1]), kappa, frozenset(rest), rho
                    )
                )

    # every singleton color class as the marked edge
    if c == 4 and space.n >= 4:
        class_sizes = [0] * c
        for col in space.colors:
            class_sizes[col] += 1
        for delta in range(c):
            if class_sizes[delta] != 1:
                continue
            (edge,) = [p for p, col in space.pairs() if col == delta]
            y, z = edge
            rest_pts = [u for u in range(space.n) if u not in edge]
            gammas = {space.color_of(y, u) for u in rest_pts}
            betas = {space.color_of(z, u) for u in rest_pts}
            alphas = {
                space.color_of(u, v) for u, v in combinations(rest_pts, 2)
            }
            if len(gammas) == 1 and len(betas) == 1 and len(alphas) == 1:
                gamma, beta, alpha = gammas.pop(), betas.pop(), alphas.pop()
                if len({alpha, beta, gamma, delta}) == 4:
                    matches.append(EdgeApex(edge, delta, gamma, beta, alpha))

    return sorted(matches, key=lambda m: json.dumps(m.to_dict(), sort_keys=True))


def validate_match(space: ColoredSpace, match: PatternMatch) -> bool:
    """Re-validate a pattern witness edge by edge against its invariants."""
    c = space.color_count
    if isinstance(match, MatchingsPlusRemainder):
        if match.remainder_color in match.matching_colors:
            return False
        if set(match.matching_colors) | {match.remainder_color} != set(range(c)):
            return False
        deg = [0] * space.n
        for (x, y), col in space.pairs():
            if col in match.matching_colors:
                deg[x] += 1
                deg[y] += 1
        return all(d <= 1 for d in deg)
    if isinstance(match, TwoCliquesCrossMatchings):
        part_y, part_z = match.parts
        if len(part_y) < 2 or len(part_z) < 2:
            return False
        if sorted(part_y + part_z) != list(range(space.n)):
            return False
        side = {}
        for v in part_y:
            side[v] = 0
        for v in part_z:
            side[v] = 1
        roles = set(match.matching_colors) | {match.clique_color, match.remainder_color}
        if roles != set(range(c)) or match.clique_color in match.matching_colors:
            return False
        if match.remainder_color == match.clique_color:
            return False
        if match.remainder_color in match.matching_colors:
            return False
        deg = [0] * space.n
        for (x, y), col in space.pairs():
            same_side = side[x] == side[y]
            if col == match.clique_color:
                if not same_side:
                    return False
            else:
                if same_side:
                    return False
                if col in match.matching_colors:
                    deg[x] += 1
                    deg[y] += 1
        return all(d <= 1 for d in deg)
    if isinstance(match, EdgeApex):
        if c != 4:
            return False
        y, z = match.edge
        roles = {match.alpha, match.beta, match.gamma, match.delta}
        if len(roles) != 4:
            return False
        for (u, v), col in space.pairs():
            if (u, v) == tuple(sorted((y, z))):
                expect = match.delta
            elif y in (u, v):
                expect = match.gamma
            elif z in (u, v):
                expect = match.beta
            else:
                expect = match.alpha
            if col != expect:
                return False
        return True
    raise TypeError(f"unknown pattern match {match!r}")
