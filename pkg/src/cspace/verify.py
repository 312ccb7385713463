"""Batch verification jobs producing machine-readable reports.

Each job sweeps a declared universe of colored spaces (full coloring
streams, isomorph-free constrained enumerations, or seeded samples) and
records every violation of the checked statement. Reports carry the
exact configuration plus a fingerprint, so reruns are reproducible, and
full-mode sweeps reconcile their stream counts against the predicted
Bell numbers before claiming anything.

Jobs running in expect-counterexample mode (the class-count inequality
below five points) fail when no counterexample shows up: a vacuous pass
is itself a bug.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from itertools import permutations
from multiprocessing import get_context

from .core import ColoredSpace, m_stats
from .enumerate import (
    EnumerationConstraints,
    bell_number,
    enumerate_spaces,
    random_colors,
    restricted_growth_strings,
    rgs_prefixes,
)
from .errors import (
    BudgetExceededError,
    CounterexampleToContract,
    PreconditionFailedError,
    TooLargeError,
)
from .examples import family_edge_apex, family_matchings, family_two_cliques
from .fusion import find_matching_fusion, find_reducing_fusion
from .isometry import (
    a3_count_of_colors,
    a3_set,
    isometric,
    isometry_key,
    isomorphic,
)
from .structure import (
    EdgeApex,
    MatchingsPlusRemainder,
    SHAPES_NO_MONO,
    TwoCliquesCrossMatchings,
    a3_shape_matches,
    check_a3_bound,
    classify_patterns,
    closed_family_bitmaps,
    is_closed,
    is_closed_via_cliques,
    standard_checks,
    validate_match,
)

SAMPLE_CHUNK = 20_000  # fixed so results never depend on the worker count


@dataclass
class VerificationReport:
    job_id: str
    universe: str
    mode: str
    checked: int
    violations: list[dict]
    counterexamples: list[dict] = field(default_factory=list)
    elapsed: float = 0.0
    config: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def fingerprint(self) -> str:
        blob = json.dumps(self.config, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "job": self.job_id,
            "universe": self.universe,
            "mode": self.mode,
            "checked": self.checked,
            "passed": self.passed,
            "violations": self.violations,
            "counterexamples": self.counterexamples,
            "config": self.config,
            "fingerprint": self.fingerprint,
            "extras": self.extras,
        }
        if include_elapsed:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), sort_keys=True)

    def summary(self) -> str:
        """Human-readable table; stable across runs and worker counts."""
        lines = [
            f"job:        {self.job_id}",
            f"universe:   {self.universe}",
            f"mode:       {self.mode}",
            f"checked:    {self.checked}",
            f"violations: {len(self.violations)}",
            f"result:     {'PASS' if self.passed else 'FAIL'}",
            f"config:     {self.fingerprint}",
        ]
        for key in sorted(self.extras):
            lines.append(f"{key}: {self.extras[key]}")
        for v in self.violations[:20]:
            lines.append(f"  violation: {json.dumps(v, sort_keys=True)}")
        return "\n".join(lines)


def _run_shards(worker, argses, jobs: int):
    if jobs <= 1 or len(argses) <= 1:
        return [worker(a) for a in argses]
    with get_context("fork").Pool(min(jobs, len(argses))) as pool:
        return pool.map(worker, argses)


def _violation(n: int, colors, detail: str, **extra) -> dict:
    out = {"n": n, "colors": list(colors), "detail": detail}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# class-count inequality a2 <= a3


def _a2a3_full_shard(args):
    n, prefix = args
    m = n * (n - 1) // 2
    count = 0
    bad = []
    for colors in restricted_growth_strings(m, prefix):
        count += 1
        a2 = max(colors) + 1
        if n >= 3:
            a3 = a3_count_of_colors(colors, n)
            if a2 > a3:
                bad.append(_violation(n, colors, f"a2={a2} > a3={a3}"))
    return count, bad


def _a2a3_sampled_shard(args):
    n, seed, chunk_idx, count = args
    rng = random.Random((seed * 1_000_003 + chunk_idx) & (2**63 - 1))
    m = n * (n - 1) // 2
    bad = []
    for _ in range(count):
        c = rng.randint(1, m)
        colors = random_colors(rng, n, c)
        if c > a3_count_of_colors(colors, n):
            bad.append(
                _violation(n, colors, f"a2={c} > a3", chunk=chunk_idx)
            )
    return count, bad


def verify_a2_le_a3(
    ns,
    mode: str = "auto",
    *,
    samples: int = 10_000_000,
    seed: int = 0,
    jobs: int = 1,
    max_colors: int = 4,
    allow_slow: bool = False,
    checkpoint: str | None = None,
) -> VerificationReport:
    """Check a2 <= a3 over the chosen universes.

    auto mode: n <= 4 full stream in expect-counterexample mode (the
    inequality genuinely fails below five points), n = 5 full stream,
    n >= 6 isomorph-free constrained enumeration plus seeded samples.
    The full n = 6 stream (Bell(15) colorings) must be requested
    explicitly via mode='full' with allow_slow=True.
    """
    ns = sorted(ns)
    t0 = time.time()
    violations: list[dict] = []
    counterexamples: list[dict] = []
    checked = 0
    parts = []
    for n in ns:
        if n < 3:
            raise PreconditionFailedError("triangle counts need n >= 3")
        if mode == "auto":
            submodes = (
                ["full"]
                if n <= 5
                else ["constrained", "sampled"]
            )
        else:
            submodes = [mode]
        expect_counterexample = n <= 4
        for sub in submodes:
            if sub == "full":
                if n == 6 and not allow_slow:
                    raise PreconditionFailedError(
                        "full n=6 stream is the opt-in slow job (allow_slow=True)"
                    )
                if n > 6:
                    raise TooLargeError("full streams are capped at n=6")
                count, bad = _full_a2a3(n, jobs, checkpoint)
                expected = bell_number(n * (n - 1) // 2)
                if count != expected:
                    raise RuntimeError(
                        f"stream count {count} != Bell prediction {expected}"
                    )
                parts.append(f"full n={n} ({count})")
            elif sub == "constrained":
                count, bad = _constrained_a2a3(n, max_colors, jobs)
                parts.append(f"isomorph-free n={n} max_colors<={max_colors} ({count})")
            elif sub == "sampled":
                count, bad = _sampled_a2a3(n, samples, seed, jobs)
                parts.append(f"sampled n={n} ({count} @ seed {seed})")
            else:
                raise PreconditionFailedError(f"unknown mode {sub!r}")
            checked += count
            if expect_counterexample:
                counterexamples.extend(bad)
            else:
                violations.extend(bad)
        if expect_counterexample and not counterexamples:
            violations.append(
                {"n": n, "detail": "expected a counterexample, found none"}
            )
    violations.sort(key=lambda v: json.dumps(v, sort_keys=True))
    return VerificationReport(
        job_id="a2_le_a3",
        universe="; ".join(parts),
        mode=mode,
        checked=checked,
        violations=violations,
        counterexamples=counterexamples,
        elapsed=time.time() - t0,
        config={
            "ns": ns,
            "mode": mode,
            "samples": samples,
            "seed": seed,
            "max_colors": max_colors,
        },
    )


def _full_a2a3(n: int, jobs: int, checkpoint: str | None):
    m = n * (n - 1) // 2
    depth = 5 if m >= 12 else min(3, m)
    prefixes = rgs_prefixes(m, depth)
    done: dict[str, list] = {"shards": [], "violations": [], "count": 0}
    if checkpoint is not None:
        try:
            with open(checkpoint) as fh:
                done = json.load(fh)
        except FileNotFoundError:
            pass
    todo = [
        (i, p) for i, p in enumerate(prefixes) if i not in set(done["shards"])
    ]
    count = done["count"]
    bad = list(done["violations"])
    for batch_start in range(0, len(todo), max(jobs, 1)):
        batch = todo[batch_start : batch_start + max(jobs, 1)]
        results = _run_shards(_a2a3_full_shard, [(n, p) for _, p in batch], jobs)
        for (idx, _), (cnt, shard_bad) in zip(batch, results):
            count += cnt
            bad.extend(shard_bad)
            done["shards"].append(idx)
        done["count"] = count
        done["violations"] = bad
        if checkpoint is not None:
            with open(checkpoint, "w") as fh:
                json.dump(done, fh)
    return count, bad


def _constrained_a2a3(n: int, max_colors: int, jobs: int):
    bad: list[dict] = []

    def sink(space: ColoredSpace):
        a2 = space.color_count
        a3 = len(a3_set(space)) if space.n >= 3 else 1
        if a2 > a3:
            bad.append(_violation(space.n, space.colors, f"a2={a2} > a3={a3}"))

    count = enumerate_spaces(
        EnumerationConstraints(n, max_colors=max_colors), sink, jobs=jobs
    )
    return count, bad


def _sampled_a2a3(n: int, samples: int, seed: int, jobs: int):
    chunks = []
    idx = 0
    left = samples
    while left > 0:
        take = min(SAMPLE_CHUNK, left)
        chunks.append((n, seed, idx, take))
        idx += 1
        left -= take
    results = _run_shards(_a2a3_sampled_shard, chunks, jobs)
    count = sum(c for c, _ in results)
    bad = [v for _, shard in results for v in shard]
    return count, bad


# ---------------------------------------------------------------------------
# structural checker suite


def _lemma_shard(args):
    n, prefix, stride = args
    m = n * (n - 1) // 2
    count = 0
    bad = []
    for colors in restricted_growth_strings(m, prefix):
        space = ColoredSpace(n, max(colors) + 1, colors)
        count += 1
        bad.extend(_check_one_space(space, count % stride == 0))
    return count, bad


def _check_one_space(space: ColoredSpace, functions_too: bool) -> list[dict]:
    bad = []
    bm_def, bm_path = closed_family_bitmaps(space)
    if bm_def != bm_path:
        bad.append(
            _violation(space.n, space.colors, "closed-set routes disagree",
                       diff=bin(bm_def ^ bm_path))
        )
    if functions_too:
        c = space.color_count
        for g in range(1, 1 << c):
            cs = [i for i in range(c) if g >> i & 1]
            d = is_closed(space, cs)
            q = is_closed_via_cliques(space, cs)
            if d != (bm_def >> g & 1) or q != (bm_path >> g & 1) or d != q:
                bad.append(
                    _violation(space.n, space.colors,
                               "per-subset closed predicates disagree", subset=cs)
                )
    if not check_a3_bound(space):
        bad.append(_violation(space.n, space.colors, "triangle bound broken"))
    for report in standard_checks(space):
        if report.applicable and not report.holds:
            bad.append(
                _violation(space.n, space.colors, f"check {report.check_id} fails",
                           witness=report.witness)
            )
    return bad


def verify_lemmas(
    ns, mode: str = "auto", *, jobs: int = 1, max_colors: int = 4
) -> VerificationReport:
    """Run the structural checker battery over full or constrained universes.

    The closed-set dual route is compared exhaustively on every space via
    the subset bitmaps; the per-subset predicates themselves are compared
    on every space up to four points and on a deterministic stride above.
    """
    ns = sorted(ns)
    t0 = time.time()
    violations: list[dict] = []
    checked = 0
    parts = []
    for n in ns:
        sub = mode
        if mode == "auto":
            sub = "full" if n <= 5 else "constrained"
        if sub == "full":
            if n > 5:
                raise PreconditionFailedError("full checker sweeps capped at n=5")
            m = n * (n - 1) // 2
            stride = 1 if n <= 4 else 199
            prefixes = rgs_prefixes(m, 3 if m > 6 else 1)
            results = _run_shards(
                _lemma_shard, [(n, p, stride) for p in prefixes], jobs
            )
            count = sum(c for c, _ in results)
            expected = bell_number(m)
            if count != expected:
                raise RuntimeError(f"stream count {count} != Bell {expected}")
            violations.extend(v for _, shard in results for v in shard)
            checked += count
            parts.append(f"full n={n} ({count})")
        elif sub == "constrained":
            hits: list[dict] = []
            counter = [0]

            def sink(space: ColoredSpace):
                counter[0] += 1
                hits.extend(_check_one_space(space, counter[0] % 23 == 0))

            count = enumerate_spaces(
                EnumerationConstraints(n, max_colors=max_colors), sink, jobs=jobs
            )
            violations.extend(hits)
            checked += count
            parts.append(f"isomorph-free n={n} max_colors<={max_colors} ({count})")
        else:
            raise PreconditionFailedError(f"unknown mode {sub!r}")
    violations.sort(key=lambda v: json.dumps(v, sort_keys=True))
    return VerificationReport(
        job_id="lemmas",
        universe="; ".join(parts),
        mode=mode,
        checked=checked,
        violations=violations,
        elapsed=time.time() - t0,
        config={"ns": ns, "mode": mode, "max_colors": max_colors},
    )


# ---------------------------------------------------------------------------
# fusion finder contracts


def _fusion_shard(args):
    n, prefix = args
    m = n * (n - 1) // 2
    count = 0
    reducing = matching = 0
    bad = []
    for colors in restricted_growth_strings(m, prefix):
        space = ColoredSpace(n, max(colors) + 1, colors)
        count += 1
        a2 = space.color_count
        m2 = m_stats(space, 2)[1]
        try:
            if a2 >= 2 and m2 > 0:
                reducing += 1
                find_reducing_fusion(space)
            elif m2 == 0 and a2 < m:
                matching += 1
                find_matching_fusion(space)
        except CounterexampleToContract as exc:
            bad.append(
                _violation(n, colors, "fusion finder found no contract merge",
                           report=exc.report.to_dict())
            )
    return count, reducing, matching, bad


def verify_fusion(ns, mode: str = "full", *, jobs: int = 1) -> VerificationReport:
    """Both fusion finders must succeed wherever their hypotheses hold."""
    ns = sorted(ns)
    if mode != "full":
        raise PreconditionFailedError("fusion sweeps run on full universes")
    t0 = time.time()
    violations: list[dict] = []
    checked = 0
    reducing = matching = 0
    parts = []
    for n in ns:
        if n != 5:
            raise PreconditionFailedError(
                "fusion hypotheses need n >= 5 and full streams stop at n=5"
            )
        m = n * (n - 1) // 2
        prefixes = rgs_prefixes(m, 3)
        results = _run_shards(_fusion_shard, [(n, p) for p in prefixes], jobs)
        count = sum(r[0] for r in results)
        if count != bell_number(m):
            raise RuntimeError("stream count mismatch")
        reducing += sum(r[1] for r in results)
        matching += sum(r[2] for r in results)
        violations.extend(v for r in results for v in r[3])
        checked += count
        parts.append(f"full n={n} ({count})")
    violations.sort(key=lambda v: json.dumps(v, sort_keys=True))
    return VerificationReport(
        job_id="fusion",
        universe="; ".join(parts),
        mode=mode,
        checked=checked,
        violations=violations,
        elapsed=time.time() - t0,
        config={"ns": ns, "mode": mode},
        extras={"reducing_runs": reducing, "matching_runs": matching},
    )


# ---------------------------------------------------------------------------
# pattern classification of the four-type universe

_SHAPE_BOUND_8 = SHAPES_NO_MONO[0][0]
_SHAPE_BOUND_6A = SHAPES_NO_MONO[1][0]
_SHAPE_BOUND_6B = SHAPES_NO_MONO[2][0]


def verify_classification(
    n_max: int = 9, *, jobs: int = 1, budget_nodes: int | None = None
) -> VerificationReport:
    """Sweep the triangle-type-capped universe up to n_max.

    At the top level every space with four colors and four types must
    realize one of the three partition patterns; the bounded type shapes
    must be absent beyond their proven point counts. Family instances are
    injected as sentinels to guard the classifier itself.
    """
    t0 = time.time()
    violations: list[dict] = []
    checked = 0
    level_counts: dict[int, int] = {}
    shape_hits: dict[str, int] = {"bound8_at_8": 0, "bound6_at_6": 0}
    downgraded = False
    top = n_max
    for n in range(5, n_max + 1):
        spaces: list[ColoredSpace] = []
        try:
            enumerate_spaces(
                EnumerationConstraints(n, max_a3=4),
                spaces.append,
                jobs=jobs,
                budget_nodes=budget_nodes,
            )
        except BudgetExceededError:
            downgraded = True
            top = n - 1
            break
        level_counts[n] = len(spaces)
        checked += len(spaces)
        for space in spaces:
            a2 = space.color_count
            types = a3_set(space)
            a3 = len(types)
            if a2 > a3:
                violations.append(
                    _violation(n, space.colors, f"a2={a2} > a3={a3}")
                )
            for report in standard_checks(space):
                if report.applicable and not report.holds:
                    violations.append(
                        _violation(n, space.colors,
                                   f"check {report.check_id} fails",
                                   witness=report.witness)
                    )
            if a2 == 4 and a3 == 4:
                if n == 8 and a3_shape_matches(types, _SHAPE_BOUND_8):
                    shape_hits["bound8_at_8"] += 1
                if n == 6 and (
                    a3_shape_matches(types, _SHAPE_BOUND_6A)
                    or a3_shape_matches(types, _SHAPE_BOUND_6B)
                ):
                    shape_hits["bound6_at_6"] += 1
                if n == 9 and a3_shape_matches(types, _SHAPE_BOUND_8):
                    violations.append(
                        _violation(n, space.colors,
                                   "type shape with point bound 8 present at n=9")
                    )
                if n == 7 and (
                    a3_shape_matches(types, _SHAPE_BOUND_6A)
                    or a3_shape_matches(types, _SHAPE_BOUND_6B)
                ):
                    violations.append(
                        _violation(n, space.colors,
                                   "type shape with point bound 6 present at n=7")
                    )
                if n == top and n >= 9:
                    matches = classify_patterns(space)
                    if not matches:
                        violations.append(
                            _violation(n, space.colors, "no pattern match")
                        )
                    for match in matches:
                        if not validate_match(space, match):
                            violations.append(
                                _violation(n, space.colors,
                                           "pattern witness failed revalidation",
                                           match=match.to_dict())
                            )
    # sentinels: the classifier must recognize the three families
    sentinels = [
        (
            family_matchings(9, [[(0, 1), (2, 3), (4, 5)], [(6, 7)]]),
            MatchingsPlusRemainder,
        ),
        (
            family_two_cliques((5, 4), [[(0, 5), (1, 6)], [(2, 7), (3, 8)]]),
            TwoCliquesCrossMatchings,
        ),
        (family_edge_apex(9), EdgeApex),
    ]
    for space, want in sentinels:
        matches = classify_patterns(space)
        if not any(isinstance(mt, want) for mt in matches):
            violations.append(
                _violation(space.n, space.colors,
                           f"sentinel not classified as {want.__name__}")
            )
        checked += 1
    violations.sort(key=lambda v: json.dumps(v, sort_keys=True))
    return VerificationReport(
        job_id="classification",
        universe=f"isomorph-free max_a3<=4, n=5..{top}",
        mode="constrained",
        checked=checked,
        violations=violations,
        elapsed=time.time() - t0,
        config={"n_max": n_max, "budget_nodes": budget_nodes},
        extras={
            "level_counts": level_counts,
            "shape_hits": shape_hits,
            "downgraded": downgraded,
            "reached": top,
        },
    )


# ---------------------------------------------------------------------------
# canonical key cross-checks


def brute_force_isomorphic(s1: ColoredSpace, s2: ColoredSpace) -> bool:
    """Exhaustive point-bijection search with greedy color matching."""
    if s1.n != s2.n or s1.color_count != s2.color_count:
        return False
    n = s1.n
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    for perm in permutations(range(n)):
        cmap: dict[int, int] = {}
        used: set[int] = set()
        ok = True
        for x, y in pairs:
            a = s1.color_of(x, y)
            b = s2.color_of(perm[x], perm[y])
            if a in cmap:
                if cmap[a] != b:
                    ok = False
                    break
            elif b in used:
                ok = False
                break
            else:
                cmap[a] = b
                used.add(b)
        if ok:
            return True
    return False


def _keys_subset_shard(args):
    seed, chunk_idx, count = args
    rng = random.Random((seed * 7_368_787 + chunk_idx) & (2**63 - 1))
    from .enumerate import random_space

    bad = []
    positives = 0
    for _ in range(count):
        n = rng.randint(3, 8)
        m = n * (n - 1) // 2
        c = 1 + min(rng.randrange(m), rng.randrange(m))
        space = random_space(n, c, rng.getrandbits(60))
        k = rng.randint(2, min(5, n))
        ys = tuple(sorted(rng.sample(range(n), k)))
        zs = tuple(sorted(rng.sample(range(n), k)))
        oracle = isometric(space, ys, zs)
        fast = isometry_key(space, ys) == isometry_key(space, zs)
        if oracle:
            positives += 1
        if oracle != fast:
            bad.append(
                _violation(n, space.colors, "isometry key disagrees with oracle",
                           ys=list(ys), zs=list(zs))
            )
    return count, positives, bad


def _keys_space_shard(args):
    seed, chunk_idx, count = args
    rng = random.Random((seed * 9_999_991 + chunk_idx) & (2**63 - 1))
    from .enumerate import random_space

    bad = []
    positives = 0
    for _ in range(count):
        n = rng.randint(2, 6)
        m = n * (n - 1) // 2
        c = 1 + min(rng.randrange(m), rng.randrange(m))
        s1 = random_space(n, c, rng.getrandbits(60))
        if rng.random() < 0.5:
            perm = list(range(n))
            rng.shuffle(perm)
            cperm = list(range(c))
            rng.shuffle(cperm)
            colors = [0] * m
            for (x, y), col in s1.pairs():
                a, b = perm[x], perm[y]
                if a > b:
                    a, b = b, a
                colors[a * (2 * n - a - 1) // 2 + (b - a - 1)] = cperm[col]
            s2 = ColoredSpace(n, c, tuple(colors))
        else:
            s2 = random_space(n, rng.randint(1, m), rng.getrandbits(60))
        oracle = brute_force_isomorphic(s1, s2)
        fast = isomorphic(s1, s2)
        if oracle:
            positives += 1
        if oracle != fast:
            bad.append(
                _violation(n, s1.colors, "isomorphism key disagrees with oracle",
                           other=list(s2.colors))
            )
    return count, positives, bad


def cross_check_keys(
    subset_samples: int = 10_000,
    space_pairs: int = 1_000,
    seed: int = 0,
    *,
    jobs: int = 1,
) -> VerificationReport:
    """Canonical keys against brute-force isometry and isomorphism."""
    t0 = time.time()
    chunk = 500

    def chunked(total, tag):
        out = []
        idx = 0
        left = total
        while left > 0:
            take = min(chunk, left)
            out.append((seed, idx if tag == "subset" else idx + 10**6, take))
            idx += 1
            left -= take
        return out

    subset_results = _run_shards(_keys_subset_shard, chunked(subset_samples, "subset"), jobs)
    space_results = _run_shards(_keys_space_shard, chunked(space_pairs, "space"), jobs)
    violations = [v for r in subset_results for v in r[2]]
    violations += [v for r in space_results for v in r[2]]
    violations.sort(key=lambda v: json.dumps(v, sort_keys=True))
    checked = sum(r[0] for r in subset_results) + sum(r[0] for r in space_results)
    return VerificationReport(
        job_id="keys",
        universe=f"{subset_samples} subset pairs (n<=8, k<=5); "
        f"{space_pairs} space pairs (n<=6)",
        mode="sampled",
        checked=checked,
        violations=violations,
        elapsed=time.time() - t0,
        config={
            "subset_samples": subset_samples,
            "space_pairs": space_pairs,
            "seed": seed,
        },
        extras={
            "subset_positives": sum(r[1] for r in subset_results),
            "space_positives": sum(r[1] for r in space_results),
        },
    )


JOBS = {
    "a2le3": verify_a2_le_a3,
    "lemmas": verify_lemmas,
    "fusion": verify_fusion,
    "classification": verify_classification,
    "keys": cross_check_keys,
}
