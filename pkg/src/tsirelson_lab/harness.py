"""Seeded corpora, verification suites and their JSON reports.

Statements about the whole unit sphere are checked on a finite corpus only,
so every report labels such checks as sampled.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    SignPattern,
    SparseVector,
    TsirelsonError,
    basis_sum,
    format_rational,
    format_vector,
    random_vector,
)
from .isometry import (
    ClaimMismatch,
    CoordinateMap,
    NormCache,
    apply_map,
    select_blocks,
    ceiling_counterexample,
    check_isometry,
    format_map,
    has_isometry_form,
    is_special_point,
    find_separating_probe,
    check_peak_coordinate,
    coordinate_probe_vectors,
    oddness_check,
    check_linear_extension,
    flat_block_perturbations,
    flat_block_vector,
)
from .norm import (
    NormContext,
    brute_force_norm,
    normalize_to_sphere,
    norm_iterates,
    tsirelson_norm,
)
from .schreier import OMEGA, ConstructionTooLarge, Ordinal

SCHEMA = "tsirelson-lab/1"
MAX_CORPUS_INDEX = 24
MAX_CORPUS_SUPPORT = 10
MAX_CORPUS_COUNT = 2000
ORACLE_BOUND_LIMIT = 7

ONE = Ordinal.finite(1)


# -- corpus -------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusSpec:
    max_index: int = 8
    max_support: int = 4
    denominators: Tuple[int, ...] = (1, 2, 3)
    count: int = 16
    seed: int = 42

    def __post_init__(self):
        object.__setattr__(self, "denominators", tuple(sorted(set(self.denominators))))
        if not 1 <= self.max_index <= MAX_CORPUS_INDEX:
            raise TsirelsonError(f"max_index must lie in 1..{MAX_CORPUS_INDEX}")
        if not 1 <= self.max_support <= MAX_CORPUS_SUPPORT:
            raise TsirelsonError(f"max_support must lie in 1..{MAX_CORPUS_SUPPORT}")
        if not 0 <= self.count <= MAX_CORPUS_COUNT:
            raise TsirelsonError(f"count must lie in 0..{MAX_CORPUS_COUNT}")
        if not self.denominators or self.denominators[0] < 1:
            raise TsirelsonError("denominators must be positive integers")
        if not 0 <= self.seed < 2 ** 64:
            raise TsirelsonError("seed must be a 64-bit unsigned integer")


def flat_block_range(ctx: NormContext) -> range:
    """Indices ``k`` with ``1/theta < k <= 2 * max(2, 1/theta)``."""
    inv = 1 / ctx.theta
    return range(ctx.floor_inv_theta + 1, int(2 * max(2, inv)) + 1)


def generate_corpus(spec: CorpusSpec, ctx: NormContext) -> List[SparseVector]:
    """Unit vectors: the basis, the flat block vectors, the ceiling vectors, then
    ``spec.count`` seeded random vectors.  Duplicates are dropped."""
    seeds: List[SparseVector] = [SparseVector.basis(i) for i in range(1, spec.max_index + 1)]
    for k in flat_block_range(ctx):
        seeds.append(basis_sum(range(k, 2 * k), Fraction(1) / (k * ctx.theta)))
    if not ctx.inv_theta_is_integer:
        pair = ceiling_counterexample(ctx)
        seeds += [pair.u, pair.v, pair.tail]
    rng = random.Random(spec.seed)
    for _ in range(spec.count):
        seeds.append(random_vector(rng, spec.max_index, spec.max_support, spec.denominators))
    out: List[SparseVector] = []
    seen = set()
    for x in seeds:
        x = normalize_to_sphere(x, ctx)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    details: str

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass
class SuiteReport:
    suite: str
    ctx: NormContext
    checks: List[Check] = field(default_factory=list)
    counterexamples: List[dict] = field(default_factory=list)
    pairs_checked: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "suite": self.suite,
            "theta": format_rational(self.ctx.theta),
            "alpha": str(self.ctx.alpha),
            "status": self.status,
            "checks": [
                {"name": c.name, "status": c.status, "details": c.details}
                for c in sorted(self.checks, key=lambda c: c.name)
            ],
            "counterexamples": self.counterexamples,
            "pairs_checked": self.pairs_checked,
        }
        if include_elapsed:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), sort_keys=False)


def counterexample_json(cx, label: str) -> dict:
    return {
        "label": label,
        "x": format_vector(cx.x),
        "y": format_vector(cx.y),
        "lhs": format_rational(cx.lhs),
        "rhs": format_rational(cx.rhs),
    }


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# -- structural checks on the sphere ---------------------------------------

def _max_index(corpus: Sequence[SparseVector]) -> int:
    return max((x.support[-1] for x in corpus if not x.is_zero()), default=1)


def run_lemma_suite(ctx: NormContext, corpus: Sequence[SparseVector], probe_budget: int = 4) -> SuiteReport:
    report = SuiteReport("lemmas", ctx)
    with _Timer() as timer:
        top = _max_index(corpus) + 2
        n = len(corpus)

        bad = [(x, m) for x in corpus for m in range(1, top + 1) if not check_peak_coordinate(x, m, ctx)]
        report.checks.append(Check(
            "peak-coordinate", not bad,
            f"sampled: ||x+e_n|| = 2 iff x(n) = 1 on {n} vectors, n <= {top}"
            + (f"; fails at x={bad[0][0]}, n={bad[0][1]}" if bad else "")))

        failure = None
        cases = 0
        for x in corpus:
            for j in range(1, top + 1):
                for sign in (1, -1):
                    cases += 1
                    try:
                        coordinate_probe_vectors(x, j, sign, ctx)
                    except ClaimMismatch as exc:
                        failure = failure or str(exc)
        report.checks.append(Check(
            "coordinate-probe-norms", failure is None,
            f"sampled: ||x|| = 1 and ||z|| = 1 + |b_j| in {cases} cases" + (f"; {failure}" if failure else "")))

        special_hits, witnessed, nonspecial = [], 0, 0
        for u in corpus:
            hit = find_separating_probe(u, ctx, budget=probe_budget)
            if is_special_point(u, ctx):
                if hit is not None:
                    special_hits.append((u, hit))
            else:
                nonspecial += 1
                witnessed += hit is not None
        ok = not special_hits and (nonspecial == 0 or witnessed > 0)
        detail = (f"sampled: special points gave no probe above 1; "
                  f"witnesses found for {witnessed} of {nonspecial} other vectors")
        if special_hits:
            u, hit = special_hits[0]
            detail += f"; special point {u} has probe {hit.y} with value {format_rational(hit.value)}"
            report.counterexamples.append({
                "label": "separating-probe-special", "x": format_vector(u), "y": format_vector(hit.y),
                "lhs": format_rational(hit.value), "rhs": "1"})
        report.checks.append(Check("separating-probes", ok, detail))

        if ctx.alpha == ONE:
            report.checks.append(_flat_block_check(ctx))
        else:
            report.checks.append(_block_selection_check(ctx))
    report.elapsed = timer.elapsed
    return report


def _flat_block_check(ctx: NormContext) -> Check:
    inv = 1 / ctx.theta
    ks = range(ctx.floor_inv_theta + 1, int(4 * inv) + 1)
    try:
        for k in ks:
            flat_block_vector(k, ctx)
            for i in range(k, 2 * k):
                flat_block_perturbations(k, i, ctx)
    except ClaimMismatch as exc:
        return Check("flat-block-closed-forms", False, str(exc))
    return Check("flat-block-closed-forms", True,
                 f"flat blocks have norm 1 and the closed forms hold for k in {ks.start}..{ks.stop - 1}")


def _block_selection_check(ctx: NormContext) -> Check:
    results = []
    for k, t in ((3, 2), (4, 2), (4, 3), (5, 2)):
        if ctx.alpha.is_limit and t > 2:
            continue
        r = select_blocks(k, {k: t, t: k}, ctx.alpha, ctx)
        results.append((k, t, r))
    bad = [(k, t) for k, t, r in results if not r.union_member or r.image_member]
    return Check("block-selection", not bad,
                 f"{len(results)} swaps sigma = (k t) with t < k: union in S_alpha, image outside"
                 + (f"; fails for {bad}" if bad else ""))


# -- isometry suite -------------------------------------------------------------

def conforming_maps(ctx: NormContext) -> List[CoordinateMap]:
    """Permutations of ``{1..floor(1/theta)}`` (only the identity when
    alpha > 1) with every sign choice on that prefix and both tail signs."""
    f = ctx.floor_inv_theta if ctx.alpha == ONE else 1
    perms = list(itertools.permutations(range(1, f + 1))) if ctx.alpha == ONE else [()]
    maps = []
    for perm in perms:
        for signs in itertools.product((1, -1), repeat=f):
            for default in (1, -1):
                maps.append(CoordinateMap(tuple(perm), SignPattern.from_prefix(signs, default)))
    return maps


def nonconforming_maps(ctx: NormContext) -> List[CoordinateMap]:
    """Permutations of ``{1..floor(1/theta) + 2}`` moving an index outside the
    allowed prefix, each with all-plus and alternating signs."""
    f = ctx.floor_inv_theta if ctx.alpha == ONE else 1
    p = f + 2
    maps = []
    for perm in itertools.permutations(range(1, p + 1)):
        m = CoordinateMap(perm)
        if has_isometry_form(m, ctx):
            continue
        maps.append(m)
        maps.append(CoordinateMap(perm, SignPattern.from_prefix([(-1) ** i for i in range(p)], -1)))
    return maps


def block_selection_vectors(m: CoordinateMap, ctx: NormContext) -> List[SparseVector]:
    """For alpha > 1: the indicator of the selected blocks for every ``k`` with
    ``perm(k) < k``.  Its image has support outside ``S_alpha`` while the vector
    itself does not, which separates the two norms."""
    sigma = {i: j for i, j in enumerate(m.perm, start=1) if i != j}
    out = []
    for k, t in sigma.items():
        if t >= k:
            continue
        try:
            r = select_blocks(k, sigma, ctx.alpha, ctx)
        except ConstructionTooLarge:
            continue
        out.append(normalize_to_sphere(basis_sum(j for b in r.blocks for j in b), ctx))
    return out


def run_isometry_suite(ctx: NormContext, corpus: Sequence[SparseVector]) -> SuiteReport:
    report = SuiteReport("isometry", ctx)
    norm = NormCache(ctx)
    with _Timer() as timer:
        good = conforming_maps(ctx)
        failures = []
        for m in good:
            r = check_isometry(m, corpus, ctx, norm)
            report.pairs_checked += r.pairs_checked
            if not r.passed:
                failures.append((m, r))
        report.checks.append(Check(
            "conforming-maps-pass", not failures,
            f"sampled: {len(good)} maps preserve all distances on {len(corpus)} vectors"
            + (f"; {format_map(failures[0][0])} fails" if failures else "")))
        for m, r in failures[:5]:
            report.counterexamples.append(counterexample_json(r.counterexample, format_map(m)))

        bad = nonconforming_maps(ctx)
        survivors = []
        for m in bad:
            r = check_isometry(m, corpus, ctx, norm)
            report.pairs_checked += r.pairs_checked
            if r.passed and ctx.alpha > ONE:
                r = check_isometry(m, block_selection_vectors(m, ctx), ctx, norm)
                report.pairs_checked += r.pairs_checked
            if r.passed:
                survivors.append(m)
        report.checks.append(Check(
            "nonconforming-maps-rejected", not survivors,
            f"{len(bad) - len(survivors)} of {len(bad)} maps moving an index outside the allowed prefix "
            "have a counterexample pair"
            + (f"; not rejected: {format_map(survivors[0])}" if survivors else "")))

        extension_bad = []
        for m in good:
            r = check_linear_extension(m, ctx, corpus, norm)
            if not r.passed:
                extension_bad.append(m)
        report.checks.append(Check(
            "linear-extension", not extension_bad,
            f"sampled: {len(good)} maps are isometric on the corpus and its multiples"))

        odd = all(oddness_check(m) for m in good + bad)
        report.checks.append(Check("oddness", odd, "U(-e_i) = -U(e_i) for every tested map"))

        if not ctx.inv_theta_is_integer:
            _ceiling_checks(ctx, report, norm)
        if ctx.alpha > ONE:
            _swap_witness_check(ctx, report, norm)
    report.elapsed = timer.elapsed
    return report


def _ceiling_checks(ctx: NormContext, report: SuiteReport, norm: NormCache) -> None:
    try:
        pair = ceiling_counterexample(ctx)
    except ClaimMismatch as exc:
        report.checks.append(Check("ceiling-values", False, str(exc)))
        return
    report.checks.append(Check(
        "ceiling-values", True,
        f"||{pair.u}|| = {format_rational(pair.expected_bad)} and ||{pair.v}|| = 1"))
    c = ctx.ceil_inv_theta
    rejected = True
    for i in range(1, c):
        m = CoordinateMap.swap(i, c)
        v = SparseVector.basis(i) - pair.tail
        r = check_isometry(m, [v], ctx, norm)
        report.pairs_checked += r.pairs_checked
        if r.passed or r.counterexample.lhs != pair.expected_bad:
            rejected = False
        else:
            report.counterexamples.append(counterexample_json(r.counterexample, format_map(m)))
    report.checks.append(Check(
        "ceiling-map-rejected", rejected,
        f"maps sending e_i (i < {c}) to e_{c} stretch e_i - tail to {format_rational(pair.expected_bad)}"))


def _swap_witness_check(ctx: NormContext, report: SuiteReport, norm: NormCache) -> None:
    f = ctx.floor_inv_theta
    x = basis_sum(range(2, 2 + 2 * f))
    m = CoordinateMap.swap(1, 2)
    r = check_isometry(m, [x], ctx, norm)
    report.pairs_checked += r.pairs_checked
    if not r.passed:
        report.counterexamples.append(counterexample_json(r.counterexample, format_map(m)))
    detail = "swap(1,2) preserved the norm of " + str(x) if r.passed else (
        f"||{apply_map(m, x)}|| = {format_rational(r.counterexample.lhs)} vs "
        f"||{x}|| = {format_rational(r.counterexample.rhs)}")
    report.checks.append(Check("swap-1-2-rejected", not r.passed, detail))


# -- oracle comparison ------------------------------------------------------------

ORACLE_COEFFICIENTS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))


def oracle_vectors(bound: int) -> Iterable[SparseVector]:
    """Every vector with support in ``{1..bound}`` and coefficients in ``{0, +-1, +-1/2}``."""
    choices = (Fraction(0),) + ORACLE_COEFFICIENTS
    for coefs in itertools.product(choices, repeat=bound):
        yield SparseVector(tuple((i, a) for i, a in enumerate(coefs, start=1) if a))


def compare_oracle(ctx: NormContext, bound: int = 6) -> SuiteReport:
    if not 1 <= bound <= ORACLE_BOUND_LIMIT:
        raise TsirelsonError(f"oracle bound must lie in 1..{ORACLE_BOUND_LIMIT}")
    report = SuiteReport("oracle", ctx)
    with _Timer() as timer:
        mismatch: Optional[Tuple[SparseVector, Fraction, Fraction]] = None
        iterate_bad: Optional[Tuple[SparseVector, Fraction, Fraction]] = None
        count = 0
        classes: Dict[tuple, Fraction] = {}
        for x in oracle_vectors(bound):
            count += 1
            value = tsirelson_norm(x, ctx)
            key = tuple((i, abs(a)) for i, a in x.entries)
            if key not in classes:
                classes[key] = value
                last = norm_iterates(x, ctx, max(len(x), 1))[-1]
                if last != value and iterate_bad is None:
                    iterate_bad = (x, last, value)
            expected = brute_force_norm(x, ctx)
            if value != expected and mismatch is None:
                mismatch = (x, value, expected)
        report.pairs_checked = count
        detail = f"{count} vectors with support in 1..{bound}"
        if mismatch:
            x, a, b = mismatch
            detail += f"; engine {format_rational(a)} vs brute force {format_rational(b)} at {x}"
            report.counterexamples.append({"label": "engine-vs-bruteforce", "x": format_vector(x),
                                           "y": "0", "lhs": format_rational(a), "rhs": format_rational(b)})
        report.checks.append(Check("engine-matches-bruteforce", mismatch is None, detail))
        detail = f"{len(classes)} modulus classes reach the implicit value within |supp x| iterations"
        if iterate_bad:
            x, a, b = iterate_bad
            detail += f"; iterate {format_rational(a)} vs {format_rational(b)} at {x}"
        report.checks.append(Check("iterates-stabilize", iterate_bad is None, detail))
    report.elapsed = timer.elapsed
    return report


# -- defaults -----------------------------------------------------------------------

def default_contexts() -> List[NormContext]:
    half = Fraction(1, 2)
    return [
        NormContext(half, ONE),
        NormContext(Fraction(1, 3), ONE),
        NormContext(Fraction(2, 5), ONE),
        NormContext(half, Ordinal.finite(2)),
        NormContext(half, OMEGA),
    ]
