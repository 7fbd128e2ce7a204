"""Coordinate maps and the isometry constructions of T[theta, S_alpha].

A coordinate map sends ``e_i`` to ``signs(i) * e_{perm(i)}`` where ``perm``
permutes a finite prefix ``{1..p}`` and fixes everything beyond it.  Every
surjective isometry of these spaces has this shape, so nothing more general
is represented here.

The helpers below build the concrete vectors used when characterising the
isometries (the ceiling pair, the flat block vectors, the vectors attached to a
sphere point and a coordinate, the block selection that defeats a
non-identity tail permutation) and recompute every claimed value with the
norm engine.  A disagreement raises :class:`ClaimMismatch`.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import (
    IndexSet,
    ParseError,
    SignPattern,
    SparseVector,
    TsirelsonError,
    basis_sum,
    random_vector,
)
from .norm import NormContext, normalize_to_sphere, tsirelson_norm
from .schreier import (
    ConstructionTooLarge,
    Ordinal,
    fundamental_term,
    is_member,
    push_state,
    run_interval,
    start_state,
)


class ClaimMismatch(AssertionError):
    """The norm engine disagrees with a closed-form value."""


class NotOnSphere(TsirelsonError):
    pass


class IntegerTheta(TsirelsonError):
    pass


class FormError(TsirelsonError):
    pass


def sgn(a: Fraction) -> int:
    # sgn(0) = +1
    return -1 if a < 0 else 1


def _require_sphere(x: SparseVector, ctx: NormContext) -> None:
    if tsirelson_norm(x, ctx) != 1:
        raise NotOnSphere(f"{x} is not on the unit sphere")


# -- coordinate maps ----------------------------------------------------------

@dataclass(frozen=True)
class CoordinateMap:
    perm: Tuple[int, ...] = ()
    signs: SignPattern = field(default_factory=SignPattern)

    def __post_init__(self):
        perm = tuple(self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise TsirelsonError(f"perm must be a bijection of {{1..{len(perm)}}}: {perm}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, signs: Optional[SignPattern] = None) -> "CoordinateMap":
        return cls((), signs or SignPattern())

    @classmethod
    def swap(cls, i: int, j: int, signs: Optional[SignPattern] = None) -> "CoordinateMap":
        p = list(range(1, max(i, j) + 1))
        p[i - 1], p[j - 1] = j, i
        return cls(tuple(p), signs or SignPattern())

    def image(self, i: int) -> int:
        return self.perm[i - 1] if i <= len(self.perm) else i

    def moved(self) -> Tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.perm, start=1) if i != j)

    def inverse(self) -> "CoordinateMap":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm, start=1):
            inv[j - 1] = i
        # U^{-1}(e_j) = signs(perm^{-1}(j)) e_{perm^{-1}(j)}
        top = max([len(self.perm)] + [i for i, _ in self.signs.table])
        table = tuple((j, self.signs(inv[j - 1] if j <= len(inv) else j)) for j in range(1, top + 1))
        return CoordinateMap(tuple(inv), SignPattern(table, self.signs.default))

    def __str__(self) -> str:
        return format_map(self)


def apply_map(m: CoordinateMap, x: SparseVector) -> SparseVector:
    return SparseVector.from_dict({m.image(i): m.signs(i) * a for i, a in x.entries})


_MAP_PART = re.compile(r"\s*(perm|signs|default)\s*=\s*(.*?)\s*")


def parse_map(text: str) -> CoordinateMap:
    """``perm=2,1;signs=-1,1;default=+1``; every part is optional."""
    parts: Dict[str, str] = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        m = _MAP_PART.fullmatch(chunk)
        if m is None or m.group(1) in parts:
            raise ParseError(f"malformed map component {chunk!r}")
        parts[m.group(1)] = m.group(2)
    try:
        perm = tuple(int(t) for t in parts["perm"].split(",")) if parts.get("perm") else ()
        signs = [int(t) for t in parts["signs"].split(",")] if parts.get("signs") else []
        default = int(parts.get("default", "+1"))
        return CoordinateMap(perm, SignPattern.from_prefix(signs, default))
    except (ValueError, TsirelsonError) as exc:
        raise ParseError(f"malformed map {text!r}: {exc}") from None


def format_map(m: CoordinateMap) -> str:
    parts = [f"perm={','.join(map(str, m.perm))}"]
    if m.signs.table:
        top = m.signs.table[-1][0]
        parts.append("signs=" + ",".join(f"{m.signs(i):+d}" for i in range(1, top + 1)))
    parts.append(f"default={m.signs.default:+d}")
    return ";".join(parts)


def is_prefix_permutation(m: CoordinateMap, ctx: NormContext) -> bool:
    """Whether ``m`` only permutes ``{1..floor(1/theta)}`` (the linear isometries for alpha = 1)."""
    if ctx.alpha != Ordinal.finite(1):
        raise TsirelsonError("the permutation form is stated for alpha = 1")
    f = ctx.floor_inv_theta
    return all(i <= f and j <= f for i, j in zip(itertools.count(1), m.perm) if i != j)


def has_isometry_form(m: CoordinateMap, ctx: NormContext) -> bool:
    """Permutation of the first ``floor(1/theta)`` vectors for alpha = 1; signs only for alpha > 1."""
    if ctx.alpha == Ordinal.finite(1):
        return is_prefix_permutation(m, ctx)
    return not m.moved()


def oddness_check(m: CoordinateMap, margin: int = 4) -> bool:
    top = max([len(m.perm)] + [i for i, _ in m.signs.table]) + margin
    return all(apply_map(m, SparseVector.basis(i, -1)) == -apply_map(m, SparseVector.basis(i))
               for i in range(1, top + 1))


# -- pairwise checking --------------------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    x: SparseVector
    y: SparseVector
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    pairs_checked: int
    counterexample: Optional[Counterexample] = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


class NormCache:
    """Memoised norms keyed by the moduli of the coordinates (the norm ignores signs)."""

    def __init__(self, ctx: NormContext):
        self.ctx = ctx
        self._values: Dict[tuple, Fraction] = {}

    def __call__(self, x: SparseVector) -> Fraction:
        key = tuple((i, abs(a)) for i, a in x.entries)
        v = self._values.get(key)
        if v is None:
            v = self._values[key] = tsirelson_norm(x, self.ctx)
        return v


def check_isometry(
    m: CoordinateMap,
    corpus: Sequence[SparseVector],
    ctx: NormContext,
    norm: Optional[NormCache] = None,
) -> CheckReport:
    """Compare ``||m(x) - m(y)||`` with ``||x - y||`` on every pair of the
    corpus, ``y = 0`` included.  Stops at the first failure in corpus order."""
    norm = norm or NormCache(ctx)
    points = list(corpus) + [SparseVector.zero()]
    images = [apply_map(m, x) for x in points]
    checked = 0
    for a in range(len(corpus)):
        for b in range(a + 1, len(points)):
            checked += 1
            lhs = norm(images[a] - images[b])
            rhs = norm(points[a] - points[b])
            if lhs != rhs:
                return CheckReport(False, checked, Counterexample(points[a], points[b], lhs, rhs))
    return CheckReport(True, checked)


def check_linear_extension(
    m: CoordinateMap,
    ctx: NormContext,
    corpus: Sequence[SparseVector],
    norm: Optional[NormCache] = None,
) -> CheckReport:
    """Check that the linear extension of a sphere map of the admissible form
    is an isometry on the corpus, including off-sphere multiples."""
    if not has_isometry_form(m, ctx):
        raise FormError(f"{format_map(m)} is not of the admissible form for {ctx}")
    norm = norm or NormCache(ctx)
    report = check_isometry(m, corpus, ctx, norm)
    if not report.passed:
        return report
    checked = report.pairs_checked
    zero = SparseVector.zero()
    for x in corpus:
        for c in (Fraction(2), Fraction(-1, 3), Fraction(5, 2)):
            checked += 1
            cx = x * c
            lhs, rhs = norm(apply_map(m, cx)), norm(cx)
            if lhs != rhs:
                return CheckReport(False, checked, Counterexample(cx, zero, lhs, rhs))
    return CheckReport(True, checked)


# -- explicit constructions -----------------------------------------------------

@dataclass(frozen=True)
class CeilingPair:
    u: SparseVector
    v: SparseVector
    expected_bad: Fraction
    expected_good: Fraction
    tail: SparseVector


def ceiling_counterexample(ctx: NormContext) -> CeilingPair:
    """Vectors showing that ``e_1`` cannot be sent to ``e_{ceil(1/theta)}``.

    With ``c = ceil(1/theta)`` and ``j_k = c + k``:
    ``u = e_c - sum_{k<c} e_{j_k}`` has norm ``theta * c > 1`` while
    ``v = e_1 - sum_{k<c} e_{j_k}`` has norm 1.
    """
    if ctx.inv_theta_is_integer:
        raise IntegerTheta(f"1/theta = {1 / ctx.theta} is an integer")
    c = ctx.ceil_inv_theta
    tail = basis_sum(range(c + 1, 2 * c))
    u = SparseVector.basis(c) - tail
    v = SparseVector.basis(1) - tail
    bad, good = ctx.theta * c, Fraction(1)
    nu, nv = tsirelson_norm(u, ctx), tsirelson_norm(v, ctx)
    if (nu, nv) != (bad, good):
        raise ClaimMismatch(f"ceiling pair: engine gives {nu}, {nv}; expected {bad}, {good}")
    return CeilingPair(u, v, bad, good, tail)


def check_peak_coordinate(x: SparseVector, n: int, ctx: NormContext) -> bool:
    """Whether ``||x + e_n|| = 2`` and ``x(n) = 1`` agree for this sphere vector."""
    _require_sphere(x, ctx)
    return (tsirelson_norm(x + SparseVector.basis(n), ctx) == 2) == (x[n] == 1)


@dataclass(frozen=True)
class CoordinateProbe:
    x: SparseVector
    z: SparseVector
    nx: Fraction
    nz: Fraction


def coordinate_probe_vectors(y: SparseVector, j: int, sign: int, ctx: NormContext) -> CoordinateProbe:
    """For a sphere vector ``y = sum b_i e_i`` and a coordinate ``j``:

    * ``x = sum_{i != j} theta b_i e_i + sign * e_j`` has norm 1;
    * ``z = y - w`` with ``w = sum_{i != j} theta b_i e_i - sgn(b_j) e_j`` has
      norm ``1 + |b_j|``.  Its coordinates are ``(1 - theta) b_i`` off ``j`` and
      ``b_j + sgn(b_j)`` at ``j``.
    """
    if sign not in (1, -1):
        raise TsirelsonError("sign must be +1 or -1")
    _require_sphere(y, ctx)
    theta = ctx.theta
    rest = SparseVector(tuple((i, theta * b) for i, b in y.entries if i != j))
    bj = y[j]
    x = rest + SparseVector.basis(j, sign)
    z = y - (rest - SparseVector.basis(j, sgn(bj)))
    nx, nz = tsirelson_norm(x, ctx), tsirelson_norm(z, ctx)
    if nx != 1 or nz != 1 + abs(bj):
        raise ClaimMismatch(f"coordinate probe values for y={y}, j={j}: got {nx}, {nz}; expected 1, {1 + abs(bj)}")
    return CoordinateProbe(x, z, nx, nz)


def _flat_block(k: int, theta: Fraction) -> SparseVector:
    return basis_sum(range(k, 2 * k), Fraction(1) / (k * theta))


def flat_block_vector(k: int, ctx: NormContext) -> SparseVector:
    """``(k theta)^{-1} (e_k + ... + e_{2k-1})`` for ``k > 1/theta``; norm 1 when alpha = 1."""
    if ctx.alpha != Ordinal.finite(1):
        raise TsirelsonError("flat block vectors are defined for alpha = 1")
    if k <= 1 / ctx.theta:
        raise TsirelsonError(f"flat block vectors need k > 1/theta, got k={k}")
    x = _flat_block(k, ctx.theta)
    nx = tsirelson_norm(x, ctx)
    if nx != 1:
        raise ClaimMismatch(f"flat block at {k} has norm {nx}, expected 1")
    return x


@dataclass(frozen=True)
class FlatBlockPerturbations:
    plus: Optional[Fraction]
    minus: Optional[Fraction]


def flat_block_perturbations(k: int, i: int, ctx: NormContext) -> FlatBlockPerturbations:
    """Norm of the flat block at ``k`` plus or minus ``e_i`` for ``i`` in its support.

    Adding ``e_i`` gives ``1 + 1/(k theta)`` when ``1/theta < k <= 2/theta``;
    subtracting it gives ``1 - 2/k + theta`` when ``k > 2/theta``.
    """
    x = flat_block_vector(k, ctx)
    if i not in x.support:
        raise TsirelsonError(f"{i} is not in the support of the flat block at {k}")
    theta, inv = ctx.theta, 1 / ctx.theta
    e = SparseVector.basis(i)
    plus = minus = None
    if k <= 2 * inv:
        plus = tsirelson_norm(x + e, ctx)
        if plus != 1 + Fraction(1) / (k * theta):
            raise ClaimMismatch(f"flat block at {k} plus e_{i} has norm {plus}")
    else:
        minus = tsirelson_norm(x - e, ctx)
        if minus != 1 - Fraction(2, k) + theta:
            raise ClaimMismatch(f"flat block at {k} minus e_{i} has norm {minus}")
    return FlatBlockPerturbations(plus, minus)


# -- block selection against a tail permutation ---------------------------------

DEFAULT_CONSTRUCTION_LIMIT = 200_000


@dataclass(frozen=True)
class BlockSelection:
    blocks: Tuple[IndexSet, ...]
    union_member: bool
    image_member: bool
    block_order: Ordinal


def _check_sigma(sigma: Mapping[int, int]) -> Dict[int, int]:
    table = {int(a): int(b) for a, b in sigma.items() if a != b}
    if set(table) != set(table.values()):
        raise TsirelsonError(f"sigma must be injective on N (a permutation of its moved points): {sigma}")
    return table


def select_blocks(
    k: int,
    sigma: Mapping[int, int],
    alpha: Ordinal,
    ctx: NormContext,
    limit: int = DEFAULT_CONSTRUCTION_LIMIT,
) -> BlockSelection:
    """Select ``{k} < S^1 < ... < S^t`` (``t = sigma(k)``) with each ``S^n`` a
    maximal ``S_beta``-set, every index exceeding both the previous index and
    its ``sigma``-image; then test the union and its ``sigma``-image in
    ``S_alpha``.

    ``beta`` is the predecessor of ``alpha``, or ``t - 1`` when ``alpha`` is
    omega (the ``t``-th term of the cofinal sequence is ``t``).  ``sigma`` is a
    finite table, the identity elsewhere.  Blocks larger than ``limit``
    elements raise :class:`ConstructionTooLarge`.
    """
    table = _check_sigma(sigma)
    s = lambda j: table.get(j, j)  # noqa: E731
    t = s(k)
    if t >= k:
        raise TsirelsonError(f"need sigma(k) < k, got sigma({k}) = {t}")
    if alpha <= Ordinal.finite(1):
        raise TsirelsonError("the construction needs alpha > 1")
    if alpha.is_limit:
        beta = fundamental_term(alpha, t).predecessor()
    else:
        beta = alpha.predecessor()
    settled = max([k] + list(table) + list(table.values()))

    blocks: List[IndexSet] = [(k,)]
    floor = max(k, ctx.floor_inv_theta)  # first index of S^1 must exceed this
    total = 1
    for _ in range(t):
        first = floor + 1
        block = [first]
        state = start_state(beta, first)
        # inside the moved region the index rule depends on sigma
        while block[-1] <= settled:
            nxt = max(block[-1], s(block[-1])) + 1
            st = push_state(beta, state, nxt)
            if st is None:
                break
            block.append(nxt)
            state = st
        else:
            # identity from here on: the rest of the block is an interval
            start = block[-1] + 1
            end = run_interval(beta, state, start, limit - total - len(block))
            if end is None:
                raise ConstructionTooLarge(
                    f"a maximal S_{beta}-set from {first} exceeds the {limit}-element limit")
            block.extend(range(start, end))
        block = tuple(block)
        blocks.append(block)
        total += len(block)
        floor = max(block[-1], s(block[-1]))

    union = tuple(j for b in blocks for j in b)
    image = tuple(sorted(s(j) for j in union))
    return BlockSelection(tuple(blocks), is_member(union, alpha), is_member(image, alpha), beta)


# -- probing for the special sphere points ------------------------------------

@dataclass(frozen=True)
class ProbeHit:
    y: SparseVector
    value: Fraction


def find_separating_probe(
    u: SparseVector,
    ctx: NormContext,
    budget: int = 8,
    seed: int = 0,
) -> Optional[ProbeHit]:
    """Look for a sphere vector ``y`` with ``min(||u + y||, ||u - y||) > 1``.

    First tries ``y`` proportional to ``e_{j_1} + ... + e_{j_f}``,
    ``f = floor(1/theta)``, with ``supp u < j_1 < ...`` (and ``j_1 > f`` when
    alpha > 1) for a few offsets and gaps, then ``budget`` pseudo-random sphere
    vectors.  None means no witness was found, not that none exists.
    """
    _require_sphere(u, ctx)
    f = ctx.floor_inv_theta
    base = max(u.support) + 1
    if ctx.alpha > Ordinal.finite(1):
        base = max(base, f + 1)
    probes: List[SparseVector] = []
    for offset in range(3):
        for gap in (1, 2):
            probes.append(basis_sum(range(base + offset, base + offset + gap * f, gap)))
    rng = random.Random(seed)
    top = max(u.support) + f + 2
    for _ in range(budget):
        probes.append(random_vector(rng, top, f + 2, (1, 2, 3)))
    for y in probes:
        y = normalize_to_sphere(y, ctx)
        value = min(tsirelson_norm(u + y, ctx), tsirelson_norm(u - y, ctx))
        if value > 1:
            return ProbeHit(y, value)
    return None


def is_special_point(u: SparseVector, ctx: NormContext) -> bool:
    """``u`` is ``+-e_i`` with ``i <= floor(1/theta)`` (alpha = 1) or ``+-e_1`` (alpha > 1)."""
    if len(u) != 1 or abs(u.coefficients[0]) != 1:
        return False
    top = ctx.floor_inv_theta if ctx.alpha == Ordinal.finite(1) else 1
    return u.support[0] <= top
