"""The norm of T[theta, S_alpha] on finitely supported vectors.

For ``x`` in ``c_00`` the norm is the unique solution of

    ||x|| = max( ||x||_inf,  sup theta * sum_i ||E_i x|| )

with the supremum over ``E_1 < ... < E_d`` whose minima form an
``S_alpha``-set.  Because the family is hereditary and spreading and the norm
is monotone in the moduli of the coordinates, the supremum is attained by a
*canonical* family: the minima are support points ``m_1 < ... < m_d`` and each
block runs from ``m_i`` up to (not including) ``m_{i+1}``, the last one up to
the end of the window.  Every block is then a contiguous window of the support
list, so the norm is a dynamic programme over windows ``(i, j)`` of support
positions.  Inside a window the choice of minima is a path whose admissibility
is tracked by the greedy automaton from :mod:`tsirelson_lab.schreier`.

A family consisting of one block that holds the whole window only contributes
``theta * ||x|| < ||x||`` and is skipped, which makes the recursion
well-founded.

:func:`brute_force_norm` is an independent check that enumerates every family
of consecutive finite sets with no canonical-form reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import (
    SparseVector,
    TsirelsonError,
    ZeroVectorError,
    as_rational,
    format_rational,
    parse_rational,
)
from .schreier import Ordinal, is_member, is_member_bruteforce, push_state, start_state

BRUTE_FORCE_SUPPORT_LIMIT = 8
_FULL_WINDOW_LIMIT = 9


@dataclass(frozen=True)
class NormContext:
    theta: Fraction
    alpha: Ordinal

    def __post_init__(self):
        theta = as_rational(self.theta)
        if not 0 < theta <= Fraction(1, 2):
            raise TsirelsonError(f"theta must lie in (0, 1/2], got {theta}")
        object.__setattr__(self, "theta", theta)

    @property
    def floor_inv_theta(self) -> int:
        return math.floor(1 / self.theta)

    @property
    def ceil_inv_theta(self) -> int:
        return math.ceil(1 / self.theta)

    @property
    def inv_theta_is_integer(self) -> bool:
        return (1 / self.theta).denominator == 1

    def __str__(self) -> str:
        return f"theta={format_rational(self.theta)}, alpha={self.alpha}"


def parse_theta(text: str) -> Fraction:
    theta = parse_rational(text)
    if not 0 < theta <= Fraction(1, 2):
        raise TsirelsonError(f"theta must lie in (0, 1/2], got {text}")
    return theta


# -- witnesses ----------------------------------------------------------------

@dataclass(frozen=True)
class AdmissiblePartition:
    blocks: Tuple[Tuple[int, ...], ...]

    @property
    def minima(self) -> Tuple[int, ...]:
        return tuple(b[0] for b in self.blocks)

    def validate(self, alpha: Ordinal) -> None:
        for b in self.blocks:
            if not b or any(u >= v for u, v in zip(b, b[1:])):
                raise TsirelsonError(f"bad block {b}")
        for b, c in zip(self.blocks, self.blocks[1:]):
            if b[-1] >= c[0]:
                raise TsirelsonError(f"blocks {b} and {c} are not consecutive")
        if not is_member(self.minima, alpha):
            raise TsirelsonError(f"minima {self.minima} are not an S_{alpha}-set")


@dataclass(frozen=True)
class SupLeaf:
    index: int


@dataclass(frozen=True)
class Split:
    partition: AdmissiblePartition
    children: Tuple["NormWitness", ...]


NormWitness = Union[SupLeaf, Split]


def witness_value(witness: NormWitness, x: SparseVector, ctx: NormContext) -> Fraction:
    """Recompute the value a witness certifies for ``x``, checking admissibility."""
    if isinstance(witness, SupLeaf):
        return abs(x[witness.index])
    witness.partition.validate(ctx.alpha)
    if len(witness.children) != len(witness.partition.blocks):
        raise TsirelsonError("one child witness per block expected")
    total = Fraction(0)
    for block, child in zip(witness.partition.blocks, witness.children):
        keep = set(block)
        sub = SparseVector(tuple((i, a) for i, a in x.entries if i in keep))
        total += witness_value(child, sub, ctx)
    return ctx.theta * total


def witness_to_json(witness: NormWitness, x: SparseVector, ctx: NormContext) -> dict:
    if isinstance(witness, SupLeaf):
        return {"type": "sup", "index": witness.index, "value": format_rational(abs(x[witness.index]))}
    children = []
    for block, child in zip(witness.partition.blocks, witness.children):
        keep = set(block)
        sub = SparseVector(tuple((i, a) for i, a in x.entries if i in keep))
        children.append(witness_to_json(child, sub, ctx))
    return {
        "type": "split",
        "value": format_rational(witness_value(witness, x, ctx)),
        "minima": list(witness.partition.minima),
        "blocks": [list(b) for b in witness.partition.blocks],
        "children": children,
    }


# -- the window programme -----------------------------------------------------

Window = Tuple[int, int]


class _Windows:
    """Window values for one vector; ``idx``/``mods`` are support and moduli."""

    def __init__(self, idx: Sequence[int], mods: Sequence[Fraction], ctx: NormContext):
        self.idx = list(idx)
        self.mods = list(mods)
        self.ctx = ctx
        self.n = len(self.idx)

    def _path_best(self, C: Dict[Window, Fraction], j: int, memo: dict, p: int, state) -> Fraction:
        """Best block sum for minima starting at position ``p`` (already in
        ``state``) with the last block ending at ``j``."""
        key = (p, state)
        hit = memo.get(key)
        if hit is not None:
            return hit
        alpha, cap, idx = self.ctx.alpha, self.n, self.idx
        best = C[(p, j)]
        for q in range(p + 1, j + 1):
            nxt = push_state(alpha, state, idx[q], cap)
            if nxt is None:
                continue
            v = C[(p, q - 1)] + self._path_best(C, j, memo, q, nxt)
            if v > best:
                best = v
        memo[key] = best
        return best

    def _multi(self, C, j, memo, i) -> Optional[Fraction]:
        """Best sum for minima starting at ``i`` with at least two blocks."""
        alpha, cap, idx = self.ctx.alpha, self.n, self.idx
        first = start_state(alpha, idx[i], cap)
        best = None
        for q in range(i + 1, j + 1):
            nxt = push_state(alpha, first, idx[q], cap)
            if nxt is None:
                continue
            v = C[(i, q - 1)] + self._path_best(C, j, memo, q, nxt)
            if best is None or v > best:
                best = v
        return best

    def implicit(self) -> Dict[Window, Fraction]:
        """Fixed-point values of every window, shortest windows first per end."""
        N: Dict[Window, Fraction] = {}
        theta, alpha, cap, idx = self.ctx.theta, self.ctx.alpha, self.n, self.idx
        for j in range(self.n):
            memo: dict = {}
            sup = Fraction(0)
            tail: Optional[Fraction] = None  # best over first minimum p > i
            for i in range(j, -1, -1):
                sup = max(sup, self.mods[i])
                if i == j:
                    N[(i, j)] = self.mods[i]
                    single = N[(i, j)]
                else:
                    multi = self._multi(N, j, memo, i)
                    cands = [v for v in (multi, tail) if v is not None]
                    N[(i, j)] = max(sup, theta * max(cands)) if cands else sup
                    single = N[(i, j)] if multi is None else max(N[(i, j)], multi)
                memo[(i, start_state(alpha, idx[i], cap))] = single
                tail = single if tail is None else max(tail, single)
        return N

    def iterate(self, prev: Dict[Window, Fraction]) -> Dict[Window, Fraction]:
        """One application of ``max(||.||_n, ||.||_{T_n})`` to every window."""
        N: Dict[Window, Fraction] = {}
        theta, alpha, cap, idx = self.ctx.theta, self.ctx.alpha, self.n, self.idx
        for j in range(self.n):
            memo: dict = {}
            tail: Optional[Fraction] = None
            for i in range(j, -1, -1):
                here = self._path_best(prev, j, memo, i, start_state(alpha, idx[i], cap))
                tail = here if tail is None else max(tail, here)
                N[(i, j)] = max(prev[(i, j)], theta * tail)
        return N

    def sup_table(self) -> Dict[Window, Fraction]:
        N = {}
        for j in range(self.n):
            sup = Fraction(0)
            for i in range(j, -1, -1):
                sup = max(sup, self.mods[i])
                N[(i, j)] = sup
        return N


def _windows(x: SparseVector, ctx: NormContext) -> _Windows:
    return _Windows(x.support, [abs(a) for a in x.coefficients], ctx)


def tsirelson_norm(x: SparseVector, ctx: NormContext) -> Fraction:
    if x.is_zero():
        return Fraction(0)
    if len(x) == 1:
        return abs(x.coefficients[0])
    w = _windows(x, ctx)
    return w.implicit()[(0, w.n - 1)]


def norm_iterates(x: SparseVector, ctx: NormContext, n: int) -> List[Fraction]:
    """``[||x||_0, ..., ||x||_n]``."""
    if n < 0:
        raise TsirelsonError("iterate index must be nonnegative")
    if x.is_zero():
        return [Fraction(0)] * (n + 1)
    w = _windows(x, ctx)
    table = w.sup_table()
    out = [table[(0, w.n - 1)]]
    for _ in range(n):
        table = w.iterate(table)
        out.append(table[(0, w.n - 1)])
    return out


def norm_iterate(x: SparseVector, ctx: NormContext, n: int) -> Fraction:
    return norm_iterates(x, ctx, n)[-1]


def stabilization_index(x: SparseVector, ctx: NormContext) -> int:
    """Smallest ``n`` with ``||x||_n`` equal to the norm.

    Every layer lets blocks nest one level deeper, and nesting depth is
    bounded by the support size, so ``len(x)`` layers always suffice.
    """
    target = tsirelson_norm(x, ctx)
    if x.is_zero():
        return 0
    w = _windows(x, ctx)
    table = w.sup_table()
    n = 0
    while table[(0, w.n - 1)] != target:
        if n > w.n:
            raise AssertionError(f"iterates of {x} did not reach {target}")
        table = w.iterate(table)
        n += 1
    return n


def normalize_to_sphere(x: SparseVector, ctx: NormContext) -> SparseVector:
    if x.is_zero():
        raise ZeroVectorError("the zero vector cannot be normalized")
    return x / tsirelson_norm(x, ctx)


# -- witnesses ----------------------------------------------------------------

def norm_with_witness(x: SparseVector, ctx: NormContext) -> Tuple[Fraction, NormWitness]:
    """The norm together with a certificate tree.

    Ties are broken towards a sup-norm leaf, then the fewest blocks, then the
    lexicographically smallest minima; leaves use the first index attaining
    the maximal modulus.
    """
    if x.is_zero():
        raise ZeroVectorError("the zero vector has no witness")
    w = _windows(x, ctx)
    N = w.implicit()
    return N[(0, w.n - 1)], _window_witness(w, N, 0, w.n - 1)


def _window_witness(w: _Windows, N, i: int, j: int) -> NormWitness:
    value = N[(i, j)]
    mods = w.mods[i:j + 1]
    sup = max(mods)
    if sup == value:
        return SupLeaf(w.idx[i + mods.index(sup)])
    theta, alpha, cap, idx = w.ctx.theta, w.ctx.alpha, w.n, w.idx
    target = value / theta

    memo: dict = {}

    def opt(p, state):
        # (best sum, fewest blocks for that sum) for paths from p ending at j
        key = (p, state)
        if key in memo:
            return memo[key]
        best = (N[(p, j)], 1)
        for q in range(p + 1, j + 1):
            nxt = push_state(alpha, state, idx[q], cap)
            if nxt is None:
                continue
            v, b = opt(q, nxt)
            cand = (N[(p, q - 1)] + v, b + 1)
            if cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                best = cand
        memo[key] = best
        return best

    def continuations(p, state):
        if p == i:
            # a single block equal to the whole window is not allowed at the root
            return [(q, push_state(alpha, state, idx[q], cap)) for q in range(p + 1, j + 1)]
        return [(None, None)] + [(q, push_state(alpha, state, idx[q], cap)) for q in range(p + 1, j + 1)]

    def option_value(p, q, nxt):
        if q is None:
            return (N[(p, j)], 1)
        if nxt is None:
            return None
        v, b = opt(q, nxt)
        return (N[(p, q - 1)] + v, b + 1)

    # choose the first minimum: fewest blocks overall, then smallest position
    best_blocks, first = None, None
    for p in range(i, j + 1):
        st = start_state(alpha, idx[p], cap)
        for q, nxt in continuations(p, st):
            ov = option_value(p, q, nxt)
            if ov is not None and ov[0] == target and (best_blocks is None or ov[1] < best_blocks):
                best_blocks, first = ov[1], p
    assert first is not None, "no partition attains the computed norm"

    minima = [first]
    p, state, remaining, need = first, start_state(alpha, idx[first], cap), best_blocks, target
    while True:
        for q, nxt in continuations(p, state):
            ov = option_value(p, q, nxt)
            if ov is not None and ov == (need, remaining):
                break
        else:
            raise AssertionError("witness reconstruction failed")
        if q is None:
            break
        need -= N[(p, q - 1)]
        remaining -= 1
        minima.append(q)
        p, state = q, nxt

    bounds = minima + [j + 1]
    blocks = tuple(tuple(idx[a:b]) for a, b in zip(bounds, bounds[1:]))
    children = tuple(_window_witness(w, N, a, b - 1) for a, b in zip(bounds, bounds[1:]))
    return Split(AdmissiblePartition(blocks), children)


# -- brute-force oracle -------------------------------------------------------

@lru_cache(maxsize=None)
def _families(width: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Every nonempty family ``E_1 < ... < E_d`` of subsets of ``{1..width}``.

    Each index is either unused, appended to the current block, or opens a
    new block.
    """
    out = []

    def walk(pos, blocks):
        if pos > width:
            if blocks:
                out.append(tuple(tuple(b) for b in blocks))
            return
        walk(pos + 1, blocks)
        if blocks:
            blocks[-1].append(pos)
            walk(pos + 1, blocks)
            blocks[-1].pop()
        blocks.append([pos])
        walk(pos + 1, blocks)
        blocks.pop()

    walk(1, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _admissible_families(window: Tuple[int, ...], alpha: Ordinal):
    fams = []
    for fam in _families(len(window)):
        blocks = tuple(tuple(window[k - 1] for k in b) for b in fam)
        if is_member_bruteforce(tuple(b[0] for b in blocks), alpha):
            fams.append(blocks)
    return tuple(fams)


def _oracle_window(support: Sequence[int]) -> Tuple[int, ...]:
    top = support[-1]
    if top <= _FULL_WINDOW_LIMIT:
        return tuple(range(1, top + 1))
    # sparse large indices: support plus the index just below each support point
    pts = set(support) | {i - 1 for i in support if i > 1}
    return tuple(sorted(pts))


def brute_force_norm(x: SparseVector, ctx: NormContext) -> Fraction:
    """The implicit norm by exhaustive search over all admissible families.

    No canonical form is assumed: blocks are arbitrary consecutive finite
    sets drawn from an index window (all of ``{1..max supp}`` for small
    supports), their minima need not be support points, and membership uses
    the definitional Schreier check.  Exponential; support size is capped.
    """
    if len(x) > BRUTE_FORCE_SUPPORT_LIMIT:
        raise TsirelsonError(f"brute force limited to support size {BRUTE_FORCE_SUPPORT_LIMIT}")
    if x.is_zero():
        return Fraction(0)
    window = _oracle_window(x.support)
    moduli = tuple((i, abs(a)) for i, a in x.entries)
    return _bf_value(moduli, window, ctx.theta, ctx.alpha)


@lru_cache(maxsize=None)
def _bf_value(moduli, window, theta, alpha) -> Fraction:
    if not moduli:
        return Fraction(0)
    sup = max(a for _, a in moduli)
    if len(moduli) == 1:
        return sup
    lookup = dict(moduli)
    best = sup
    for blocks in _admissible_families(window, alpha):
        total = Fraction(0)
        for b in blocks:
            part = tuple((i, lookup[i]) for i in b if i in lookup)
            if len(part) == len(moduli):
                # one block carrying all of x contributes theta*||x|| < ||x||
                total = None
                break
            if part:
                total += _bf_value(part, window, theta, alpha)
        if total is not None and theta * total > best:
            best = theta * total
    return best
