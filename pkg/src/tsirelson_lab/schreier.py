"""Schreier families ``S_alpha`` for ordinals ``alpha < omega * 2``.

Recursive definition used throughout:

* ``S_0`` is the family of sets with at most one element;
* ``S_{b+1}`` consists of unions ``F_1 < ... < F_d`` of ``S_b``-sets with
  ``d <= min F_1``;
* ``S_omega`` uses the cofinal sequence ``alpha_n = n`` (so ``beta_n = n - 1``):
  ``F`` is a member iff ``F`` lies in ``S_n`` for some ``n <= min F``.
  Since ``S_n`` is contained in ``S_{n+1}`` (take ``d = 1``) this is the same as
  ``F in S_{min F}``, which is what :func:`is_member` tests.  The definitional
  search over every admissible ``n`` lives in :func:`is_member_bruteforce` and
  the test-suite checks the two agree.

The empty set belongs to every family.

Membership is decided by an online greedy automaton.  For a successor
``b + 1`` the fewest ``S_b``-blocks needed to cover ``F`` are obtained by
always extending the current block while it stays in ``S_b``.  This is optimal
because ``S_b`` is hereditary: if an optimal cover has a shorter first block,
enlarging it and shrinking the later blocks keeps every block in ``S_b``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .core import IndexSet, ParseError, TsirelsonError, index_set

ENUMERATION_BOUND = 16

_ORDINAL = re.compile(r"(?:(\d+)|[wω](?:\s*\+\s*(\d+))?)")


@dataclass(frozen=True, order=True)
class Ordinal:
    """``omega * omegas + n`` with ``omegas`` in ``{0, 1}``.

    Field order makes the generated comparison the ordinal order.
    """

    omegas: int
    n: int

    def __post_init__(self):
        if self.omegas not in (0, 1) or self.n < 0:
            raise TsirelsonError(f"unsupported ordinal omega*{self.omegas}+{self.n}")

    @classmethod
    def finite(cls, n: int) -> "Ordinal":
        return cls(0, n)

    @classmethod
    def omega_plus(cls, n: int = 0) -> "Ordinal":
        return cls(1, n)

    @property
    def is_zero(self) -> bool:
        return self.omegas == 0 and self.n == 0

    @property
    def is_limit(self) -> bool:
        return self.omegas == 1 and self.n == 0

    @property
    def is_successor(self) -> bool:
        return self.n > 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise TsirelsonError(f"{self} has no predecessor")
        return Ordinal(self.omegas, self.n - 1)

    def __str__(self) -> str:
        if self.omegas == 0:
            return str(self.n)
        return "w" if self.n == 0 else f"w+{self.n}"


OMEGA = Ordinal.omega_plus(0)


def parse_ordinal(text: str) -> Ordinal:
    """``"3"`` -> 3, ``"w"`` -> omega, ``"w+2"`` -> omega + 2."""
    m = _ORDINAL.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"malformed ordinal {text!r} (expected n, w or w+n)")
    if m.group(1) is not None:
        return Ordinal.finite(int(m.group(1)))
    return Ordinal.omega_plus(int(m.group(2) or 0))


def fundamental_term(alpha: Ordinal, n: int) -> Ordinal:
    """The ``n``-th term ``alpha_n`` of the cofinal sequence of a limit ordinal."""
    if not alpha.is_limit:
        raise TsirelsonError(f"{alpha} is not a limit ordinal")
    if n < 1:
        raise TsirelsonError("cofinal sequences are indexed from 1")
    return Ordinal.finite(n)


# -- greedy automaton -------------------------------------------------------
#
# A state describes a nonempty set G in S_alpha read left to right:
#   order 0           -> FULL (no further element fits)
#   successor b+1     -> (r, inner): r more S_b-blocks may still be opened,
#                        inner is the state of the current S_b-block
#   omega             -> (n, inner): G is tracked as a member of S_n, n = min G
# ``cap`` bounds how many elements can still arrive; counters are clipped to it
# so that states with identical futures compare equal (used as memo keys).

FULL = 0


def start_state(alpha: Ordinal, first: int, cap: Optional[int] = None):
    if alpha.is_zero:
        return FULL
    if alpha.is_limit:
        # any set with min >= cap and at most cap elements is in S_1
        n = first if cap is None else min(first, cap)
        return (n, start_state(Ordinal.finite(n), first, cap))
    r = first - 1 if cap is None else min(first - 1, cap)
    return (r, start_state(alpha.predecessor(), first, cap))


def push_state(alpha: Ordinal, state, e: int, cap: Optional[int] = None):
    """State after appending ``e`` (larger than every element so far), or None."""
    if alpha.is_zero:
        return None
    if alpha.is_limit:
        n, inner = state
        inner = push_state(Ordinal.finite(n), inner, e, cap)
        return None if inner is None else (n, inner)
    beta = alpha.predecessor()
    r, inner = state
    nxt = push_state(beta, inner, e, cap)
    if nxt is not None:
        return (r, nxt)
    if r == 0:
        return None
    return (r - 1, start_state(beta, e, cap))


def is_member(F: Sequence[int], alpha: Ordinal) -> bool:
    F = tuple(F)
    if not F:
        return True
    cap = len(F)
    state = start_state(alpha, F[0], cap)
    for e in F[1:]:
        state = push_state(alpha, state, e, cap)
        if state is None:
            return False
    return True


def _prefix_end(F: Sequence[int], s: int, alpha: Ordinal) -> int:
    """End (exclusive) of the longest prefix of ``F[s:]`` lying in ``S_alpha``."""
    state = start_state(alpha, F[s])
    e = s + 1
    while e < len(F):
        state = push_state(alpha, state, F[e])
        if state is None:
            break
        e += 1
    return e


def min_blocks(F: Sequence[int], alpha: Ordinal) -> int:
    """Fewest consecutive ``S_alpha``-sets whose union is ``F``."""
    count, s = 0, 0
    while s < len(F):
        s = _prefix_end(F, s, alpha)
        count += 1
    return count


@dataclass(frozen=True)
class Decomposition:
    blocks: Tuple[IndexSet, ...]
    order: Ordinal


def decompose(F: Sequence[int], alpha: Ordinal) -> Optional[Decomposition]:
    """Split ``F`` into ``d <= min F`` consecutive ``S_beta``-sets, ``alpha = beta + 1``.

    Returns the decomposition whose vector of cut positions is
    lexicographically smallest, or None when ``F`` is not in ``S_alpha``.
    For ``alpha = omega`` the witness is taken in ``S_{min F}``.
    """
    F = index_set(F)
    if not F:
        raise TsirelsonError("decompose needs a nonempty set")
    if alpha.is_zero:
        raise TsirelsonError("S_0 has no block decomposition")
    if alpha.is_limit:
        alpha = fundamental_term(alpha, F[0])
    beta = alpha.predecessor()
    budget = F[0]
    if min_blocks(F, beta) > budget:
        return None
    blocks: List[IndexSet] = []
    s = 0
    while True:
        rest = F[s:]
        if is_member(rest, beta):
            blocks.append(rest)
            break
        cut = None
        for p in range(s + 1, len(F)):
            if not is_member(F[s:p], beta):
                break
            if 1 + min_blocks(F[p:], beta) <= budget:
                cut = p
                break
        # feasibility was checked against the greedy count, so a cut exists
        assert cut is not None
        p = cut
        blocks.append(F[s:p])
        budget -= 1
        s = p
    return Decomposition(tuple(blocks), beta)


def enumerate_members(alpha: Ordinal, N: int, bound: int = ENUMERATION_BOUND) -> List[IndexSet]:
    """Every subset of ``{1..N}`` in ``S_alpha``, ordered by size then lexicographically."""
    if N > bound:
        raise TsirelsonError(f"enumeration bound exceeded: N={N} > {bound}")
    out = []
    for size in range(N + 1):
        for F in itertools.combinations(range(1, N + 1), size):
            if is_member(F, alpha):
                out.append(F)
    return out


def maximal_interval_end(m: int, alpha: Ordinal, limit: Optional[int] = None) -> Optional[int]:
    """``L`` such that ``[m, L)`` is the longest interval from ``m`` in ``S_alpha``.

    Pure arithmetic (``L = m + 1`` for order 0, ``2m`` for order 1, ``m * 2**m``
    for order 2, ...).  Returns None once the length would exceed ``limit``.
    """
    if limit is not None and not alpha.is_zero and _interval_lower_bound(m, alpha) > limit:
        return None
    if alpha.is_zero:
        end = m + 1
    elif alpha.is_limit:
        return maximal_interval_end(m, Ordinal.finite(m), limit)
    elif alpha == Ordinal.finite(1):
        end = 2 * m
    else:
        beta = alpha.predecessor()
        end = m
        for _ in range(m):
            room = None if limit is None else limit - (end - m)
            nxt = maximal_interval_end(end, beta, room)
            if nxt is None:
                return None
            end = nxt
            if limit is not None and end - m > limit:
                return None
    if limit is not None and end - m > limit:
        return None
    return end


def run_interval(alpha: Ordinal, state, start: int, limit: Optional[int] = None) -> Optional[int]:
    """Feed ``start, start + 1, ...`` to an uncapped automaton ``state``.

    Returns the first index whose push fails, or None when more than
    ``limit`` indices would be accepted.
    """
    if alpha.is_zero:
        return start
    if alpha.is_limit:
        n, inner = state
        return run_interval(Ordinal.finite(n), inner, start, limit)
    beta = alpha.predecessor()
    r, inner = state
    end = run_interval(beta, inner, start, limit)
    for _ in range(r):
        if end is None:
            return None
        room = None if limit is None else limit - (end - start)
        end = maximal_interval_end(end, beta, room)
    if end is not None and limit is not None and end - start > limit:
        return None
    return end


def _interval_lower_bound(m: int, alpha: Ordinal) -> int:
    # length of the maximal interval is m for order 1 and m * (2**m - 1) from order 2 on
    if alpha <= Ordinal.finite(1) or (alpha.is_limit and m < 2):
        return m
    k = min(m, 64)
    return k * (2 ** k - 1)


class ConstructionTooLarge(TsirelsonError):
    pass


def greedy_maximal(m: int, alpha: Ordinal, limit: int = 1_000_000) -> IndexSet:
    """Start from ``{m}`` and append ``max + 1`` while the set stays in ``S_alpha``.

    By the spreading property appending ``max + 1`` is the best possible
    extension, so the result is maximal and always an interval.
    """
    if alpha < Ordinal.finite(1):
        raise TsirelsonError("greedy_maximal needs alpha >= 1")
    end = maximal_interval_end(m, alpha, limit)
    if end is None:
        raise ConstructionTooLarge(f"maximal S_{alpha}-set from {m} has more than {limit} elements")
    return tuple(range(m, end))


def is_maximal(F: Sequence[int], alpha: Ordinal) -> bool:
    """Whether no ``j > max F`` can be added to ``F`` inside ``S_alpha``.

    Only ``max F + 1`` is tried: if ``F + {j}`` were a member for some larger
    ``j``, spreading would make ``F + {max F + 1}`` a member as well.
    """
    F = index_set(F)
    if not is_member(F, alpha):
        raise TsirelsonError(f"{F} is not in S_{alpha}")
    if not F:
        return False
    return not is_member(F + (F[-1] + 1,), alpha)


# -- regularity ---------------------------------------------------------------

@dataclass(frozen=True)
class RegularityReport:
    alpha: Ordinal
    N: int
    passed: bool
    members: int
    property: Optional[str] = None
    counterexample: Optional[Tuple[IndexSet, IndexSet]] = None


def check_regularity(alpha: Ordinal, N: int, bound: int = ENUMERATION_BOUND) -> RegularityReport:
    """Exhaustively test hereditary and spreading on subsets of ``{1..N}``.

    Removing one element, and raising one element by one while staying
    strictly increasing and inside ``{1..N}``, generate every subset and every
    right-shift respectively, so closure under these moves is equivalent to
    the full properties on ``{1..N}``.  A counterexample is ``(member, image)``.
    """
    members = set(enumerate_members(alpha, N, bound))
    for F in sorted(members, key=lambda s: (len(s), s)):
        for k in range(len(F)):
            G = F[:k] + F[k + 1:]
            if G not in members:
                return RegularityReport(alpha, N, False, len(members), "hereditary", (F, G))
        for k in range(len(F)):
            nxt = F[k + 1] if k + 1 < len(F) else N + 1
            if F[k] + 1 < nxt:
                G = F[:k] + (F[k] + 1,) + F[k + 1:]
                if G not in members:
                    return RegularityReport(alpha, N, False, len(members), "spreading", (F, G))
    return RegularityReport(alpha, N, True, len(members))


# -- definitional oracle -----------------------------------------------------

@lru_cache(maxsize=None)
def _bruteforce(F: IndexSet, alpha: Ordinal) -> bool:
    if not F:
        return True
    if alpha.is_zero:
        return len(F) <= 1
    if alpha.is_limit:
        return any(_bruteforce(F, fundamental_term(alpha, n)) for n in range(1, F[0] + 1))
    beta = alpha.predecessor()
    for d in range(1, min(F[0], len(F)) + 1):
        for cuts in itertools.combinations(range(1, len(F)), d - 1):
            bounds = (0,) + cuts + (len(F),)
            if all(_bruteforce(F[a:b], beta) for a, b in zip(bounds, bounds[1:])):
                return True
    return False


def is_member_bruteforce(F: Sequence[int], alpha: Ordinal) -> bool:
    """Membership straight from the recursive definition, trying every split."""
    return _bruteforce(index_set(F), alpha)
