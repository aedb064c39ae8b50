"""String similarity scorers for headline comparison.

The default scorer is the Ratcliff/Obershelp gestalt ratio
``2 * M / (len(a) + len(b))`` where ``M`` totals the characters matched
by recursively taking the longest common substring and descending into
the unmatched flanks.  Ties between equally long substrings are broken
by the earliest position in ``a``, then in ``b``, which makes the score
deterministic and keeps it in line with the conventional sequence
matcher behaviour.

Scorers are plain callables ``(str, str) -> float`` registered by name,
so alternatives can be swapped in experimentally.
"""

from __future__ import annotations

from typing import Callable

Scorer = Callable[[str, str], float]


def _longest_match(
    a: str, b: str, a_lo: int, a_hi: int, b_lo: int, b_hi: int
) -> tuple[int, int, int]:
    """Longest common substring of a[a_lo:a_hi] and b[b_lo:b_hi].

    Returns (start_in_a, start_in_b, length); ties resolve to the
    smallest start in ``a``, then the smallest start in ``b``.
    """
    best_i, best_j, best_size = a_lo, b_lo, 0
    # lengths[j] = length of the common suffix ending at (i, j)
    lengths: dict[int, int] = {}
    for i in range(a_lo, a_hi):
        new_lengths: dict[int, int] = {}
        ch = a[i]
        for j in range(b_lo, b_hi):
            if b[j] == ch:
                k = lengths.get(j - 1, 0) + 1
                new_lengths[j] = k
                if k > best_size:
                    best_i, best_j, best_size = i - k + 1, j - k + 1, k
        lengths = new_lengths
    return best_i, best_j, best_size


def gestalt_matches(a: str, b: str) -> int:
    """Total characters matched by recursive longest-common-substring."""
    total = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        a_lo, a_hi, b_lo, b_hi = stack.pop()
        if a_lo >= a_hi or b_lo >= b_hi:
            continue
        i, j, size = _longest_match(a, b, a_lo, a_hi, b_lo, b_hi)
        if size == 0:
            continue
        total += size
        stack.append((a_lo, i, b_lo, j))
        stack.append((i + size, a_hi, j + size, b_hi))
    return total


def gestalt_ratio(a: str, b: str) -> float:
    """Ratcliff/Obershelp similarity in [0, 1]; two empty strings score 1."""
    total_len = len(a) + len(b)
    if total_len == 0:
        return 1.0
    return 2.0 * gestalt_matches(a, b) / total_len


def lcs_ratio(a: str, b: str) -> float:
    """Longest-common-subsequence length over mean length."""
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    prev = [0] * (len(b) + 1)
    for ch in a:
        cur = [0]
        for j, bh in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if ch == bh else max(prev[j], cur[j - 1]))
        prev = cur
    return 2.0 * prev[-1] / (len(a) + len(b))


def token_jaccard(a: str, b: str) -> float:
    """Jaccard overlap of whitespace token sets."""
    sa, sb = set(a.split()), set(b.split())
    if not sa and not sb:
        return 1.0
    union = sa | sb
    return len(sa & sb) / len(union)


SCORERS: dict[str, Scorer] = {
    "gestalt": gestalt_ratio,
    "lcs": lcs_ratio,
    "jaccard": token_jaccard,
}


def get_scorer(name: str) -> Scorer:
    try:
        return SCORERS[name]
    except KeyError:
        raise KeyError(
            f"unknown scorer {name!r}; available: {', '.join(sorted(SCORERS))}"
        ) from None
