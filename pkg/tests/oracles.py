"""Independent brute-force oracles for the test suite.

Everything here is deliberately written the slow, obvious way (itertools
loops over permutations / sign assignments / subsets) so it shares no code
path with the engines it checks.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations, product


def brute_permanent(entries) -> int:
    """Sum over all permutations of the product of picked entries."""
    n = len(entries)
    return sum(
        math.prod(entries[i][sigma[i]] for i in range(n))
        for sigma in permutations(range(n))
    )


def brute_determinant(entries) -> int:
    n = len(entries)
    total = 0
    for sigma in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j]
        )
        total += (-1) ** inversions * math.prod(entries[i][sigma[i]] for i in range(n))
    return total


def brute_minor_permanent(matrix, cols) -> int:
    """Permanent of the minor on the first len(cols) rows and the given columns."""
    cols = sorted(cols)
    sub = [[int(matrix.entries[r][c]) for c in cols] for r in range(len(cols))]
    return brute_permanent(sub)


def brute_heavy_sets(matrix, k: int, threshold) -> list[int]:
    """Masks of all size-k column sets whose minor permanent reaches threshold."""
    n = matrix.n
    out = []
    for cols in combinations(range(n), k):
        if abs(brute_minor_permanent(matrix, cols)) >= threshold:
            out.append(sum(1 << c for c in cols))
    return sorted(out)


def brute_parent_counts(family_masks, n: int) -> dict[int, int]:
    """child mask -> number of family members it extends by one column."""
    counts: dict[int, int] = {}
    for mask in family_masks:
        for i in range(n):
            if not (int(mask) >> i) & 1:
                child = int(mask) | (1 << i)
                counts[child] = counts.get(child, 0) + 1
    return counts


def brute_signed_sums(v) -> list[float]:
    """All 2**m values of +-v_1 +- ... +- v_m."""
    return [sum(s * x for s, x in zip(signs, v)) for signs in product((1, -1), repeat=len(v))]


def brute_max_interval_count(sums, length) -> int:
    """Max number of sums inside any open interval of the given length."""
    s = sorted(sums)
    best = 0
    for a in s:
        best = max(best, sum(1 for x in s if a <= x < a + length))
    return best
