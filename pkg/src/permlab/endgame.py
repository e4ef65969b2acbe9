"""Endgame runs: carry heaviness from a mid-size minor to the full matrix.

Three stages, each exposing rows one at a time against the growing lattice:

- a path run extends one heavy column set level by level, preferring
  columns outside a protected block so the final set covers everything
  except (part of) the block;
- several path runs over disjoint protected blocks yield a family of heavy
  sets whose complements are pairwise disjoint;
- each further exposed row shrinks those complements by one (threshold
  divided by n per level), until the last row closes the full permanent via
  the cofactor expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .growth import ProcessConfig
from .lattice import DEFAULT_MAX_N, MinorTable, build_lattice, threshold_int
from .matrices import RowPrefix, SignMatrix, extend_prefix, sample_row
from .rng import RngStream, as_generator
from .subsets import bits_of, full_mask, popcount


class PreconditionError(ValueError):
    """A documented run precondition does not hold for the given inputs."""


RowSource = SignMatrix | RngStream | np.random.Generator


class ExposedLattice:
    """A row prefix plus its minor table, extended one exposed row at a time.

    Rows come either from a fixed matrix (deterministic runs) or from a
    random stream.
    """

    def __init__(self, prefix: RowPrefix, source: RowSource, max_n: int = DEFAULT_MAX_N):
        self.prefix = prefix
        self.table = build_lattice(prefix, max_n=max_n)
        if isinstance(source, SignMatrix):
            if source.n != prefix.n or not np.array_equal(source.entries[: prefix.k], prefix.rows):
                raise ValueError("matrix row source disagrees with the prefix rows")
            self._matrix: Optional[SignMatrix] = source
            self._gen = None
        else:
            self._matrix = None
            self._gen = as_generator(source)

    @property
    def n(self) -> int:
        return self.prefix.n

    @property
    def k(self) -> int:
        return self.prefix.k

    def expose_next(self) -> np.ndarray:
        if self.k >= self.n:
            raise ValueError("no next row: all rows exposed")
        if self._matrix is not None:
            row = self._matrix.row(self.k)
        else:
            row = sample_row(self.n, self._gen)
        self.prefix = extend_prefix(self.prefix, row)
        self.table.add_level(row)
        return row

    def is_heavy(self, mask: int, threshold) -> bool:
        return abs(self.table.value(mask)) >= threshold_int(threshold)


@dataclass(frozen=True)
class PathStep:
    j: int  # level being extended (the new set has j+1 columns)
    chosen: int  # column index added
    rule: str  # "outside" | "protected" | "fallback"
    heavy: bool  # new set heavy at the threshold
    remaining: int  # columns still outside (block | current set)


@dataclass
class PathResult:
    n: int
    start_k: int
    depth: int
    protected: int  # block mask
    threshold: float
    final_set: int
    heavy_set: Optional[int]  # final set iff heavy and it covers all non-block columns
    steps: list[PathStep] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.heavy_set is not None


def _validate_block(n: int, k: int, protected: int, depth: int) -> None:
    if protected >> n:
        raise PreconditionError("protected block has bits outside the column range")
    if protected & ((1 << k) - 1):
        raise PreconditionError("protected block must avoid the first k columns")
    if popcount(protected) != 2 * depth:
        raise PreconditionError(
            f"protected block must have exactly {2 * depth} columns, got {popcount(protected)}"
        )


def _choose_extension(exposed: ExposedLattice, current: int, protected: int,
                      tint: int) -> tuple[int, str]:
    """Smallest eligible column, preferring heavy outside, then heavy in the
    block, then any column at all (ties broken by index for determinism)."""
    n = exposed.n
    outside = full_mask(n) & ~(protected | current)
    for i in bits_of(outside):
        if abs(exposed.table.value(current | (1 << i))) >= tint:
            return i, "outside"
    for i in bits_of(protected & ~current):
        if abs(exposed.table.value(current | (1 << i))) >= tint:
            return i, "protected"
    return bits_of(full_mask(n) & ~current)[0], "fallback"


def run_endgame_path(prefix: RowPrefix, protected: int, threshold, cfg: ProcessConfig,
                     source: RowSource) -> PathResult:
    """Grow the leading k-column set to size n-L, avoiding the protected block.

    Requires the set of the first k columns to be heavy at the threshold
    (callers relabel columns to arrange this) and a block of 2L columns
    drawn from outside the first k.  Returns the final set; heavy_set is
    set only when it is verified heavy and contains every non-block column.
    """
    n = prefix.n
    k = prefix.k
    depth = cfg.endgame_depth(n)
    if k > n - depth:
        raise PreconditionError(f"start level {k} is above the target level {n - depth}")
    _validate_block(n, k, protected, depth)
    exposed = ExposedLattice(prefix, source)
    tint = threshold_int(threshold)
    start = (1 << k) - 1
    if abs(exposed.table.value(start)) < tint:
        raise PreconditionError("the leading k-column set is not heavy at the threshold")

    current = start
    result = PathResult(
        n=n, start_k=k, depth=depth, protected=protected, threshold=float(threshold),
        final_set=start, heavy_set=None,
    )
    for j in range(k, n - depth):
        exposed.expose_next()
        i, rule = _choose_extension(exposed, current, protected, tint)
        current |= 1 << i
        heavy = abs(exposed.table.value(current)) >= tint
        remaining = n - popcount(protected | current)
        result.steps.append(PathStep(j=j, chosen=i, rule=rule, heavy=heavy, remaining=remaining))
    result.final_set = current
    covers = (full_mask(n) & ~protected) & ~current == 0
    if covers and abs(exposed.table.value(current)) >= tint:
        result.heavy_set = current
    return result


@dataclass
class FamilyResult:
    n: int
    start_k: int
    depth: int
    threshold: float
    blocks: list[int]
    members: list[int]  # heavy sets found, one per successful block
    per_block: list[Optional[int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return len(self.members) == len(self.blocks)


def find_disjoint_heavy_family(prefix: RowPrefix, threshold, count: int, L: int,
                               cfg: ProcessConfig, source: RowSource) -> FamilyResult:
    """Run `count` path constructions over disjoint blocks, sharing rows.

    Blocks are consecutive 2L-column slices of the non-leading columns.  All
    paths see the same exposed rows.  Returned members are re-verified heavy
    and their complements re-verified pairwise disjoint.
    """
    n = prefix.n
    k = prefix.k
    if count < 1:
        raise ValueError("count must be at least 1")
    if count * 2 * L > n - k:
        raise PreconditionError(
            f"need {count * 2 * L} block columns but only {n - k} lie outside the first {k}"
        )
    blocks = []
    cols = list(range(k, n))
    for b in range(count):
        blocks.append(sum(1 << c for c in cols[2 * L * b : 2 * L * (b + 1)]))

    exposed = ExposedLattice(prefix, source)
    tint = threshold_int(threshold)
    start = (1 << k) - 1
    if abs(exposed.table.value(start)) < tint:
        raise PreconditionError("the leading k-column set is not heavy at the threshold")

    current = [start] * count
    for j in range(k, n - L):
        exposed.expose_next()
        for b in range(count):
            i, _ = _choose_extension(exposed, current[b], blocks[b], tint)
            current[b] |= 1 << i

    result = FamilyResult(
        n=n, start_k=k, depth=L, threshold=float(threshold), blocks=blocks, members=[],
        per_block=[None] * count,
    )
    for b in range(count):
        covers = (full_mask(n) & ~blocks[b]) & ~current[b] == 0
        if covers and abs(exposed.table.value(current[b])) >= tint:
            result.per_block[b] = current[b]
            result.members.append(current[b])
    _verify_family(exposed.table, result.members, tint, n)
    return result


def _verify_family(table: MinorTable, members: list[int], tint: int, n: int) -> None:
    """Exact postcondition check: heavy members, pairwise-disjoint complements."""
    union = 0
    total = 0
    for m in members:
        comp = full_mask(n) & ~m
        union |= comp
        total += popcount(comp)
        if abs(table.value(m)) < tint:
            raise AssertionError("family member failed the heaviness recheck")
    if popcount(union) != total:
        raise AssertionError("family complements are not pairwise disjoint")


def complements_disjoint(members, n: int) -> bool:
    union = 0
    total = 0
    for m in members:
        comp = full_mask(n) & ~int(m)
        union |= comp
        total += popcount(comp)
    return popcount(union) == total


@dataclass
class PropagateResult:
    prefix: RowPrefix  # with the newly exposed row
    children: list[int]  # one chosen child per input member
    kept: list[int]  # children heavy at the reduced threshold
    new_threshold: Fraction
    good_children: int  # children with at least t_good heavy parents (diagnostic)

    @property
    def retained_fraction(self) -> float:
        return len(self.kept) / len(self.children) if self.children else 0.0


def propagate_down(prefix: RowPrefix, members, threshold, cfg: ProcessConfig,
                   source: RowSource) -> PropagateResult:
    """Expose one row and push a complement-disjoint family up one level.

    Each member gets one child (smallest absent column); the new threshold
    is the old one divided by n.  Returns the children found heavy at the
    reduced threshold; their complements stay disjoint by construction and
    are re-verified.
    """
    n = prefix.n
    members = [int(m) for m in members]
    if prefix.k >= n:
        raise ValueError("no next row: all rows exposed")
    for m in members:
        if popcount(m) != prefix.k:
            raise ValueError("family members must sit at the exposed level")
    if not complements_disjoint(members, n):
        raise PreconditionError("family complements must be pairwise disjoint")

    exposed = ExposedLattice(prefix, source)
    exposed.expose_next()
    new_threshold = Fraction(threshold) / n
    tint = threshold_int(new_threshold)

    children = []
    for m in members:
        missing = bits_of(full_mask(n) & ~m)[0]
        children.append(m | (1 << missing))
    kept = [ch for ch in children if abs(exposed.table.value(ch)) >= tint]
    if not complements_disjoint(kept, n):
        raise AssertionError("kept children lost complement disjointness")

    t_good = cfg.good_child_threshold(n)
    good = 0
    for ch in children:
        heavy_parents = sum(
            1 for i in bits_of(ch) if abs(exposed.table.value(ch ^ (1 << i))) >= tint
        )
        if heavy_parents >= t_good:
            good += 1
    return PropagateResult(
        prefix=exposed.prefix,
        children=children,
        kept=kept,
        new_threshold=new_threshold,
        good_children=good,
    )


@dataclass(frozen=True)
class FinalRowResult:
    permanent: int
    heavy: bool
    threshold: float


def final_row_heaviness(prefix: RowPrefix, threshold_final, source: RowSource) -> FinalRowResult:
    """Expose the last row and close the full permanent via the cofactor step."""
    n = prefix.n
    if prefix.k != n - 1:
        raise ValueError(f"final-row step needs exactly n-1 = {n - 1} rows, got {prefix.k}")
    exposed = ExposedLattice(prefix, source)
    exposed.expose_next()
    per = exposed.table.top_value()
    heavy = abs(per) >= threshold_int(threshold_final)
    return FinalRowResult(permanent=per, heavy=heavy, threshold=float(threshold_final))
