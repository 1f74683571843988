"""Mirror symmetrization of partitions of an even cyclic ground set.

The half-turn mirror around the cut between k and k+1 sends i to 2k+1-i.
The symmetrization of a partition keeps the half-interval ending at k,
replaces the other half by its mirror image, and reconnects blocks that
crossed the cut.  Iterating these maps drives every admissible partition
into a small family of fully symmetric terminal partitions; the block count
of the pair-collapsed partition is conserved on average, which yields exact
absorption probabilities for the induced Markov chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from .partitions import (
    Partition,
    cyclic_index,
    discrete,
    format_partition,
    full,
    interval_pairing,
    is_noncrossing,
    collapse_pairs,
    restrict,
    shifted_pairing,
)

ABSORPTION_STATE_CAP = 100_000


@dataclass(frozen=True)
class GridShape:
    """Layout of {1..2dm} into 2m intervals of size d with mirrored labels.

    Interval k holds positions (k-1)d+1 .. kd; its positions are labelled
    1..d when k is odd and d..1 when k is even, so that each label class
    A_i has one element per interval (2m elements in total).
    """

    d: int
    m: int

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ValueError("need d >= 1 and m >= 1, got d=%d m=%d" % (self.d, self.m))

    @property
    def n(self) -> int:
        return 2 * self.d * self.m

    def interval_of(self, pos: int) -> int:
        return (pos - 1) // self.d + 1

    def label_of(self, pos: int) -> int:
        k = self.interval_of(pos)
        offset = pos - (k - 1) * self.d
        return offset if k % 2 == 1 else self.d + 1 - offset

    def label_class(self, i: int) -> tuple:
        """The 2m positions carrying label i, ascending."""
        if not 1 <= i <= self.d:
            raise ValueError("label %d outside 1..%d" % (i, self.d))
        out = []
        for k in range(1, 2 * self.m + 1):
            offset = i if k % 2 == 1 else self.d + 1 - i
            out.append((k - 1) * self.d + offset)
        return tuple(out)

    def interval(self, k: int) -> tuple:
        if not 1 <= k <= 2 * self.m:
            raise ValueError("interval index %d outside 1..%d" % (k, 2 * self.m))
        return tuple(range((k - 1) * self.d + 1, k * self.d + 1))


def apply_symmetry(p: Partition, k: int) -> Partition:
    """Relabel p by the mirror i -> 2k+1-i of {1..2N}."""
    if p.n % 2 != 0:
        raise ValueError("ground size must be even, got %d" % p.n)
    n = p.n
    blocks = [tuple(cyclic_index(2 * k + 1 - i, n) for i in b) for b in p.blocks]
    return Partition(n, blocks)


def half_interval(k: int, n: int) -> frozenset:
    """The length-N subinterval of {1..2N} ending at k (N = n/2)."""
    half = n // 2
    return frozenset(cyclic_index(k - j, n) for j in range(half))


def symmetrize(p: Partition, k: int) -> Partition:
    """Symmetrize p around the cut after position k.

    Blocks meeting the half ending at k are kept there; a block entirely
    inside that half also spawns a detached mirror copy, while a block that
    crossed the cut is reconnected through the mirror.  The result is always
    invariant under the mirror and the map is idempotent at fixed k.
    """
    if p.n % 2 != 0:
        raise ValueError("ground size must be even, got %d" % p.n)
    n = p.n
    k = cyclic_index(k, n)
    inside = half_interval(k, n)
    blocks = []
    for v in p.blocks:
        kept = [x for x in v if x in inside]
        if not kept:
            continue
        mirror = [cyclic_index(2 * k + 1 - x, n) for x in kept]
        if len(kept) == len(v):
            blocks.append(tuple(kept))
            blocks.append(tuple(mirror))
        else:
            blocks.append(tuple(kept) + tuple(mirror))
    return Partition(n, blocks)


@dataclass(frozen=True, order=True)
class TerminalKind:
    """Tag for a symmetrization fixed point.

    family "level" with level l: all label classes carry the shifted pairing
    up to l and the interval pairing above l; "glued" with level l:
    the class at l is fully connected instead; "discrete" is the all-singleton
    outcome, reachable only for partitions with odd blocks (d = 1 only).
    """

    family: str
    level: int

    def __str__(self) -> str:
        if self.family == "discrete":
            return "discrete"
        return "%s_%d" % (self.family, self.level)


def level_terminal(g: GridShape, l: int) -> Partition:
    """Terminal with shifted pairings on labels <= l, interval pairings above."""
    if not 0 <= l <= g.d:
        raise ValueError("level %d outside 0..%d" % (l, g.d))
    blocks = []
    for i in range(1, g.d + 1):
        pattern = shifted_pairing(g.m) if i <= l else interval_pairing(g.m)
        blocks.extend(_lift_blocks(pattern, g.label_class(i)))
    return Partition(g.n, blocks)


def glued_level_terminal(g: GridShape, l: int) -> Partition:
    """Terminal with the label-l class fully connected."""
    if not 1 <= l <= g.d:
        raise ValueError("level %d outside 1..%d" % (l, g.d))
    blocks = []
    for i in range(1, g.d + 1):
        if i < l:
            pattern = shifted_pairing(g.m)
        elif i == l:
            pattern = full(2 * g.m)
        else:
            pattern = interval_pairing(g.m)
        blocks.extend(_lift_blocks(pattern, g.label_class(i)))
    return Partition(g.n, blocks)


def _lift_blocks(pattern: Partition, positions: tuple) -> list:
    return [tuple(positions[x - 1] for x in b) for b in pattern.blocks]


def terminal_partitions(g: GridShape) -> Dict[TerminalKind, Partition]:
    """The 2d+1 terminal partitions, keyed by kind."""
    out = {}
    for l in range(g.d + 1):
        out[TerminalKind("level", l)] = level_terminal(g, l)
    for l in range(1, g.d + 1):
        out[TerminalKind("glued", l)] = glued_level_terminal(g, l)
    return out


def cascade_indices(g: GridShape) -> list:
    """Order of symmetrization cuts guaranteed to reach a terminal.

    First the cut at md, then cuts at d*2^j for j = 0, 1, ... until
    2^j >= m.
    """
    out = [g.m * g.d]
    j = 0
    while True:
        out.append(g.d * (2 ** j))
        if 2 ** j >= g.m:
            return out
        j += 1


def symmetrize_terminal(p: Partition, g: GridShape) -> Tuple[TerminalKind, Partition]:
    """Run the symmetrization cascade and classify the resulting fixed point."""
    if p.n != g.n:
        raise ValueError("partition on [%d] does not match grid on [%d]" % (p.n, g.n))
    q = p
    for k in cascade_indices(g):
        q = symmetrize(q, k)
    terminals = terminal_partitions(g)
    for kind in sorted(terminals):
        if q == terminals[kind]:
            return kind, q
    if g.d == 1 and q == discrete(g.n):
        return TerminalKind("discrete", 0), q
    raise ValueError(
        "cascade did not reach a terminal from %s (got %s)"
        % (format_partition(p), format_partition(q))
    )


def _require_even_nc(p: Partition) -> None:
    if p.n % 2 != 0 or any(len(b) % 2 for b in p.blocks):
        raise ValueError("partition must have even blocks: %s" % format_partition(p))
    if not is_noncrossing(p):
        raise ValueError("partition must be non-crossing: %s" % format_partition(p))


def collapse_block_count(p: Partition) -> int:
    """Block count of the pair-collapsed partition (even-block NC input)."""
    _require_even_nc(p)
    return collapse_pairs(p).num_blocks


def check_collapse_martingale(p: Partition, k: int) -> Tuple[int, int]:
    """Collapsed block counts after symmetrizing at cut k and at the
    opposite cut k+m; their mean must equal the count of p itself."""
    _require_even_nc(p)
    m = p.n // 2
    left = symmetrize(p, k)
    right = symmetrize(p, cyclic_index(k + m, p.n))
    b_left = collapse_block_count(left)
    b_right = collapse_block_count(right)
    if b_left + b_right != 2 * collapse_block_count(p):
        raise AssertionError(
            "block-count invariant violated at k=%d for %s" % (k, format_partition(p))
        )
    return b_left, b_right


def collapse_count_profile(p: Partition, g: GridShape) -> tuple:
    """Collapsed block counts of the label-class restrictions, padded with
    the boundary conventions: index l runs 0..d+1 with the ends pinned to
    1 and m."""
    inner = [collapse_block_count(restrict(p, g.label_class(i))) for i in range(1, g.d + 1)]
    return tuple([1] + inner + [g.m])


def level_exponents(p: Partition, g: GridShape) -> tuple:
    """Exact profile increments divided by m-1, for levels 0..d; nonnegative
    and summing to 1."""
    if g.m < 2:
        raise ValueError("exponents are undefined for m=1")
    prof = collapse_count_profile(p, g)
    return tuple(Fraction(prof[l + 1] - prof[l], g.m - 1) for l in range(g.d + 1))


def absorption_probabilities(
    p: Partition, g: GridShape, state_cap: int = ABSORPTION_STATE_CAP
) -> Dict[TerminalKind, Fraction]:
    """Exact absorption distribution of the uniform-cut symmetrization chain.

    One step picks i uniformly in {1..2m} and applies the symmetrization at
    cut i*d.  The reachable state graph is finite; absorption probabilities
    into each terminal are obtained by solving the linear system in rational
    arithmetic.
    """
    terminals = terminal_partitions(g)
    terminal_lookup = {part: kind for kind, part in terminals.items()}
    cuts = [i * g.d for i in range(1, 2 * g.m + 1)]

    # Breadth-first closure of the reachable states.
    succ = {}
    frontier = [p]
    while frontier:
        state = frontier.pop()
        if state in succ or state in terminal_lookup:
            continue
        images = [symmetrize(state, k) for k in cuts]
        succ[state] = images
        if len(succ) > state_cap:
            raise ValueError("reachable state graph exceeds cap %d" % state_cap)
        frontier.extend(img for img in images if img not in succ)

    kinds = sorted(terminals)
    if p in terminal_lookup:
        return {kind: Fraction(kind == terminal_lookup[p]) for kind in kinds}

    # x_s = mean of x over images, images into terminals contribute constants.
    states = sorted(succ, key=format_partition)
    index = {s: i for i, s in enumerate(states)}
    nstates = len(states)
    weight = Fraction(1, 2 * g.m)
    rows = []
    for s in states:
        row = [Fraction(0)] * nstates + [Fraction(0)] * len(kinds)
        row[index[s]] += 1
        for img in succ[s]:
            if img in terminal_lookup:
                row[nstates + kinds.index(terminal_lookup[img])] += weight
            else:
                row[index[img]] -= weight
        rows.append(row)
    solution = _solve_fraction_system(rows, nstates, len(kinds))
    probs = solution[index[p]]
    return {kind: probs[t] for t, kind in enumerate(kinds)}


def _solve_fraction_system(rows: list, nvars: int, nrhs: int) -> list:
    """Gauss-Jordan over Fractions for [A | B]; returns A^{-1} B row-wise."""
    for col in range(nvars):
        pivot = next(r for r in range(col, nvars) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col]
        rows[col] = [v / inv for v in rows[col]]
        for r in range(nvars):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [row[nvars:] for row in rows]
