"""Canonical set partitions of the cyclic ground set {1..n}.

Elements are 1-based and arithmetic on positions is cyclic: position 0 is
identified with n.  Partitions are stored in a unique canonical form (blocks
sorted by minimum, elements ascending), so equality and hashing are
structural.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

NC_ENUMERATION_CAP = 14


def cyclic_index(i: int, n: int) -> int:
    """Reduce an integer into {1..n} with 0 identified with n."""
    return ((i - 1) % n) + 1


class Partition:
    """A set partition of {1..n} in canonical block form."""

    __slots__ = ("n", "blocks", "_block_id")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]]):
        if n < 1:
            raise ValueError("ground size must be positive, got %r" % (n,))
        canon = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        seen = [False] * (n + 1)
        for b in canon:
            if not b:
                raise ValueError("empty block")
            for x in b:
                if not isinstance(x, int) or not 1 <= x <= n:
                    raise ValueError("element %r out of range 1..%d" % (x, n))
                if seen[x]:
                    raise ValueError("element %d appears twice" % x)
                seen[x] = True
        missing = [x for x in range(1, n + 1) if not seen[x]]
        if missing:
            raise ValueError("elements missing from partition: %s" % missing)
        self.n = n
        self.blocks = tuple(canon)
        self._block_id = self._index(n, self.blocks)

    @staticmethod
    def _index(n: int, blocks: tuple) -> tuple:
        bid = [0] * n
        for j, b in enumerate(blocks):
            for x in b:
                bid[x - 1] = j
        return tuple(bid)

    @classmethod
    def _trusted(cls, n: int, blocks: tuple) -> "Partition":
        """Build from already-canonical blocks, skipping validation."""
        p = object.__new__(cls)
        p.n = n
        p.blocks = blocks
        p._block_id = cls._index(n, blocks)
        return p

    def block_id(self, i: int) -> int:
        return self._block_id[i - 1]

    def block_containing(self, i: int) -> tuple:
        return self.blocks[self._block_id[i - 1]]

    def related(self, i: int, j: int) -> bool:
        """True iff i and j lie in the same block."""
        return self._block_id[i - 1] == self._block_id[j - 1]

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __repr__(self) -> str:
        return "Partition(%d, %r)" % (self.n, [list(b) for b in self.blocks])

    def __str__(self) -> str:
        return format_partition(self)


def parse_partition(text: str, n: int) -> Partition:
    """Parse block syntax like ``"1,3,12|2,4,8,10|5,7|6|9,11"``."""
    blocks = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            raise ValueError("empty block in %r" % text)
        try:
            blocks.append([int(tok) for tok in part.split(",")])
        except ValueError:
            raise ValueError("non-integer element in block %r" % part) from None
    return Partition(n, blocks)


def format_partition(p: Partition) -> str:
    """Inverse of parse_partition on canonical forms."""
    return "|".join(",".join(str(x) for x in b) for b in p.blocks)


def discrete(n: int) -> Partition:
    """The all-singletons partition of {1..n}."""
    return Partition._trusted(n, tuple((i,) for i in range(1, n + 1)))


def full(n: int) -> Partition:
    """The one-block partition of {1..n}."""
    return Partition._trusted(n, (tuple(range(1, n + 1)),))


def interval_pairing(m: int) -> Partition:
    """The pairing {2j-1, 2j} of {1..2m}."""
    return Partition._trusted(2 * m, tuple((2 * j - 1, 2 * j) for j in range(1, m + 1)))


def shifted_pairing(m: int) -> Partition:
    """The pairing {2j, 2j+1} of {1..2m}, cyclically (so {2m, 1} is a block)."""
    n = 2 * m
    blocks = [(cyclic_index(2 * j, n), cyclic_index(2 * j + 1, n)) for j in range(1, m + 1)]
    return Partition(n, blocks)


def is_noncrossing(p: Partition) -> bool:
    """No quadruple i<j<k<l with i~k and j~l in different blocks.

    Linear and cyclic order give the same notion, so a linear left-to-right
    scan with a stack of open blocks suffices.
    """
    last = [b[-1] for b in p.blocks]
    on_stack = [False] * p.num_blocks
    stack = []
    for i in range(1, p.n + 1):
        b = p._block_id[i - 1]
        if on_stack[b]:
            if stack[-1] != b:
                return False
            if i == last[b]:
                stack.pop()
                on_stack[b] = False
        else:
            if i == last[b]:
                continue  # singleton block
            stack.append(b)
            on_stack[b] = True
    return True


def enumerate_nc(n: int, cap: int = NC_ENUMERATION_CAP) -> Iterator[Partition]:
    """All non-crossing partitions of {1..n}, each once, in canonical order.

    The recursion picks the block of the smallest element; the gaps between
    its consecutive elements are then partitioned independently, which
    produces every non-crossing partition exactly once.
    """
    if not 1 <= n <= cap:
        raise ValueError("ground size %d outside 1..%d" % (n, cap))
    for blocks in _nc_blocks(tuple(range(1, n + 1))):
        yield Partition._trusted(n, blocks)


def _nc_blocks(positions: tuple) -> Iterator[tuple]:
    if not positions:
        yield ()
        return
    first = positions[0]
    rest = positions[1:]
    for k in range(len(rest) + 1):
        for picks in itertools.combinations(range(len(rest)), k):
            block = (first,) + tuple(rest[i] for i in picks)
            gaps = []
            prev = -1
            for i in picks:
                gaps.append(rest[prev + 1 : i])
                prev = i
            gaps.append(rest[prev + 1 :])
            yield from _emit((block,), gaps, 0)


def _emit(acc: tuple, gaps: list, gi: int) -> Iterator[tuple]:
    if gi == len(gaps):
        yield acc
        return
    for sub in _nc_blocks(gaps[gi]):
        yield from _emit(acc + sub, gaps, gi + 1)


def restrict(p: Partition, subset: Sequence[int]) -> Partition:
    """Restriction of p to a subset, relabelled to {1..|subset|} in order."""
    sub = sorted(set(subset))
    if not sub:
        raise ValueError("subset must be nonempty")
    if sub[0] < 1 or sub[-1] > p.n:
        raise ValueError("subset not contained in ground set")
    rank = {x: i + 1 for i, x in enumerate(sub)}
    groups = {}
    for x in sub:
        groups.setdefault(p._block_id[x - 1], []).append(rank[x])
    return Partition(len(sub), list(groups.values()))


def is_refinement(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of `fine` is contained in a block of `coarse`."""
    if fine.n != coarse.n:
        raise ValueError("ground-size mismatch: %d vs %d" % (fine.n, coarse.n))
    for b in fine.blocks:
        target = coarse._block_id[b[0] - 1]
        if any(coarse._block_id[x - 1] != target for x in b[1:]):
            return False
    return True


def collapse_pairs(p: Partition) -> Partition:
    """Identify 2k-1 and 2k of {1..2m} to get a partition of {1..m}.

    Two images k, l are related whenever any preimages are related in p,
    closed transitively (union-find).
    """
    if p.n % 2 != 0:
        raise ValueError("ground size must be even, got %d" % p.n)
    m = p.n // 2
    parent = list(range(m + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in p.blocks:
        root = find((b[0] + 1) // 2)
        for x in b[1:]:
            r = find((x + 1) // 2)
            if r != root:
                parent[r] = root
    groups = {}
    for k in range(1, m + 1):
        groups.setdefault(find(k), []).append(k)
    return Partition(m, list(groups.values()))


def count_adjacent_pairs(p: Partition, cyclic: bool = True) -> int:
    """Number of k with k ~ k+1; cyclically (n ~ 1 counts) by default."""
    stop = p.n if cyclic else p.n - 1
    count = 0
    for k in range(1, stop + 1):
        if p.related(k, cyclic_index(k + 1, p.n)):
            count += 1
    return count
