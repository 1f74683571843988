"""Free cumulants of preset operator types, evaluated over partitions.

A cumulant functional is multiplicative over the blocks of a non-crossing
partition; a moment is the sum of the functional over all non-crossing
partitions of the word positions.  The presets cover the circular element,
the Haar unitary, the standard semicircular element, a general alternating
determining sequence and a raw table hook.  Letters of a word are pairs
(alphabet index, starred?); mixed indices inside a block kill the block, so
freeness is built in.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence, Tuple

from .partitions import Partition, enumerate_nc

Letter = Tuple[int, bool]


def plain_word(n: int, index: int = 1) -> tuple:
    """n unstarred letters of one index (self-adjoint usage)."""
    return tuple((index, False) for _ in range(n))


def alternating_word(n: int, index: int = 1) -> tuple:
    """Letters c, c*, c, c*, ... of length n."""
    return tuple((index, i % 2 == 1) for i in range(n))


def holo_word(d: int, m: int, index: int = 1) -> tuple:
    """2m groups of d letters, starred on even groups."""
    out = []
    for group in range(1, 2 * m + 1):
        out.extend((index, group % 2 == 0) for _ in range(d))
    return tuple(out)


class CumulantSpec:
    """Block-cumulant evaluator for one operator type."""

    def __init__(self, kind: str, alphas: Sequence = (), table: Callable = None,
                 cyclic_alternation: bool = True):
        if kind not in ("circular", "haar", "semicircle", "rdiag", "star_table"):
            raise ValueError("unknown cumulant kind %r" % kind)
        self.kind = kind
        self._alphas = list(alphas)
        self._table = table
        self.cyclic_alternation = cyclic_alternation

    # -- factories ---------------------------------------------------------

    @classmethod
    def circular(cls) -> "CumulantSpec":
        return cls("circular", alphas=[1])

    @classmethod
    def haar_unitary(cls) -> "CumulantSpec":
        return cls("haar")

    @classmethod
    def semicircular(cls) -> "CumulantSpec":
        return cls("semicircle")

    @classmethod
    def r_diagonal(cls, alphas: Sequence) -> "CumulantSpec":
        return cls("rdiag", alphas=list(alphas))

    @classmethod
    def star_table(cls, table: Callable) -> "CumulantSpec":
        return cls("star_table", table=table)

    @classmethod
    def from_name(cls, name: str) -> "CumulantSpec":
        """Parse CLI spellings: circular, haar, semicircle, rdiag:1,-0.5,..."""
        if name == "circular":
            return cls.circular()
        if name == "haar":
            return cls.haar_unitary()
        if name == "semicircle":
            return cls.semicircular()
        if name.startswith("rdiag:"):
            alphas = [float(tok) for tok in name[len("rdiag:"):].split(",") if tok]
            if not alphas:
                raise ValueError("empty determining sequence in %r" % name)
            return cls.r_diagonal(alphas)
        raise ValueError("unknown spec name %r" % name)

    def __repr__(self) -> str:
        return "CumulantSpec(%r)" % self.kind

    # -- determining sequence ----------------------------------------------

    def determining(self, nmax: int) -> tuple:
        """Alternating cumulant values alpha_1..alpha_nmax."""
        if self.kind == "circular":
            return tuple([1] + [0] * (nmax - 1))
        if self.kind == "rdiag":
            padded = self._alphas + [0] * (nmax - len(self._alphas))
            return tuple(padded[:nmax])
        if self.kind == "haar":
            self._ensure_haar(nmax)
            return tuple(self._alphas[:nmax])
        raise ValueError("kind %r has no determining sequence" % self.kind)

    def _ensure_haar(self, nmax: int) -> None:
        # Invert the alternating moments of a unitary (all equal to 1) rather
        # than hardcoding the sequence; memoized across calls.
        if len(self._alphas) < nmax:
            self._alphas = list(
                determining_sequence_from_moments(lambda w: 1, nmax, seed=self._alphas)
            )

    # -- block values --------------------------------------------------------

    def _pattern_alternates(self, pattern: tuple) -> bool:
        pairs = zip(pattern, pattern[1:] + (pattern[0],)) if self.cyclic_alternation \
            else zip(pattern, pattern[1:])
        return all(x != y for x, y in pairs)

    def block_value(self, pattern: tuple):
        """Cumulant of one block given its star pattern, in element order."""
        size = len(pattern)
        if self.kind == "semicircle":
            return 1 if size == 2 else 0
        if self.kind == "star_table":
            return self._table(pattern)
        if size % 2 or not self._pattern_alternates(pattern):
            return 0
        return self.determining(size // 2)[size // 2 - 1]


def kappa_pi(spec: CumulantSpec, p: Partition, word: Sequence[Letter]):
    """Multiplicative extension over the blocks of p; 0 on mixed indices."""
    if len(word) != p.n:
        raise ValueError("word length %d does not match ground size %d" % (len(word), p.n))
    value = 1
    for b in p.blocks:
        letters = [word[i - 1] for i in b]
        if len({idx for idx, _ in letters}) > 1:
            return 0
        value *= spec.block_value(tuple(star for _, star in letters))
        if value == 0:
            return 0
    return value


def rdiag_block_weight(spec: CumulantSpec, p: Partition):
    """Product of alternating cumulants alpha_{|V|/2} over the blocks of p.

    The star pattern is not inspected here; callers that sum over star
    assignments enforce alternation on their side.
    """
    if any(len(b) % 2 for b in p.blocks):
        raise ValueError("all blocks must be even")
    sizes = [len(b) // 2 for b in p.blocks]
    alphas = spec.determining(max(sizes))
    value = 1
    for s in sizes:
        value *= alphas[s - 1]
        if value == 0:
            return 0
    return value


def moment_from_cumulants(spec: CumulantSpec, word: Sequence[Letter], cap: int = 14):
    """Mixed moment as the cumulant sum over all non-crossing partitions."""
    word = tuple(word)
    total = 0
    for p in enumerate_nc(len(word), cap=cap):
        total += kappa_pi(spec, p, word)
    return total


def determining_sequence_from_moments(moments: Callable, nmax: int,
                                      seed: Iterable = ()) -> tuple:
    """Recover alpha_1..alpha_nmax from alternating moments of lengths 2..2nmax.

    The conversion is triangular: the full-block term of the length-2n sum
    is alpha_n itself, every other term only involves shorter alphas.
    `seed` may carry already-known leading values to resume the recursion.
    """
    alphas = list(seed)
    for n in range(len(alphas) + 1, nmax + 1):
        word = alternating_word(2 * n)
        partial_spec = CumulantSpec.r_diagonal(alphas + [0])
        lower = moment_from_cumulants(partial_spec, word)
        alphas.append(moments(word) - lower)
    return tuple(alphas)


def cumulant_domination_bound(p: Partition, m2, mN):
    """Upper bound m2^(2K) (16 mN)^(n-2K) with K the number of pair blocks."""
    pairs = sum(1 for b in p.blocks if len(b) == 2)
    return (m2 ** (2 * pairs)) * ((16 * mN) ** (p.n - 2 * pairs))


# ---------------------------------------------------------------------------
# scalar norms of the underlying operator


def c_moment_2m(spec: CumulantSpec, m: int, cap: int = 14):
    """Moment of (c c*)^m (plain c^{2m} for the self-adjoint preset)."""
    if spec.kind == "semicircle":
        word = plain_word(2 * m)
    else:
        word = alternating_word(2 * m)
    return moment_from_cumulants(spec, word, cap=cap)


def c_norm_2m(spec: CumulantSpec, m: int) -> float:
    return float(c_moment_2m(spec, m)) ** (1.0 / (2 * m))


def c_norm_2(spec: CumulantSpec) -> float:
    return c_norm_2m(spec, 1)


OPERATOR_NORMS = {"circular": 2.0, "haar": 1.0, "semicircle": 2.0}


def c_operator_norm(spec: CumulantSpec) -> float:
    """Operator norm of the preset operator (circular and semicircular have
    norm 2, a unitary has norm 1)."""
    try:
        return OPERATOR_NORMS[spec.kind]
    except KeyError:
        raise ValueError("no preset operator norm for kind %r" % spec.kind) from None
