"""Independent ground-truth computations for the even-power norms.

Three oracles, each avoiding the cumulant machinery: a truncated full Fock
space carrying exact circular or semicircular families (truncation at depth
d*m is lossless for vacuum moments of 2m factors), exact convolution in the
group algebra of a free group for the unitary case, and a brute-force moment
sum over all non-crossing partitions of the word positions.
"""

from __future__ import annotations

from itertools import product
from typing import Dict

import numpy as np

from .partitions import enumerate_nc
from .cumulants import CumulantSpec, holo_word, kappa_pi, plain_word
from .matrices import (
    CoefficientFamily,
    _check_adjacent_support,
    power_iteration_norm,
    trace_sum_complex,
)

FOCK_DIMENSION_CAP = 200_000
GROUP_SUPPORT_CAP = 2_000_000
BRUTE_GROUND_CAP = 12


class FockSpace:
    """Words of length <= depth over a finite letter set; creation prepends."""

    def __init__(self, letters: int, depth: int):
        if letters < 1 or depth < 0:
            raise ValueError("need letters >= 1 and depth >= 0")
        self.letters = letters
        self.depth = depth
        self.dimension = sum(letters ** j for j in range(depth + 1))
        if self.dimension > FOCK_DIMENSION_CAP:
            raise ValueError("Fock dimension %d exceeds cap" % self.dimension)
        self.basis = []
        for length in range(depth + 1):
            self.basis.extend(product(range(letters), repeat=length))
        self.index = {w: i for i, w in enumerate(self.basis)}
        # creation by letter l sends word w to (l,)+w, dying at the cap
        self._create_src = []
        self._create_tgt = []
        shallow = [i for i, w in enumerate(self.basis) if len(w) < depth]
        for letter in range(letters):
            src = np.array(shallow, dtype=np.intp)
            tgt = np.array([self.index[(letter,) + self.basis[i]] for i in shallow],
                           dtype=np.intp)
            self._create_src.append(src)
            self._create_tgt.append(tgt)

    def create(self, letter: int, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        out[..., self._create_tgt[letter]] = vec[..., self._create_src[letter]]
        return out

    def annihilate(self, letter: int, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        out[..., self._create_src[letter]] = vec[..., self._create_tgt[letter]]
        return out


class _FamilyOperator:
    """A = sum_k a_k (x) c_{k_1}...c_{k_d} on C^alpha (x) truncated Fock space.

    kind "circular" realizes c = (creation on one copy) + (annihilation on a
    second copy); kind "semicircular" uses a single copy, self-adjointly.
    """

    def __init__(self, a: CoefficientFamily, kind: str, depth: int):
        if kind not in ("circular", "semicircular"):
            raise ValueError("unknown Fock kind %r" % kind)
        self.a = a
        self.kind = kind
        letters = 2 * a.r if kind == "circular" else a.r
        self.space = FockSpace(letters, depth)
        self.dim = a.alpha * self.space.dimension

    def _c(self, k: int, vec: np.ndarray) -> np.ndarray:
        if self.kind == "circular":
            return self.space.create(k - 1, vec) + self.space.annihilate(self.a.r + k - 1, vec)
        return self.space.create(k - 1, vec) + self.space.annihilate(k - 1, vec)

    def _c_star(self, k: int, vec: np.ndarray) -> np.ndarray:
        if self.kind == "circular":
            return self.space.annihilate(k - 1, vec) + self.space.create(self.a.r + k - 1, vec)
        return self._c(k, vec)

    def apply(self, block: np.ndarray) -> np.ndarray:
        out = np.zeros_like(block)
        for key, mat in self.a.entries.items():
            w = block
            for k in reversed(key):
                w = self._c(k, w)
            out += mat @ w
        return out

    def apply_adjoint(self, block: np.ndarray) -> np.ndarray:
        out = np.zeros_like(block)
        for key, mat in self.a.entries.items():
            w = block
            for k in key:
                w = self._c_star(k, w)
            out += mat.conj().T @ w
        return out


def fock_moment(a: CoefficientFamily, kind: str, m: int, depth: int = None) -> float:
    """(Tr (x) vacuum)((A A^*)^m); exact at depth d*m, up to float rounding."""
    if m < 1:
        raise ValueError("need m >= 1")
    if depth is None:
        depth = a.d * m
    op = _FamilyOperator(a, kind, depth)
    total = 0.0
    for i in range(a.alpha):
        block = np.zeros((a.alpha, op.space.dimension), dtype=complex)
        block[i, 0] = 1.0
        for _ in range(m):
            block = op.apply(op.apply_adjoint(block))
        total += block[i, 0].real
    return total


def fock_norm_estimate(a: CoefficientFamily, kind: str = "circular", depth: int = None,
                       tol: float = 1e-12, max_iter: int = 50000, seed: int = 11) -> float:
    """Largest singular value of the truncated realization, from below.

    Depth 2d already reproduces each block matrix as a compression, so the
    estimate dominates every ||M_l|| up to iteration error.
    """
    if depth is None:
        depth = 2 * a.d
    op = _FamilyOperator(a, kind, depth)
    shape = (a.alpha, op.space.dimension)

    def apply(v):
        return op.apply(v.reshape(shape)).ravel()

    def apply_adjoint(v):
        return op.apply_adjoint(v.reshape(shape)).ravel()

    return power_iteration_norm(apply, apply_adjoint, op.dim,
                                tol=tol, max_iter=max_iter, seed=seed)


# ---------------------------------------------------------------------------
# free group algebra


def _reduce_concat(w1: tuple, w2: tuple) -> tuple:
    i, j = len(w1), 0
    while i > 0 and j < len(w2) and w1[i - 1] == -w2[j]:
        i -= 1
        j += 1
    return w1[:i] + w2[j:]


def word_inverse(w: tuple) -> tuple:
    return tuple(-x for x in reversed(w))


def convolve(p: Dict[tuple, np.ndarray], q: Dict[tuple, np.ndarray],
             cap: int = GROUP_SUPPORT_CAP) -> Dict[tuple, np.ndarray]:
    """Product in the matrix-coefficient group algebra, with word reduction."""
    if len(p) * len(q) > cap:
        raise ValueError("convolution support product exceeds cap %d" % cap)
    out: Dict[tuple, np.ndarray] = {}
    for w1, m1 in p.items():
        for w2, m2 in q.items():
            w = _reduce_concat(w1, w2)
            prod = m1 @ m2
            if w in out:
                out[w] += prod
            else:
                out[w] = prod
    return out


def adjoint_element(p: Dict[tuple, np.ndarray]) -> Dict[tuple, np.ndarray]:
    return {word_inverse(w): m.conj().T for w, m in p.items()}


def trace_pairing(p: Dict[tuple, np.ndarray], q: Dict[tuple, np.ndarray]) -> complex:
    """(Tr (x) tau)(p q): only the words cancelling to the identity survive."""
    small, big, swap = (p, q, False) if len(p) <= len(q) else (q, p, True)
    total = 0j
    for w, m in small.items():
        other = big.get(word_inverse(w))
        if other is not None:
            total += np.trace(m @ other) if not swap else np.trace(other @ m)
    return total


def family_group_element(a: CoefficientFamily) -> Dict[tuple, np.ndarray]:
    """sum_k a_k lambda(g_{k_1} ... g_{k_d}), positive letters only."""
    out: Dict[tuple, np.ndarray] = {}
    for key, mat in a.entries.items():
        w = tuple(key)
        if w in out:
            out[w] += mat
        else:
            out[w] = mat
    return out


def free_group_moment(a: CoefficientFamily, m: int) -> float:
    """(Tr (x) tau)((A A^*)^m) for A realized over free group generators."""
    if m < 1:
        raise ValueError("need m >= 1")
    elem = family_group_element(a)
    x = convolve(elem, adjoint_element(elem))
    left_power = m // 2
    right_power = m - left_power
    left = {(): np.eye(a.alpha, dtype=complex)}
    for _ in range(left_power):
        left = convolve(left, x)
    right = {(): np.eye(a.alpha, dtype=complex)}
    for _ in range(right_power):
        right = convolve(right, x)
    return trace_pairing(left, right).real


# ---------------------------------------------------------------------------
# brute-force moment over all non-crossing partitions


def brute_moment(spec: CumulantSpec, a: CoefficientFamily, m: int) -> float:
    """Cumulant sum over ALL non-crossing partitions of the 2dm positions.

    Validates that the structured sums lose nothing: the weight vanishes
    off the structured families, the trace sum handles the rest.
    """
    n = 2 * a.d * m
    if n > BRUTE_GROUND_CAP:
        raise ValueError("ground size %d exceeds brute cap %d" % (n, BRUTE_GROUND_CAP))
    if spec.kind == "semicircle":
        _check_adjacent_support(a)
        word = plain_word(n)
    else:
        word = holo_word(a.d, m)
    total = 0j
    for p in enumerate_nc(n):
        weight = kappa_pi(spec, p, word)
        if weight:
            total += weight * trace_sum_complex(a, p)
    return total.real
