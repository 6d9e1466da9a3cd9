"""Balls, exact powers and diameters in Cayley graphs.

Distances use right multiplication by the generating set and the empty
product convention: B_0 = {e}, B_k = B_{k-1} u B_{k-1}*S, and the diameter
is the least n with B_n = G.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import FiniteGroup, GeneratingSet
from .errors import PreconditionError

INFINITE = math.inf
POWER_SET_CAP = 2_000_000


@dataclass(frozen=True)
class BallProfile:
    sizes: tuple
    generates: bool

    @property
    def diameter(self):
        return len(self.sizes) - 1 if self.generates else INFINITE


@dataclass(frozen=True)
class PowerProfile:
    sizes: tuple
    cap_hit: bool = False


@dataclass(frozen=True)
class GrowthWitness:
    theta: Fraction
    delta: Fraction
    alpha: int
    n: int
    ratio: Fraction
    diameter: int


def _indices(G, S):
    elems = S.elements if isinstance(S, GeneratingSet) else tuple(S)
    return [G.index_of(s) for s in elems]


def iroot_floor(x: int, q: int) -> int:
    """Largest r >= 0 with r**q <= x."""
    if x < 0 or q < 1:
        raise ValueError("iroot_floor needs x >= 0 and q >= 1")
    if x < 2:
        return x
    r = int(round(x ** (1.0 / q)))
    while r ** q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def floor_power(base: int, exponent: Fraction) -> int:
    """Exact floor(base ** exponent) for a non-negative rational exponent."""
    exponent = Fraction(exponent)
    return iroot_floor(base ** exponent.numerator, exponent.denominator)


def ball_distances(G: FiniteGroup, S) -> np.ndarray:
    """Word length of every element (index order); -1 where unreachable."""
    perms = [G.right_perm(i) for i in _indices(G, S)]
    dist = np.full(G.order, -1, dtype=np.int64)
    e = G.identity_index
    dist[e] = 0
    frontier = np.array([e])
    level = 0
    while frontier.size and perms:
        level += 1
        nxt = np.unique(np.concatenate([p[frontier] for p in perms]))
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = level
        frontier = nxt
    return dist


def ball_profile(G: FiniteGroup, S) -> BallProfile:
    dist = ball_distances(G, S)
    reached = dist[dist >= 0]
    counts = np.bincount(reached)
    sizes = tuple(int(x) for x in np.cumsum(counts))
    return BallProfile(sizes, sizes[-1] == G.order)


def diameter(G: FiniteGroup, S):
    """Least n with every element a product of at most n elements of S; INFINITE if S does not generate."""
    return ball_profile(G, S).diameter


def generates(G: FiniteGroup, S) -> bool:
    return ball_profile(G, S).generates


def power_sets(G: FiniteGroup, S, max_n: int, cap: int = POWER_SET_CAP):
    """Yield S^1, S^2, ... as sorted index arrays; stops early past ``cap``."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    idx = _indices(G, S)
    perms = [G.right_perm(i) for i in idx]
    cur = np.unique(np.array(idx, dtype=np.int64))
    yield cur
    for _ in range(max_n - 1):
        if not perms:
            return
        cur = np.unique(np.concatenate([p[cur] for p in perms]))
        if len(cur) > cap:
            return
        yield cur


def power_profile(G: FiniteGroup, S, max_n: int, cap: int = POWER_SET_CAP) -> PowerProfile:
    sizes = [len(level) for level in power_sets(G, S, max_n, cap)]
    return PowerProfile(tuple(sizes), len(sizes) < max_n)


def growth_alpha(diam: int) -> int:
    """Smallest a >= 1 with 5**a > diam**(1/8)."""
    a = 1
    while 5 ** (8 * a) <= diam:
        a += 1
    return a


def growth_scan(G: FiniteGroup, S, theta, delta):
    """Return (diameter, [(n, |S^n|, |S^5n|) for n = 1 .. floor(diam^delta)])."""
    theta, delta = Fraction(theta), Fraction(delta)
    if theta <= 0 or not 0 < delta <= 1:
        raise ValueError("need theta > 0 and 0 < delta <= 1")
    diam = diameter(G, S)
    if diam is INFINITE:
        raise PreconditionError("generating set does not generate the group")
    n_max = floor_power(diam, delta)
    if n_max == 0:
        return diam, []
    sizes = power_profile(G, S, 5 * n_max).sizes
    return diam, [(n, sizes[n - 1], sizes[5 * n - 1]) for n in range(1, n_max + 1)]


def growth_condition(G: FiniteGroup, S, theta, delta):
    """First n <= diam^delta with |S^{5n}| <= theta*|S^n|, or None."""
    theta, delta = Fraction(theta), Fraction(delta)
    diam, rows = growth_scan(G, S, theta, delta)
    for n, small, big in rows:
        if big <= theta * small:
            return GrowthWitness(theta, delta, growth_alpha(diam), n, Fraction(big, small), diam)
    return None


def ceil_log2_multiple(c, order: int) -> int:
    """Exact ceil(c * log2(order)) for rational c > 0."""
    c = Fraction(c)
    m = 0
    target = order ** c.numerator
    while 2 ** (c.denominator * m) < target:
        m += 1
    return m


def find_log_set(G: FiniteGroup, c1=4, c2=4, trials: int = 100, seed: int = 0, candidates=()):
    """Randomized search for S of size ceil(c1 log2|G|) with diameter <= ceil(c2 log2|G|).

    Explicit ``candidates`` are tried first and must respect the size bound.
    Returns a GeneratingSet or None.
    """
    order = G.order
    if order < 2:
        raise PreconditionError("find_log_set needs |G| >= 2")
    size = min(ceil_log2_multiple(c1, order), order)
    bound = ceil_log2_multiple(c2, order)
    for cand in candidates:
        cand = cand if isinstance(cand, GeneratingSet) else GeneratingSet(tuple(cand), label="candidate")
        if len(cand) <= size and diameter(G, cand) <= bound:
            return cand
    rng = random.Random(seed)
    for t in range(trials):
        picks = sorted(rng.sample(range(order), size))
        cand = GeneratingSet(tuple(G.elements[i] for i in picks), label=f"log-set:{seed}:{t}")
        if diameter(G, cand) <= bound:
            return cand
    return None
