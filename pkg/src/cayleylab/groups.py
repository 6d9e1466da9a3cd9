"""Finite groups with exact arithmetic and a dense integer index.

Every group enumerates its elements once, sorts them by canonical key and
from then on the heavy algorithms work on integer indices: ``right_perm(s)``
maps index i to the index of ``g_i * s`` and ``table()`` is the full
multiplication table for groups up to ``TABLE_CAP`` elements.

Permutations compose left to right: ``multiply(a, b)`` applies a, then b.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .elements import GroupElement, Kind, canonical_key
from .errors import DomainError, FormatError, LimitError, ParseError, PreconditionError

DEFAULT_ORDER_CAP = 2_000_000
TABLE_CAP = 4096

_SL2_PRIMES = (2, 3, 5, 7, 11, 13)


def default_order_cap() -> int:
    value = os.environ.get("CAYLEYLAB_CAP_ELEMENTS")
    if value:
        cap = int(value)
        if cap <= 0:
            raise ValueError("CAYLEYLAB_CAP_ELEMENTS must be positive")
        return cap
    return DEFAULT_ORDER_CAP


def _elem(kind, payload):
    # fast path around GroupElement.__init__ for hot loops
    g = object.__new__(GroupElement)
    object.__setattr__(g, "kind", kind)
    object.__setattr__(g, "payload", payload)
    object.__setattr__(g, "_key", None)
    return g


def orbit_labels(n, perms):
    """Label each of ``range(n)`` by the smallest index in its orbit under ``perms``."""
    if not perms:
        return np.arange(n)
    src = np.tile(np.arange(n), len(perms))
    dst = np.concatenate(perms)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    first = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    return first[comp]


class FiniteGroup:
    """Base class: subclasses supply ``_mul``, ``_inv`` and ``_valid``."""

    kind: Kind

    def __init__(self, id, identity, generators=(), order_cap=None):
        self.id = id
        self.identity = identity
        gens, seen = [], set()
        for g in generators:
            if g.key not in seen and g != identity:
                seen.add(g.key)
                gens.append(g)
        self.generators = tuple(gens)
        self.order_cap = order_cap or default_order_cap()
        self._right_cache = {}
        self._left_cache = {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.id}>"

    # -- group law -------------------------------------------------------

    def _check(self, a):
        if not isinstance(a, GroupElement) or a.kind is not self.kind or not self._valid(a):
            raise DomainError(f"{a!r} is not an element of {self.id}")

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self._check(a)
        self._check(b)
        return self._mul(a, b)

    def inverse(self, a: GroupElement) -> GroupElement:
        self._check(a)
        return self._inv(a)

    def power(self, a, k):
        result, base = self.identity, a
        if k < 0:
            base, k = self._inv(a), -k
        while k:
            if k & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            k >>= 1
        return result

    def contains(self, a) -> bool:
        return isinstance(a, GroupElement) and a.kind is self.kind and self._valid(a)

    def _valid(self, a):
        return True

    def decode_key(self, key: bytes) -> GroupElement:
        raise NotImplementedError

    def element_from_ints(self, values) -> GroupElement:
        """Element from the flat integer encoding used by generator files."""
        raise NotImplementedError

    # -- enumeration -----------------------------------------------------

    @cached_property
    def _enumeration(self):
        e = self.identity
        seen = {e.key: e}
        order = [e.key]
        parent = {e.key: (None, -1)}
        frontier = [e]
        cap = self.order_cap
        mul = self._mul
        gens = self.generators
        while frontier:
            nxt = []
            for g in frontier:
                for j, s in enumerate(gens):
                    h = mul(g, s)
                    k = h.key
                    if k not in seen:
                        seen[k] = h
                        order.append(k)
                        parent[k] = (g.key, j)
                        nxt.append(h)
                        if len(seen) > cap:
                            raise LimitError(
                                f"{self.id}: more than {cap} elements", partial=len(seen))
            frontier = nxt
        keys = sorted(seen)
        index = {k: i for i, k in enumerate(keys)}
        tree = [(index[k], -1 if parent[k][0] is None else index[parent[k][0]], parent[k][1])
                for k in order]
        return [seen[k] for k in keys], index, tree

    @property
    def elements(self) -> list:
        return self._enumeration[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    def enumerate_elements(self) -> frozenset:
        return frozenset(self._enumeration[1])

    def index_of(self, a: GroupElement) -> int:
        try:
            return self._enumeration[1][canonical_key(a)]
        except KeyError:
            raise DomainError(f"{a!r} is not an element of {self.id}") from None

    @cached_property
    def identity_index(self) -> int:
        return self.index_of(self.identity)

    # -- index engine ----------------------------------------------------

    @property
    def has_table(self) -> bool:
        return self.order <= TABLE_CAP

    @cached_property
    def _table(self):
        return self._build_table()

    def table(self) -> np.ndarray:
        """Dense multiplication table: ``table()[i, j]`` is the index of g_i * g_j."""
        if not self.has_table:
            raise LimitError(f"{self.id}: order {self.order} exceeds table cap {TABLE_CAP}")
        return self._table

    def _build_table(self):
        n = self.order
        tab = np.empty((n, n), dtype=np.int32)
        tab[:, self.identity_index] = np.arange(n)
        gen_perms = [self._right_perm_objects(s) for s in self.generators]
        for j, p, g in self._enumeration[2]:
            if p >= 0:
                tab[:, j] = gen_perms[g][tab[:, p]]
        return tab

    def _right_perm_objects(self, a):
        index, mul = self._enumeration[1], self._mul
        return np.fromiter((index[mul(g, a).key] for g in self.elements),
                           dtype=np.int64, count=self.order)

    def _left_perm_objects(self, a):
        index, mul = self._enumeration[1], self._mul
        return np.fromiter((index[mul(a, g).key] for g in self.elements),
                           dtype=np.int64, count=self.order)

    def right_perm(self, a) -> np.ndarray:
        """Index map i -> index(g_i * a); ``a`` may be an element or an index."""
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        if self.has_table:
            return self._table[:, i].astype(np.int64)
        perm = self._right_cache.get(i)
        if perm is None:
            perm = self._right_perm_objects(self.elements[i])
            self._right_cache[i] = perm
        return perm

    def left_perm(self, a) -> np.ndarray:
        """Index map i -> index(a * g_i)."""
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        if self.has_table:
            return self._table[i, :].astype(np.int64)
        perm = self._left_cache.get(i)
        if perm is None:
            perm = self._left_perm_objects(self.elements[i])
            self._left_cache[i] = perm
        return perm

    @cached_property
    def _inverse_indices(self):
        if self.has_table:
            return np.argmax(self._table == self.identity_index, axis=1)
        index = self._enumeration[1]
        return np.array([index[self._inv(g).key] for g in self.elements], dtype=np.int64)

    def inverse_indices(self) -> np.ndarray:
        return self._inverse_indices

    def generator_indices(self) -> list:
        return [self.index_of(s) for s in self.generators]

    def is_abelian(self) -> bool:
        gens = self.generators if self.generators else self.elements
        return all(self._mul(a, b) == self._mul(b, a) for a in gens for b in gens)


# -- concrete families -----------------------------------------------------


class PermutationGroup(FiniteGroup):
    kind = Kind.PERM

    def __init__(self, id, degree, generators, order_cap=None):
        self.degree = degree
        super().__init__(id, _elem(Kind.PERM, tuple(range(degree))), generators, order_cap)

    def _valid(self, a):
        return len(a.payload) == self.degree

    def _mul(self, a, b):
        return _elem(Kind.PERM, tuple(map(b.payload.__getitem__, a.payload)))

    def _inv(self, a):
        inv = [0] * self.degree
        for i, x in enumerate(a.payload):
            inv[x] = i
        return _elem(Kind.PERM, tuple(inv))

    def decode_key(self, key):
        if self.degree <= 255:
            return _elem(Kind.PERM, tuple(key))
        return _elem(Kind.PERM, tuple(int.from_bytes(key[i:i + 2], "big")
                                      for i in range(0, len(key), 2)))

    def element_from_ints(self, values):
        from .elements import perm
        if len(values) != self.degree:
            raise FormatError(f"expected {self.degree} images, got {len(values)}")
        return perm(values)


class SL2Group(FiniteGroup):
    """2x2 matrices of determinant 1 over the integers mod a prime p."""

    kind = Kind.MATRIX

    def __init__(self, id, p, generators=None, order_cap=None):
        self.p = p
        if generators is None:
            generators = [_elem(Kind.MATRIX, (1, 1, 0, 1, p)), _elem(Kind.MATRIX, (1, 0, 1, 1, p))]
        super().__init__(id, _elem(Kind.MATRIX, (1, 0, 0, 1, p)), generators, order_cap)

    def _valid(self, a):
        return a.payload[4] == self.p

    def _mul(self, x, y):
        a, b, c, d, p = x.payload
        e, f, g, h, _ = y.payload
        return _elem(Kind.MATRIX, ((a * e + b * g) % p, (a * f + b * h) % p,
                                   (c * e + d * g) % p, (c * f + d * h) % p, p))

    def _inv(self, x):
        a, b, c, d, p = x.payload
        return _elem(Kind.MATRIX, (d, -b % p, -c % p, a, p))

    def decode_key(self, key):
        return _elem(Kind.MATRIX, tuple(key))

    def element_from_ints(self, values):
        from .elements import matrix
        if len(values) != 4:
            raise FormatError("matrix elements need 4 entries")
        try:
            return matrix(*values, self.p)
        except ValueError as exc:
            raise FormatError(str(exc)) from None


class WreathGroup(FiniteGroup):
    """(C2)^n x| C_n with (b1, s1)(b2, s2) = (b1 xor rot_{s1}(b2), s1 + s2 mod n).

    ``rot_s`` rotates the coordinate sequence left by s: coordinate i of
    ``rot_s(b)`` is coordinate (i + s) mod n of b.
    """

    kind = Kind.WREATH

    def __init__(self, id, n, order_cap=None):
        self.n = n
        self._mask = (1 << n) - 1
        gens = [_elem(Kind.WREATH, (1, 0, n))]
        if n > 1:
            gens.append(_elem(Kind.WREATH, (0, 1, n)))
        super().__init__(id, _elem(Kind.WREATH, (0, 0, n)), gens, order_cap)

    def _valid(self, a):
        return a.payload[2] == self.n

    def rotate(self, bits, s):
        if s == 0:
            return bits
        return ((bits >> s) | (bits << (self.n - s))) & self._mask

    def _mul(self, x, y):
        b1, s1, n = x.payload
        b2, s2, _ = y.payload
        return _elem(Kind.WREATH, (b1 ^ self.rotate(b2, s1), (s1 + s2) % n, n))

    def _inv(self, x):
        b, s, n = x.payload
        t = -s % n
        return _elem(Kind.WREATH, (self.rotate(b, t), t, n))

    def decode_key(self, key):
        nbytes = (self.n + 7) // 8
        return _elem(Kind.WREATH, (int.from_bytes(key[:nbytes], "little"), key[nbytes], self.n))

    def element_from_ints(self, values):
        if len(values) != self.n + 1 or any(v not in (0, 1) for v in values[:-1]):
            raise FormatError(f"wreath elements need {self.n} bits and a shift")
        from .elements import wreath
        try:
            return wreath(list(values[:-1]), values[-1], self.n)
        except ValueError as exc:
            raise FormatError(str(exc)) from None


class ResidueGroup(FiniteGroup):
    """Additive group Z_{m1} x ... x Z_{mk}; covers cyclic and elementary abelian."""

    kind = Kind.RESIDUE

    def __init__(self, id, moduli, generators=None, order_cap=None):
        self.moduli = tuple(moduli)
        k = len(self.moduli)
        if generators is None:
            generators = [_elem(Kind.RESIDUE, tuple(int(i == j) % m for j, m in enumerate(self.moduli)))
                          for i in range(k)]
        super().__init__(id, _elem(Kind.RESIDUE, (0,) * k), generators, order_cap)

    def _valid(self, a):
        return len(a.payload) == len(self.moduli) and all(
            0 <= x < m for x, m in zip(a.payload, self.moduli))

    def _mul(self, a, b):
        return _elem(Kind.RESIDUE, tuple((x + y) % m for x, y, m in zip(a.payload, b.payload, self.moduli)))

    def _inv(self, a):
        return _elem(Kind.RESIDUE, tuple(-x % m for x, m in zip(a.payload, self.moduli)))

    def decode_key(self, key):
        return _elem(Kind.RESIDUE, tuple(int.from_bytes(key[i:i + 4], "big")
                                         for i in range(0, len(key), 4)))

    def element_from_ints(self, values):
        if len(values) != len(self.moduli):
            raise FormatError(f"expected {len(self.moduli)} residues")
        return _elem(Kind.RESIDUE, tuple(int(v) % m for v, m in zip(values, self.moduli)))

    def is_abelian(self):
        return True


class TableGroup(FiniteGroup):
    """Group given by an explicit multiplication table on 0..n-1, identity 0."""

    kind = Kind.TABLE

    def __init__(self, id, table, generators=None, order_cap=None):
        tab = np.asarray(table, dtype=np.int32)
        n = tab.shape[0]
        self._given = tab
        if generators is None:
            generators = range(1, n)
        gens = [_elem(Kind.TABLE, (int(i),)) for i in generators]
        super().__init__(id, _elem(Kind.TABLE, (0,)), gens, order_cap)
        if n > self.order_cap:
            raise LimitError(f"{id}: table of {n} elements exceeds cap", partial=n)

    def _valid(self, a):
        return 0 <= a.payload[0] < self._given.shape[0]

    def _mul(self, a, b):
        return _elem(Kind.TABLE, (int(self._given[a.payload[0], b.payload[0]]),))

    def _inv(self, a):
        return _elem(Kind.TABLE, (int(np.argmax(self._given[a.payload[0]] == 0)),))

    @cached_property
    def _enumeration(self):
        n = self._given.shape[0]
        elems = [_elem(Kind.TABLE, (i,)) for i in range(n)]
        return elems, {g.key: i for i, g in enumerate(elems)}, []

    def _build_table(self):
        return self._given

    @property
    def has_table(self):
        return True

    def decode_key(self, key):
        return _elem(Kind.TABLE, (int.from_bytes(key, "big"),))

    def element_from_ints(self, values):
        if len(values) != 1 or not 0 <= values[0] < self._given.shape[0]:
            raise FormatError("table elements are a single in-range index")
        return _elem(Kind.TABLE, (int(values[0]),))


class ProductGroup(FiniteGroup):
    kind = Kind.PRODUCT

    def __init__(self, id, left: FiniteGroup, right: FiniteGroup, order_cap=None):
        self.left, self.right = left, right
        eL, eR = left.identity, right.identity
        gens = [_elem(Kind.PRODUCT, (g, eR)) for g in left.generators]
        gens += [_elem(Kind.PRODUCT, (eL, g)) for g in right.generators]
        if isinstance(left, TableGroup) and not left.generators and left.order > 1:
            raise PreconditionError("table factor without generators")
        super().__init__(id, _elem(Kind.PRODUCT, (eL, eR)), gens, order_cap)

    def _valid(self, a):
        return self.left.contains(a.payload[0]) and self.right.contains(a.payload[1])

    def _mul(self, a, b):
        return _elem(Kind.PRODUCT, (self.left._mul(a.payload[0], b.payload[0]),
                                    self.right._mul(a.payload[1], b.payload[1])))

    def _inv(self, a):
        return _elem(Kind.PRODUCT, (self.left._inv(a.payload[0]), self.right._inv(a.payload[1])))

    def decode_key(self, key):
        split = len(self.left.identity.key)
        return _elem(Kind.PRODUCT, (self.left.decode_key(key[:split]),
                                    self.right.decode_key(key[split:])))

    def element_from_ints(self, values):
        width = _flat_width(self.left)
        return _elem(Kind.PRODUCT, (self.left.element_from_ints(values[:width]),
                                    self.right.element_from_ints(values[width:])))

    def is_abelian(self):
        return self.left.is_abelian() and self.right.is_abelian()


def _flat_width(G):
    if isinstance(G, ProductGroup):
        return _flat_width(G.left) + _flat_width(G.right)
    if isinstance(G, PermutationGroup):
        return G.degree
    if isinstance(G, SL2Group):
        return 4
    if isinstance(G, WreathGroup):
        return G.n + 1
    if isinstance(G, ResidueGroup):
        return len(G.moduli)
    return 1


class SubgroupView(FiniteGroup):
    """A subgroup of ``parent`` treated as a group in its own right."""

    def __init__(self, parent: FiniteGroup, indices, generators, id=None):
        self.parent = parent
        self.kind = parent.kind
        self.indices = np.asarray(indices, dtype=np.int64)
        self._local = np.full(parent.order, -1, dtype=np.int64)
        self._local[self.indices] = np.arange(len(self.indices))
        super().__init__(id or f"{parent.id}<{len(self.indices)}>", parent.identity,
                         generators, parent.order_cap)

    def _valid(self, a):
        if not self.parent.contains(a):
            return False
        i = self.parent._enumeration[1].get(a.key)
        return i is not None and self._local[i] >= 0

    def _mul(self, a, b):
        return self.parent._mul(a, b)

    def _inv(self, a):
        return self.parent._inv(a)

    def decode_key(self, key):
        return self.parent.decode_key(key)

    def element_from_ints(self, values):
        return self.parent.element_from_ints(values)

    @cached_property
    def _enumeration(self):
        elems = [self.parent.elements[i] for i in self.indices]
        return elems, {g.key: i for i, g in enumerate(elems)}, []

    @property
    def has_table(self):
        return self.parent.has_table

    def _build_table(self):
        sub = self.parent.table()[np.ix_(self.indices, self.indices)]
        return self._local[sub].astype(np.int32)

    def right_perm(self, a):
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        if self.parent.has_table:
            return self._local[self.parent.table()[self.indices, self.indices[i]]]
        return self._local[self.parent.right_perm(int(self.indices[i]))[self.indices]]

    def left_perm(self, a):
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        if self.parent.has_table:
            return self._local[self.parent.table()[self.indices[i], self.indices]]
        return self._local[self.parent.left_perm(int(self.indices[i]))[self.indices]]

    @cached_property
    def _inverse_indices(self):
        return self._local[self.parent.inverse_indices()[self.indices]]


class QuotientGroup(FiniteGroup):
    """G/N on coset labels; each coset is named by its minimal-key element."""

    kind = Kind.COSET

    def __init__(self, parent: FiniteGroup, normal_indices, normal_gens=None, id=None):
        self.parent = parent
        self.normal_indices = np.asarray(normal_indices, dtype=np.int64)
        self.normal_keys = frozenset(parent.elements[i].key for i in self.normal_indices)
        gens = self.normal_indices.tolist() if normal_gens is None else list(normal_gens)
        labels = orbit_labels(parent.order, [parent.right_perm(i) for i in gens])
        reps = np.unique(labels)
        self.rep_indices = reps
        self.coset_of = np.searchsorted(reps, labels)
        self.representative = {
            parent.elements[i].key: parent.elements[reps[c]] for i, c in enumerate(self.coset_of)}
        identity = _elem(Kind.COSET, (parent.elements[reps[self.coset_of[parent.identity_index]]],))
        images = [self.project(s) for s in parent.generators]
        super().__init__(id or f"{parent.id}/N{len(self.normal_indices)}", identity,
                         images, parent.order_cap)

    def project(self, a: GroupElement) -> GroupElement:
        try:
            rep = self.representative[a.key]
        except KeyError:
            raise DomainError(f"{a!r} is not an element of {self.parent.id}") from None
        return _elem(Kind.COSET, (rep,))

    def _valid(self, a):
        rep = a.payload[0]
        return self.representative.get(rep.key) == rep

    def _mul(self, a, b):
        return self.project(self.parent._mul(a.payload[0], b.payload[0]))

    def _inv(self, a):
        return self.project(self.parent._inv(a.payload[0]))

    def decode_key(self, key):
        return _elem(Kind.COSET, (self.parent.decode_key(key),))

    @cached_property
    def _enumeration(self):
        elems = [_elem(Kind.COSET, (self.parent.elements[i],)) for i in self.rep_indices]
        return elems, {g.key: i for i, g in enumerate(elems)}, []

    @property
    def has_table(self):
        return self.order <= TABLE_CAP and self.parent.has_table

    def _build_table(self):
        reps = self.rep_indices
        return self.coset_of[self.parent.table()[np.ix_(reps, reps)]].astype(np.int32)

    def right_perm(self, a):
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        return self.coset_of[self.parent.right_perm(int(self.rep_indices[i]))[self.rep_indices]]

    def left_perm(self, a):
        i = a if isinstance(a, (int, np.integer)) else self.index_of(a)
        return self.coset_of[self.parent.left_perm(int(self.rep_indices[i]))[self.rep_indices]]

    @cached_property
    def _inverse_indices(self):
        return self.coset_of[self.parent.inverse_indices()[self.rep_indices]]


def is_normal_indices(G: FiniteGroup, indices) -> bool:
    """Normality test: conjugates of N's elements by G's generators stay in N."""
    mask = np.zeros(G.order, dtype=bool)
    mask[indices] = True
    gens = G.generator_indices() if G.generators else range(G.order)
    inv = G.inverse_indices()
    idx = np.asarray(indices, dtype=np.int64)
    for g in gens:
        # g^-1 * n * g
        conj = G.left_perm(int(inv[g]))[G.right_perm(int(g))[idx]]
        if not mask[conj].all():
            return False
    return True


def quotient(G: FiniteGroup, N) -> QuotientGroup:
    """G/N for a normal subgroup N given as a SubgroupRecord or an index array."""
    indices = getattr(N, "indices", N)
    if getattr(N, "group", G) is not G:
        raise PreconditionError("subgroup belongs to a different group")
    if not is_normal_indices(G, indices):
        raise PreconditionError(f"subgroup of order {len(indices)} is not normal in {G.id}")
    gens = getattr(N, "generator_index_list", None)
    return QuotientGroup(G, indices, gens)


def project(Q: QuotientGroup, a: GroupElement) -> GroupElement:
    return Q.project(a)


def multiply(G: FiniteGroup, a: GroupElement, b: GroupElement) -> GroupElement:
    return G.multiply(a, b)


def inverse(G: FiniteGroup, a: GroupElement) -> GroupElement:
    return G.inverse(a)


def enumerate_elements(G: FiniteGroup) -> frozenset:
    return G.enumerate_elements()


# -- generating sets ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratingSet:
    """Ordered, duplicate-free list of elements with closure flags."""

    elements: tuple
    symmetric_closed: bool = False
    conjugation_closed: bool = False
    label: str = ""

    def __post_init__(self):
        seen, unique = set(), []
        for g in self.elements:
            if g.key not in seen:
                seen.add(g.key)
                unique.append(g)
        object.__setattr__(self, "elements", tuple(unique))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @classmethod
    def standard(cls, G: FiniteGroup):
        return cls(G.generators, label="standard")

    def symmetrized(self, G: FiniteGroup) -> "GeneratingSet":
        elems = list(self.elements) + [G.inverse(s) for s in self.elements]
        return GeneratingSet(tuple(elems), True, self.conjugation_closed, self.label + "+symmetric")

    def conjugation_closure(self, G: FiniteGroup) -> "GeneratingSet":
        """Smallest conjugation-closed set containing these elements."""
        inv = G.inverse_indices()
        idx = [G.index_of(s) for s in self.elements]
        mask = np.zeros(G.order, dtype=bool)
        mask[idx] = True
        frontier = np.array(idx, dtype=np.int64)
        gens = G.generator_indices() or list(range(G.order))
        while frontier.size:
            found = [G.left_perm(int(inv[g]))[G.right_perm(int(g))[frontier]] for g in gens]
            nxt = np.unique(np.concatenate(found))
            nxt = nxt[~mask[nxt]]
            mask[nxt] = True
            frontier = nxt
        elems = [G.elements[i] for i in np.flatnonzero(mask)]
        return GeneratingSet(tuple(elems), self.symmetric_closed, True, self.label + "+conj-close")

    def is_conjugation_closed(self, G: FiniteGroup) -> bool:
        keys = {s.key for s in self.elements}
        gens = G.generators or tuple(G.elements)
        return all(G._mul(G._mul(G._inv(g), s), g).key in keys
                   for s in self.elements for g in gens)


# -- construction ------------------------------------------------------------


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def cyclic(n, order_cap=None):
    return ResidueGroup(f"cyclic:{n}", (n,), [_elem(Kind.RESIDUE, (1 % n,))], order_cap)


def dihedral(n, order_cap=None):
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple(-i % n for i in range(n))
    return PermutationGroup(f"dihedral:{n}", n,
                            [_elem(Kind.PERM, rot), _elem(Kind.PERM, ref)], order_cap)


def symmetric(d, order_cap=None):
    swap = (1, 0) + tuple(range(2, d))
    cyc = tuple((i + 1) % d for i in range(d))
    return PermutationGroup(f"sym:{d}", d, [_elem(Kind.PERM, swap), _elem(Kind.PERM, cyc)], order_cap)


def quaternion(order_cap=None):
    """Q8 as the matrices i = [[0,1],[-1,0]], j = [[1,1],[1,-1]] inside SL2(F_3)."""
    return SL2Group("q8", 3, [_elem(Kind.MATRIX, (0, 1, 2, 0, 3)),
                              _elem(Kind.MATRIX, (1, 1, 1, 2, 3))], order_cap)


def elementary_abelian(p, k, order_cap=None):
    return ResidueGroup(f"elemab:{p}:{k}", (p,) * k, None, order_cap)


def sl2(p, order_cap=None):
    return SL2Group(f"sl2:{p}", p, None, order_cap)


def wreath_c2(n, order_cap=None):
    return WreathGroup(f"wreath:{n}", n, order_cap)


def read_table(path, id=None, order_cap=None) -> TableGroup:
    """Load a multiplication-table file (line 1: n, then n rows of n indices).

    An optional trailing line ``gens i j ...`` names the generators; otherwise
    every non-identity element is a generator.
    """
    path = Path(path)
    try:
        lines = [ln.split() for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise FormatError(f"cannot read table file {path}: {exc}") from None
    if not lines:
        raise FormatError(f"{path}: empty table file")
    gens = None
    if lines[-1][0] == "gens":
        gens = lines.pop()[1:]
    try:
        n = int(lines[0][0])
        rows = [[int(x) for x in row] for row in lines[1:]]
        gens = None if gens is None else [int(x) for x in gens]
    except ValueError:
        raise FormatError(f"{path}: non-integer entry") from None
    if len(lines[0]) != 1 or n < 1:
        raise FormatError(f"{path}: first line must be a positive integer")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FormatError(f"{path}: expected {n} rows of {n} entries")
    tab = np.array(rows, dtype=np.int64)
    _validate_table(tab, path)
    if gens is not None and any(not 0 <= g < n for g in gens):
        raise FormatError(f"{path}: generator index out of range")
    G = TableGroup(id or f"table:{path}", tab, gens, order_cap)
    if gens is not None:
        reached = _closure_size(G)
        if reached != n:
            raise FormatError(f"{path}: listed generators give only {reached} of {n} elements")
    return G


def _closure_size(G):
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    perms = [G.right_perm(i) for i in G.generator_indices()]
    while frontier.size and perms:
        nxt = np.unique(np.concatenate([p[frontier] for p in perms]))
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return int(mask.sum())


def _validate_table(tab, path, rng_seed=0):
    n = tab.shape[0]
    if tab.min() < 0 or tab.max() >= n:
        raise FormatError(f"{path}: index out of range")
    ar = np.arange(n)
    if not (tab[0] == ar).all() or not (tab[:, 0] == ar).all():
        raise FormatError(f"{path}: element 0 is not the identity")
    srt = np.sort(tab, axis=1)
    if not (srt == ar).all() or not (np.sort(tab, axis=0) == ar[:, None]).all():
        raise FormatError(f"{path}: rows and columns must be permutations")
    if n <= 128:
        left = tab[tab[:, :, None], ar[None, None, :]]          # (ab)c
        right = tab[ar[:, None, None], tab[None, :, :]]         # a(bc)
        ok = (left == right).all()
    else:
        rng = np.random.default_rng(rng_seed)
        a, b, c = rng.integers(0, n, size=(3, 200_000))
        ok = (tab[tab[a, b], c] == tab[a, tab[b, c]]).all()
    if not ok:
        raise FormatError(f"{path}: table is not associative")


def construct(spec, order_cap=None) -> FiniteGroup:
    """Build a group from a group-spec string or parsed GroupSpec."""
    from .dsl import GroupSpec, parse_group_spec

    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    if not isinstance(spec, GroupSpec):
        raise ParseError(f"not a group spec: {spec!r}")
    fam, params = spec.family, spec.params

    def need(cond, msg):
        if not cond:
            raise LimitError(f"{spec}: {msg}")

    if fam == "cyclic":
        (n,) = params
        need(1 <= n <= (order_cap or default_order_cap()), "order out of range")
        return cyclic(n, order_cap)
    if fam == "dihedral":
        (n,) = params
        need(3 <= n, "dihedral needs n >= 3")
        return dihedral(n, order_cap)
    if fam == "sym":
        (d,) = params
        need(2 <= d <= 8, "sym needs 2 <= d <= 8")
        return symmetric(d, order_cap)
    if fam == "q8":
        return quaternion(order_cap)
    if fam == "elemab":
        p, k = params
        need(_is_prime(p), "elemab needs a prime p")
        need(k >= 1 and p ** k <= (order_cap or default_order_cap()), "elemab order out of range")
        return elementary_abelian(p, k, order_cap)
    if fam == "sl2":
        (p,) = params
        need(p in _SL2_PRIMES, "sl2 needs a prime p <= 13")
        return sl2(p, order_cap)
    if fam == "wreath":
        (n,) = params
        need(1 <= n <= 12, "wreath needs 1 <= n <= 12")
        return wreath_c2(n, order_cap)
    if fam == "product":
        left, right = (construct(s, order_cap) for s in params)
        return ProductGroup(str(spec), left, right, order_cap)
    if fam == "table":
        return read_table(params[0], id=str(spec), order_cap=order_cap)
    raise ParseError(f"unknown family {fam!r}")
