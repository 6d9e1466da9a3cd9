"""Subgroups and the structural invariants built on them.

Subgroups are boolean masks over the ambient group's element index. Each
record names itself by its greedy minimal-key generating set: walk the
elements in key order and keep every element not already generated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cayley import ball_distances
from .errors import LimitError, PreconditionError
from .groups import (FiniteGroup, GeneratingSet, QuotientGroup, SubgroupView,
                     is_normal_indices, orbit_labels)

SUBGROUP_CAP = 2000
NOT_NILPOTENT = None


def closure_mask(G: FiniteGroup, gen_indices) -> np.ndarray:
    """Mask of the subgroup generated by ``gen_indices``."""
    mask = np.zeros(G.order, dtype=bool)
    e = G.identity_index
    mask[e] = True
    perms = [G.right_perm(int(g)) for g in gen_indices]
    frontier = np.array([e])
    while frontier.size and perms:
        nxt = np.unique(np.concatenate([p[frontier] for p in perms]))
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


class SubgroupRecord:
    """A subgroup of ``group`` with lazily cached invariants."""

    def __init__(self, group: FiniteGroup, mask: np.ndarray):
        self.group = group
        mask = np.asarray(mask, dtype=bool)
        mask.flags.writeable = False
        self.mask = mask
        self.indices = np.flatnonzero(mask)
        self.order = len(self.indices)
        if group.order % self.order:
            raise AssertionError("subgroup order does not divide the group order")
        self.index = group.order // self.order

    @cached_property
    def _bytes(self):
        return np.packbits(self.mask).tobytes()

    def __eq__(self, other):
        return (isinstance(other, SubgroupRecord) and other.group is self.group
                and other._bytes == self._bytes)

    def __hash__(self):
        return hash(self._bytes)

    def __repr__(self):
        return f"<Subgroup order={self.order} index={self.index} of {self.group.id}>"

    def __contains__(self, a):
        if isinstance(a, (int, np.integer)):
            return bool(self.mask[a])
        return bool(self.mask[self.group.index_of(a)])

    def issubset(self, other) -> bool:
        other_mask = other.mask if isinstance(other, SubgroupRecord) else other
        return bool(np.all(other_mask[self.indices]))

    @cached_property
    def generator_index_list(self) -> list:
        gens = []
        cur = np.zeros(self.group.order, dtype=bool)
        cur[self.group.identity_index] = True
        for i in self.indices:
            if not cur[i]:
                gens.append(int(i))
                cur = closure_mask(self.group, gens)
                if cur.sum() == self.order:
                    break
        return gens

    @property
    def generators(self) -> list:
        return [self.group.elements[i] for i in self.generator_index_list]

    @property
    def generator_keys(self) -> list:
        return [g.key for g in self.generators]

    @cached_property
    def element_keys(self) -> frozenset:
        return frozenset(self.group.elements[i].key for i in self.indices)

    def as_group(self) -> SubgroupView:
        return self._view

    @cached_property
    def _view(self):
        return SubgroupView(self.group, self.indices, self.generators)

    @cached_property
    def is_normal(self) -> bool:
        return is_normal_indices(self.group, self.indices)

    @cached_property
    def derived(self) -> "SubgroupRecord":
        return derived_subgroup(self)

    @property
    def derived_order(self) -> int:
        return self.derived.order

    @property
    def abelianization_order(self) -> int:
        return self.order // self.derived_order

    @cached_property
    def _lcs(self):
        return lower_central_series(self)

    @property
    def nilpotency_class(self):
        return self._lcs[0]

    def is_abelian(self) -> bool:
        return self.derived_order == 1

    def lift(self, view_record: "SubgroupRecord") -> "SubgroupRecord":
        """Re-express a subgroup of ``self.as_group()`` as a subgroup of ``self.group``."""
        mask = np.zeros(self.group.order, dtype=bool)
        mask[self.indices[view_record.indices]] = True
        return SubgroupRecord(self.group, mask)

    def restrict(self, sub: "SubgroupRecord") -> "SubgroupRecord":
        """Express a subgroup of ``self.group`` contained in self as a subgroup of ``self.as_group()``."""
        return SubgroupRecord(self.as_group(), sub.mask[self.indices])

    @cached_property
    def abelianization(self) -> QuotientGroup:
        """H/H' as a quotient group of ``self.as_group()``."""
        view = self.as_group()
        local = self.restrict(self.derived)
        return QuotientGroup(view, local.indices, local.generator_index_list)


def subgroup_closure(G: FiniteGroup, gens) -> SubgroupRecord:
    return SubgroupRecord(G, closure_mask(G, [G.index_of(g) for g in gens]))


def whole_group(G: FiniteGroup) -> SubgroupRecord:
    return SubgroupRecord(G, np.ones(G.order, dtype=bool))


def trivial_subgroup(G: FiniteGroup) -> SubgroupRecord:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity_index] = True
    return SubgroupRecord(G, mask)


def _sort_key(H):
    return (H.order, H.generator_keys)


def _cyclic_with_generators(G):
    from math import gcd
    out = []
    done = np.zeros(G.order, dtype=bool)
    e = G.identity_index
    for i in range(G.order):
        if done[i]:
            continue
        step = G.right_perm(i)
        powers = [e]
        x = i
        while x != e:
            powers.append(int(x))
            x = step[x]
        m = len(powers)
        for k in range(1, m):
            if gcd(k, m) == 1:
                done[powers[k]] = True
        done[i] = True
        mask = np.zeros(G.order, dtype=bool)
        mask[powers] = True
        out.append((SubgroupRecord(G, mask), i))
    return out


def cyclic_subgroups(G: FiniteGroup) -> list:
    return [C for C, _ in _cyclic_with_generators(G)]


def all_subgroups(G: FiniteGroup, cap: int = SUBGROUP_CAP) -> list:
    """Every subgroup exactly once, sorted by (order, generator keys).

    Cyclic subgroups first, then joins with cyclic subgroups to a fixed point.
    """
    cached = G.__dict__.get("_all_subgroups")
    if cached is not None:
        return cached
    if G.order > cap:
        raise LimitError(f"{G.id}: order {G.order} exceeds subgroup cap {cap}", partial=G.order)
    cyc_gen = _cyclic_with_generators(G)
    found = {C._bytes: C for C, _ in cyc_gen}
    work = [C for C, _ in cyc_gen]
    while work:
        H = work.pop()
        for C, g in cyc_gen:
            if H.mask[g]:
                continue
            mask = closure_mask(G, H.generator_index_list + [g])
            key = np.packbits(mask).tobytes()
            if key not in found:
                J = SubgroupRecord(G, mask)
                found[key] = J
                work.append(J)
    result = sorted(found.values(), key=_sort_key)
    G._all_subgroups = result
    return result


def normal_subgroups(G: FiniteGroup) -> list:
    return [H for H in all_subgroups(G) if H.is_normal]


# -- commutators -------------------------------------------------------------


def _commutator_indices(G, A, B):
    """Indices of [a, b] = a^-1 b^-1 a b for a in A, b in B (needs the table)."""
    tab = G.table()
    inv = G.inverse_indices()
    ab = tab[np.ix_(A, B)]
    ba = tab[np.ix_(B, A)].T
    return np.unique(tab[inv[ba], ab])


def _commutator(G, a, b):
    inv = G.inverse_indices()
    conj = G.left_perm(int(inv[b]))[G.right_perm(int(b))[a]]  # b^-1 a b
    return int(G.left_perm(int(inv[a]))[conj])


def normal_closure_mask(G: FiniteGroup, H: "SubgroupRecord", gen_indices) -> np.ndarray:
    """Smallest subgroup normalised by H containing the given elements."""
    inv = G.inverse_indices()
    gens = list(dict.fromkeys(int(g) for g in gen_indices))
    mask = closure_mask(G, gens)
    conj_by = H.generator_index_list
    changed = True
    while changed:
        changed = False
        for n in list(gens):
            for h in conj_by:
                c = int(G.left_perm(int(inv[h]))[G.right_perm(h)[n]])
                if not mask[c]:
                    gens.append(c)
                    mask = closure_mask(G, gens)
                    changed = True
    return mask


def derived_subgroup(H: SubgroupRecord, method: str = "auto") -> SubgroupRecord:
    """H' generated by all commutators of pairs of elements of H.

    ``method="normal_closure"`` instead takes the normal closure in H of the
    commutators of generators; ``auto`` uses it only when no table exists.
    """
    G = H.group
    if method == "auto":
        method = "pairs" if G.has_table else "normal_closure"
    if method == "pairs":
        comm = _commutator_indices(G, H.indices, H.indices)
        return SubgroupRecord(G, closure_mask(G, comm))
    gens = H.generator_index_list
    comm = [_commutator(G, a, b) for a in gens for b in gens]
    return SubgroupRecord(G, normal_closure_mask(G, H, comm))


def lower_central_series(H: SubgroupRecord):
    """(class, orders) with gamma_1 = H, gamma_{k+1} = [gamma_k, H].

    The class is None (``NOT_NILPOTENT``) when the series stalls above 1.
    """
    G = H.group
    series = [H]
    orders = [H.order]
    while series[-1].order > 1:
        cur = series[-1]
        if G.has_table:
            comm = _commutator_indices(G, cur.indices, H.indices)
            nxt = SubgroupRecord(G, closure_mask(G, comm))
        else:
            comm = [_commutator(G, a, b) for a in cur.generator_index_list
                    for b in H.generator_index_list]
            nxt = SubgroupRecord(G, normal_closure_mask(G, H, comm))
        if nxt.order == cur.order:
            return NOT_NILPOTENT, orders
        series.append(nxt)
        orders.append(nxt.order)
    return len(orders) - 1, orders


# -- abelian invariants ----------------------------------------------------------


def _element_orders(tab, e):
    n = tab.shape[0]
    ar = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    cur = ar.copy()
    k = 0
    while (orders == 0).any():
        k += 1
        hit = (cur == e) & (orders == 0)
        orders[hit] = k
        cur = tab[cur, ar]
    return orders


def abelian_invariants_from_table(tab, e) -> list:
    """Invariants d1 | d2 | ... of an abelian group given by its table."""
    tab = np.asarray(tab)
    found = []
    while tab.shape[0] > 1:
        orders = _element_orders(tab, e)
        x = int(np.argmax(orders))
        m = int(orders[x])
        found.append(m)
        cyc = [e]
        while len(cyc) < m:
            cyc.append(int(tab[cyc[-1], x]))
        labels = tab[:, cyc].min(axis=1)
        reps = np.unique(labels)
        coset = np.searchsorted(reps, labels)
        tab = coset[tab[np.ix_(reps, reps)]]
        e = int(coset[e])
    return sorted(found)


def abelian_invariants(H: SubgroupRecord) -> list:
    """Cyclic decomposition orders of H/H', each dividing the next."""
    Q = H.abelianization
    return abelian_invariants_from_table(Q.table(), Q.identity_index)


# -- centralizers and classes ------------------------------------------------------


def centralizer(G: FiniteGroup, g) -> SubgroupRecord:
    i = g if isinstance(g, (int, np.integer)) else G.index_of(g)
    return SubgroupRecord(G, G.right_perm(int(i)) == G.left_perm(int(i)))


def _centralizer_mask(G, gens):
    mask = np.ones(G.order, dtype=bool)
    for i in gens:
        mask &= G.right_perm(int(i)) == G.left_perm(int(i))
    return mask


def center(G: FiniteGroup) -> SubgroupRecord:
    gens = G.generator_indices() if G.generators else range(G.order)
    return SubgroupRecord(G, _centralizer_mask(G, gens))


def conjugation_kernel(G: FiniteGroup, S) -> SubgroupRecord:
    """Intersection of the centralizers of the elements of S."""
    return SubgroupRecord(G, _centralizer_mask(G, [G.index_of(s) for s in S]))


@dataclass(frozen=True)
class ConjugacyData:
    count: int
    representatives: tuple
    sizes: tuple


def conjugacy_classes(G) -> ConjugacyData:
    """Conjugation orbits; accepts a FiniteGroup or a SubgroupRecord."""
    if isinstance(G, SubgroupRecord):
        G = G.as_group()
    inv = G.inverse_indices()
    gens = G.generator_indices() if G.generators else list(range(G.order))
    perms = []
    for g in gens:
        right = G.right_perm(int(g))
        perms.append(G.left_perm(int(inv[g]))[right])
    labels = orbit_labels(G.order, perms)
    reps, sizes = np.unique(labels, return_counts=True)
    keys = tuple(G.elements[i].key for i in reps)
    return ConjugacyData(len(reps), keys, tuple(int(s) for s in sizes))


def class_count_by_centralizers(G) -> int:
    """k(G) = (1/|G|) sum |C_G(g)|, counted from commuting pairs."""
    if isinstance(G, SubgroupRecord):
        G = G.as_group()
    total = sum(int((G.right_perm(i) == G.left_perm(i)).sum()) for i in range(G.order))
    if total % G.order:
        raise AssertionError("orbit counting gave a non-integer")
    return total // G.order


# -- transversals and Schreier generators ------------------------------------------


@dataclass(frozen=True)
class SchreierData:
    transversal: tuple
    generators: tuple
    size_bound: int


def _right_coset_labels(G, H):
    # Hg is the orbit of g under left multiplication by H
    return orbit_labels(G.order, [G.left_perm(h) for h in H.generator_index_list])


def _transversal_indices(G, H, S):
    labels = _right_coset_labels(G, H)
    s_idx = [G.index_of(s) for s in S]
    perms = [G.right_perm(i) for i in s_idx]
    e = G.identity_index
    rep_of = {int(labels[e]): e}
    level = [e]
    order = [e]
    while level and perms:
        cand = np.unique(np.concatenate([p[np.array(level)] for p in perms]))
        nxt = []
        for c in cand:  # ascending index = ascending key
            lab = int(labels[c])
            if lab not in rep_of:
                rep_of[lab] = int(c)
                nxt.append(int(c))
        order.extend(nxt)
        level = nxt
    if len(rep_of) != H.index:
        raise PreconditionError("generating set does not reach every coset")
    return order, labels, rep_of


def coset_transversal(G: FiniteGroup, H: SubgroupRecord, S) -> list:
    """Right-coset representatives in BFS order; each is the first-reached, minimal-key element."""
    order, _, _ = _transversal_indices(G, H, S)
    return [G.elements[i] for i in order]


def schreier_generators(G: FiniteGroup, H: SubgroupRecord, S) -> SchreierData:
    """S-bar = {t s rep(ts)^-1} minus the identity, deduplicated in (t, s) order."""
    order, labels, rep_of = _transversal_indices(G, H, S)
    inv = G.inverse_indices()
    s_idx = [G.index_of(s) for s in S]
    e = G.identity_index
    seen, gens = set(), []
    for t in order:
        for s in s_idx:
            ts = int(G.right_perm(s)[t])
            r = rep_of[int(labels[ts])]
            x = int(G.right_perm(int(inv[r]))[ts])
            if x != e and x not in seen:
                seen.add(x)
                gens.append(x)
    return SchreierData(tuple(G.elements[i] for i in order),
                        tuple(G.elements[i] for i in gens),
                        H.index * len(s_idx))


# -- witnesses ---------------------------------------------------------------------


def best_abelian_section(G: FiniteGroup):
    """(max |K/K'| over subgroups K, the smallest K attaining it, ties by generator keys)."""
    subs = all_subgroups(G)
    best = max(K.abelianization_order for K in subs)
    # subs is sorted by (order, generator keys) so the first hit wins
    H = next(K for K in subs if K.abelianization_order == best)
    return best, H


def find_bt_witness(G: FiniteGroup, index_cap: int, within=None):
    """(N, H) with N normal, N <= H, H/N abelian and |G:H| <= index_cap.

    Minimises |G:H|, then |N|, then the subgroups' generator keys. ``within``
    (a boolean mask over G) restricts N to subgroups contained in it.
    """
    subs = all_subgroups(G)
    normals = [N for N in subs if N.is_normal and (within is None or N.issubset(within))]
    best = None
    for H in subs:
        if H.index > index_cap:
            continue
        D = H.derived
        for N in normals:
            if D.issubset(N) and N.issubset(H):
                cand = (H.index, N.order, N.generator_keys, H.generator_keys)
                if best is None or cand < best[0]:
                    best = (cand, N, H)
                break  # normals ascend, so the first fit is the smallest N for this H
    if best is None:
        return None
    return best[1], best[2]


def ball_mask(G: FiniteGroup, S, radius: int) -> np.ndarray:
    dist = ball_distances(G, S)
    return (dist >= 0) & (dist <= radius)
