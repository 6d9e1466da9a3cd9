"""Corpus groups and generating-set selection for sweeps."""

from __future__ import annotations

import random
import zlib
from itertools import combinations
from math import comb
from pathlib import Path

from .cayley import generates
from .dsl import GensSpec, GroupSpec, parse_gens_spec, parse_group_spec
from .errors import FormatError, LimitError
from .groups import FiniteGroup, GeneratingSet, construct

RANDOM_RETRY_CAP = 10_000
EXHAUSTIVE_LIMIT = 500

DEFAULT_CORPUS = (
    "cyclic:1", "cyclic:2", "cyclic:5", "cyclic:6", "cyclic:7", "cyclic:8", "cyclic:9",
    "cyclic:12", "cyclic:16", "cyclic:30", "cyclic:64",
    "elemab:2:2", "elemab:2:3", "elemab:2:4", "elemab:3:2", "elemab:3:3", "elemab:5:2",
    "product:cyclic:2,cyclic:4", "product:cyclic:4,cyclic:6", "product:cyclic:3,cyclic:9",
    "dihedral:3", "dihedral:4", "dihedral:5", "dihedral:6", "dihedral:8", "dihedral:12",
    "sym:3", "sym:4", "sym:5", "q8", "sl2:2", "sl2:3", "sl2:5", "sl2:7",
    "wreath:2", "wreath:3", "wreath:4", "wreath:5",
    "product:q8,cyclic:3", "product:sym:3,cyclic:4", "product:dihedral:4,cyclic:2",
    "product:sym:3,sym:3", "product:q8,elemab:2:2", "product:sl2:3,cyclic:2",
    "product:sym:4,cyclic:5",
)


def _base_family_specs(max_order):
    specs = [f"cyclic:{n}" for n in range(1, max_order + 1)]
    specs += [f"dihedral:{n}" for n in range(3, max_order // 2 + 1)]
    specs += ["sym:2", "sym:3", "sym:4", "q8", "sl2:2", "sl2:3", "wreath:2", "wreath:3"]
    specs += [f"elemab:{p}:{k}" for p in (2, 3, 5) for k in range(2, 6) if p ** k <= max_order]
    return [s for s in specs if construct(s).order <= max_order]


def product_corpus(max_order: int = 63) -> list:
    """Constructible family members of order <= max_order and all pairwise products within it."""
    bases = _base_family_specs(max_order)
    orders = {s: construct(s).order for s in bases}
    out = list(bases)
    nontrivial = [s for s in bases if orders[s] > 1]
    for i, a in enumerate(nontrivial):
        for b in nontrivial[i:]:
            if orders[a] * orders[b] <= max_order:
                out.append(f"product:{a},{b}")
    return out


def resolve_entry(entry):
    """Group and optional fixed generating set for a corpus entry."""
    if isinstance(entry, FiniteGroup):
        return entry, None
    spec = parse_group_spec(entry) if isinstance(entry, str) else entry
    G = construct(GroupSpec(spec.family, spec.params))
    fixed = resolve_gens(G, spec.gens) if spec.gens is not None else None
    return G, fixed


def _rng(seed, G):
    return random.Random((seed << 32) ^ zlib.crc32(G.id.encode()))


def random_generating_set(G: FiniteGroup, k: int, seed: int) -> GeneratingSet:
    """k uniform distinct elements, redrawn until they generate (at most 10,000 draws)."""
    rng = _rng(seed, G)
    k = min(k, G.order)
    for _ in range(RANDOM_RETRY_CAP):
        picks = sorted(rng.sample(range(G.order), k))
        S = GeneratingSet(tuple(G.elements[i] for i in picks), label=f"random:{k}:{seed}")
        if generates(G, S):
            return S
    raise LimitError(f"{G.id}: no generating set of size {k} after {RANDOM_RETRY_CAP} draws")


def read_gens_file(G: FiniteGroup, path) -> GeneratingSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read generator file {path}: {exc}") from None
    elems = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [int(x) for x in line.split()]
        except ValueError:
            raise FormatError(f"{path}: non-integer entry in {line!r}") from None
        elems.append(G.element_from_ints(values))
    return GeneratingSet(tuple(elems), label=f"file:{path}")


def resolve_gens(G: FiniteGroup, spec) -> GeneratingSet:
    if isinstance(spec, str):
        spec = parse_gens_spec(spec)
    if spec.kind == "standard":
        S = GeneratingSet.standard(G)
    elif spec.kind == "all-nonid":
        S = GeneratingSet(tuple(g for g in G.elements if g != G.identity), label="all-nonid")
    elif spec.kind == "random":
        S = random_generating_set(G, spec.params[0], spec.params[1])
    else:
        S = read_gens_file(G, spec.params[0])
    for mod in spec.modifiers:
        S = S.symmetrized(G) if mod == "symmetric" else S.conjugation_closure(G)
    return S


def sample_generating_sets(G: FiniteGroup, seed: int, count: int = 50, max_size: int = 3) -> list:
    """Standard generators plus generating sets of size 1..max_size.

    Exhaustive when there are at most 500 candidate subsets of non-identity
    elements, otherwise uniform draws without replacement (seeded).
    """
    out = [GeneratingSet.standard(G)] if generates(G, G.generators) else []
    seen = {tuple(s.key for s in out[0])} if out else set()
    nonid = [i for i in range(G.order) if i != G.identity_index]
    total = sum(comb(len(nonid), k) for k in range(1, max_size + 1))

    def add(idx):
        S = GeneratingSet(tuple(G.elements[i] for i in idx), label="sample:" + "-".join(map(str, idx)))
        key = tuple(s.key for s in S)
        if key not in seen and generates(G, S):
            seen.add(key)
            out.append(S)

    if total <= EXHAUSTIVE_LIMIT:
        for k in range(1, max_size + 1):
            for idx in combinations(nonid, k):
                add(idx)
        return out
    rng = _rng(seed, G)
    for _ in range(RANDOM_RETRY_CAP):
        if len(out) >= count:
            break
        k = rng.randint(1, max_size)
        add(tuple(sorted(rng.sample(nonid, k))))
    return out
