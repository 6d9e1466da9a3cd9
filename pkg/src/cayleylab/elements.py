"""Group elements and their canonical byte keys.

Byte layouts (the key order is the total element order used for every
tie-break in the package):

* ``perm``    one byte per point (two big-endian bytes per point if the
              degree exceeds 255)
* ``matrix``  four residue bytes a, b, c, d followed by one byte p
* ``wreath``  ceil(n/8) bytes of packed bits, coordinate 0 in the least
              significant bit of the first byte, then one byte for the shift
* ``residue`` four big-endian bytes per coordinate
* ``table``   four big-endian bytes holding the row index
* ``product`` key of the first factor followed by key of the second
* ``coset``   key of the coset representative
"""

from __future__ import annotations

import enum


class Kind(str, enum.Enum):
    PERM = "perm"
    MATRIX = "matrix"
    WREATH = "wreath"
    RESIDUE = "residue"
    TABLE = "table"
    PRODUCT = "product"
    COSET = "coset"


class GroupElement:
    """Immutable element: a kind tag plus a hashable payload tuple.

    Payloads by kind: ``perm`` images; ``matrix`` (a, b, c, d, p);
    ``wreath`` (bits, shift, n) with bits packed into an int; ``residue``
    the coordinates; ``table`` (index,); ``product`` (left, right);
    ``coset`` (representative,).
    """

    __slots__ = ("kind", "payload", "_key")

    def __init__(self, kind, payload):
        object.__setattr__(self, "kind", Kind(kind))
        object.__setattr__(self, "payload", tuple(payload))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.kind == other.kind and self.payload == other.payload

    def __hash__(self):
        return hash((self.kind, self.payload))

    def __lt__(self, other):
        return canonical_key(self) < canonical_key(other)

    @property
    def key(self) -> bytes:
        return canonical_key(self)

    def __repr__(self):
        if self.kind is Kind.PERM:
            return f"Perm({list(self.payload)})"
        if self.kind is Kind.MATRIX:
            a, b, c, d, p = self.payload
            return f"Mat([[{a},{b}],[{c},{d}]] mod {p})"
        if self.kind is Kind.WREATH:
            bits, shift, n = self.payload
            word = "".join(str((bits >> i) & 1) for i in range(n))
            return f"Wreath({word}, {shift})"
        if self.kind is Kind.RESIDUE:
            return f"Res{self.payload}"
        if self.kind is Kind.TABLE:
            return f"T{self.payload[0]}"
        if self.kind is Kind.PRODUCT:
            return f"({self.payload[0]!r}, {self.payload[1]!r})"
        return f"Coset[{self.payload[0]!r}]"


def canonical_key(a: GroupElement) -> bytes:
    key = a._key
    if key is None:
        key = _encode(a)
        object.__setattr__(a, "_key", key)
    return key


def _encode(a):
    kind, p = a.kind, a.payload
    if kind is Kind.PERM:
        if len(p) <= 255:
            return bytes(p)
        return b"".join(x.to_bytes(2, "big") for x in p)
    if kind is Kind.MATRIX:
        return bytes(p)
    if kind is Kind.WREATH:
        bits, shift, n = p
        return bits.to_bytes((n + 7) // 8, "little") + bytes([shift])
    if kind is Kind.RESIDUE:
        return b"".join(x.to_bytes(4, "big") for x in p)
    if kind is Kind.TABLE:
        return p[0].to_bytes(4, "big")
    if kind is Kind.PRODUCT:
        return canonical_key(p[0]) + canonical_key(p[1])
    return canonical_key(p[0])


def perm(images) -> GroupElement:
    images = tuple(int(x) for x in images)
    if sorted(images) != list(range(len(images))):
        raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
    return GroupElement(Kind.PERM, images)


def cycles(degree: int, *cycs) -> GroupElement:
    """Permutation from 0-based cycles, e.g. ``cycles(3, (0, 1, 2))``."""
    images = list(range(degree))
    for cyc in cycs:
        for i, x in enumerate(cyc):
            images[x] = cyc[(i + 1) % len(cyc)]
    return perm(images)


def matrix(a, b, c, d, p) -> GroupElement:
    a, b, c, d = a % p, b % p, c % p, d % p
    if (a * d - b * c) % p != 1:
        raise ValueError(f"determinant of [[{a},{b}],[{c},{d}]] is not 1 mod {p}")
    return GroupElement(Kind.MATRIX, (a, b, c, d, p))


def wreath(bits, shift, n) -> GroupElement:
    """Wreath pair; ``bits`` is an int or a 0/1 sequence indexed by coordinate."""
    if not isinstance(bits, int):
        bits = sum(1 << i for i, b in enumerate(bits) if b)
    if not 0 <= bits < (1 << n) or not 0 <= shift < n:
        raise ValueError(f"bad wreath pair ({bits}, {shift}) for n={n}")
    return GroupElement(Kind.WREATH, (bits, shift, n))


def residue(*coords) -> GroupElement:
    return GroupElement(Kind.RESIDUE, coords)
