"""Sparse exterior algebra over Z and F2.

A :class:`Multivector` is an element of Lambda(R^rank) (or of the dual
algebra when ``dual`` is set), stored as a map from index subsets --
encoded as bitmasks -- to nonzero coefficients.  Coefficients are exact:
arbitrary-precision ints over ``"z"``, bits over ``"f2"``.

The pairing between the algebra and its dual is the determinant pairing,
which is delta_{IJ} on matching basis wedges, and the interior product is
defined by adjunction against it:

    <interior(x, y) | g> = <y | x ^ g>

with the contracting factor wedged on the left.
"""
from __future__ import annotations

from typing import Iterable, Sequence

__all__ = [
    "RING_Z",
    "RING_F2",
    "Multivector",
    "pair",
    "interior",
    "induced_map",
    "merge_sign",
]

RING_Z = "z"
RING_F2 = "f2"
_RINGS = (RING_Z, RING_F2)

MAX_RANK = 64


def _check_ring(ring: str) -> str:
    if ring not in _RINGS:
        raise ValueError(f"unknown ring {ring!r}; expected 'z' or 'f2'")
    return ring


def _norm(c: int, ring: str) -> int:
    return c % 2 if ring == RING_F2 else c


def merge_sign(a: int, b: int) -> int:
    """Sign (+1/-1) of merging index sets a before b: parity of crossing pairs."""
    count = 0
    rest = b
    while rest:
        low = rest & -rest
        count += (a >> low.bit_length()).bit_count()
        rest ^= low
    return -1 if count & 1 else 1


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        bit = 1 << i
        if mask & bit:
            raise ValueError(f"repeated index {i}")
        mask |= bit
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class Multivector:
    """Element of the exterior algebra on ``rank`` generators."""

    __slots__ = ("rank", "ring", "dual", "terms")

    def __init__(self, rank: int, terms: dict[int, int], ring: str = RING_Z,
                 dual: bool = False):
        if not (0 <= rank <= MAX_RANK):
            raise ValueError(f"rank {rank} outside supported range 0..{MAX_RANK}")
        _check_ring(ring)
        self.rank = rank
        self.ring = ring
        self.dual = dual
        clean: dict[int, int] = {}
        top = 1 << rank
        for mask, c in terms.items():
            if not 0 <= mask < top:
                raise ValueError(f"term {mask:#x} outside rank-{rank} algebra")
            c = _norm(c, ring)
            if c:
                clean[mask] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rank: int, ring: str = RING_Z, dual: bool = False) -> "Multivector":
        return cls(rank, {}, ring, dual)

    @classmethod
    def unit(cls, rank: int, ring: str = RING_Z, dual: bool = False) -> "Multivector":
        return cls(rank, {0: 1}, ring, dual)

    @classmethod
    def basis_vector(cls, rank: int, i: int, ring: str = RING_Z,
                     dual: bool = False) -> "Multivector":
        if not 0 <= i < rank:
            raise ValueError(f"basis index {i} outside 0..{rank - 1}")
        return cls(rank, {1 << i: 1}, ring, dual)

    @classmethod
    def vector(cls, rank: int, coeffs: Sequence[int], ring: str = RING_Z,
               dual: bool = False) -> "Multivector":
        """Degree-1 element with the given coordinates."""
        if len(coeffs) != rank:
            raise ValueError("coordinate vector length != rank")
        return cls(rank, {1 << i: c for i, c in enumerate(coeffs) if c}, ring, dual)

    @classmethod
    def from_indices(cls, rank: int, entries: Iterable[tuple[Iterable[int], int]],
                     ring: str = RING_Z, dual: bool = False) -> "Multivector":
        terms: dict[int, int] = {}
        for indices, c in entries:
            mask = mask_of(indices)
            terms[mask] = terms.get(mask, 0) + c
        return cls(rank, terms, ring, dual)

    @classmethod
    def top(cls, rank: int, ring: str = RING_Z, dual: bool = False) -> "Multivector":
        """The full wedge of all generators in ascending order."""
        return cls(rank, {(1 << rank) - 1: 1}, ring, dual)

    # -- basic structure --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        degs = {m.bit_count() for m in self.terms}
        return len(degs) <= 1

    def degree(self) -> int | None:
        """Common degree of all terms; None for 0 or mixed elements."""
        degs = {m.bit_count() for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def grade_project(self, d: int) -> "Multivector":
        return Multivector(self.rank,
                           {m: c for m, c in self.terms.items() if m.bit_count() == d},
                           self.ring, self.dual)

    def coefficient(self, indices: Iterable[int]) -> int:
        return self.terms.get(mask_of(indices), 0)

    def support(self) -> list[tuple[int, ...]]:
        return [indices_of(m) for m in self._sorted_masks()]

    def _sorted_masks(self) -> list[int]:
        return sorted(self.terms, key=lambda m: (m.bit_count(), indices_of(m)))

    # -- arithmetic -------------------------------------------------------
    def _like(self, other: "Multivector", op: str) -> None:
        if (self.rank, self.ring, self.dual) != (other.rank, other.ring, other.dual):
            raise ValueError(f"{op}: mismatched algebras "
                             f"({self.rank},{self.ring},dual={self.dual}) vs "
                             f"({other.rank},{other.ring},dual={other.dual})")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._like(other, "add")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Multivector(self.rank, terms, self.ring, self.dual)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.rank, {m: -c for m, c in self.terms.items()},
                           self.ring, self.dual)

    def scale(self, c: int) -> "Multivector":
        return Multivector(self.rank, {m: c * v for m, v in self.terms.items()},
                           self.ring, self.dual)

    def wedge(self, other: "Multivector") -> "Multivector":
        self._like(other, "wedge")
        terms: dict[int, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                m = ma | mb
                terms[m] = terms.get(m, 0) + merge_sign(ma, mb) * ca * cb
        return Multivector(self.rank, terms, self.ring, self.dual)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Multivector)
                and (self.rank, self.ring, self.dual) == (other.rank, other.ring, other.dual)
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.rank, self.ring, self.dual, frozenset(self.terms.items())))

    # -- rendering --------------------------------------------------------
    def text(self) -> str:
        """Canonical text form: terms like ``k·[i1,i2]`` joined with `` + ``."""
        if not self.terms:
            return "0"
        parts = []
        for m in self._sorted_masks():
            c = self.terms[m]
            if m == 0:
                parts.append(str(c))
                continue
            body = "[" + ",".join(str(i) for i in indices_of(m)) + "]"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}·{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        tag = "*" if self.dual else ""
        return f"<Multivector{tag} rank={self.rank} ring={self.ring} {self.text()}>"


def pair(f: Multivector, e: Multivector) -> int:
    """Determinant pairing of a dual element against a primal one.

    On decomposables of equal degree this is det(f_i(e_j)); across degrees
    it vanishes.  Either argument order is accepted (the pairing is
    symmetric under the double-dual identification).
    """
    if f.rank != e.rank or f.ring != e.ring:
        raise ValueError("pair: mismatched algebras")
    if f.dual == e.dual:
        raise ValueError("pair: needs one primal and one dual argument")
    total = 0
    small, big = (f, e) if len(f.terms) <= len(e.terms) else (e, f)
    for m, c in small.terms.items():
        other = big.terms.get(m)
        if other:
            total += c * other
    return _norm(total, f.ring)


def interior(x: Multivector, y: Multivector) -> Multivector:
    """Interior product iota_x(y), contracting x into the opposite-variance y.

    Defined by <interior(x, y) | g> = <y | x ^ g>.  On basis wedges:
    iota_{e_J}(e*_I) = sign(J, I\\J) e*_{I\\J} when J is a subset of I.
    """
    if x.rank != y.rank or x.ring != y.ring:
        raise ValueError("interior: mismatched algebras")
    if x.dual == y.dual:
        raise ValueError("interior: arguments must have opposite variance")
    terms: dict[int, int] = {}
    for mi, cy in y.terms.items():
        for mj, cx in x.terms.items():
            if mj & ~mi:
                continue
            rest = mi & ~mj
            terms[rest] = terms.get(rest, 0) + merge_sign(mj, rest) * cx * cy
    return Multivector(y.rank, terms, y.ring, y.dual)


def induced_map(matrix: Sequence[Sequence[int]], x: Multivector,
                target_rank: int | None = None) -> Multivector:
    """Apply Lambda(T) to x, where T sends source generator j to
    sum_i matrix[i][j] * (target generator i)."""
    rows = len(matrix)
    if target_rank is None:
        target_rank = rows
    cols = [Multivector.vector(target_rank,
                               [matrix[i][j] for i in range(rows)] + [0] * (target_rank - rows),
                               x.ring, x.dual)
            for j in range(x.rank)]
    out = Multivector.zero(target_rank, x.ring, x.dual)
    for mask, c in x.terms.items():
        acc = Multivector.unit(target_rank, x.ring, x.dual)
        for j in indices_of(mask):
            acc = acc.wedge(cols[j])
            if acc.is_zero():
                break
        out = out + acc.scale(c)
    return out
