"""Chord diagrams on the sutured disk: fast contact elements, bypass
rotations, matchability, and the solid-torus rotation pairing.

Everything here works over the beta basis of the standard disk: beta_i is
the boundary path from suture alpha_i to alpha_{i+2}, the odd-index arcs
{beta_1, beta_3, ..., beta_{2n-3}} spanning H_1 rel the positive sutures
and the even-index arcs spanning the negative side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contact import ContactElement, DualStructure
from .dividing import ChordDiagram, enumerate_chord_diagrams
from .errors import InvalidChordDiagramError, ValidationError
from .exterior import Multivector, RING_F2, RING_Z, induced_map
from .models import disk_model

__all__ = [
    "DiskContactTable",
    "BypassTriple",
    "TorusParameters",
    "disk_contact_element",
    "disk_contact_table",
    "bypass_triple_at",
    "matchable",
    "matching_curve_count",
    "matchable_via_wedge",
    "rotation_map",
    "rotate_diagram",
    "solid_torus_tight",
    "dehn_twist_action",
    "dehn_twist_family",
]


def _region_sectors(cd: ChordDiagram) -> list[list[int]]:
    """Boundary sectors of the cut disk, grouped by region.

    Sector s runs from F_s to F_{s+1} and contains the suture alpha_s.
    Chord (a, b) has sectors a..b-1 on its inside; since chords do not
    cross, two sectors lie in one region exactly when every chord puts
    them on the same side.
    """
    n2 = 2 * cd.n
    groups: dict[frozenset[int], list[int]] = {}
    for s in range(1, n2 + 1):
        key = frozenset(k for k, (a, b) in enumerate(cd.pairs) if a <= s < b)
        groups.setdefault(key, []).append(s)
    return list(groups.values())


def disk_contact_element(cd: ChordDiagram, ring: str = RING_Z) -> ContactElement:
    """c(K) of a chord diagram, read off the positive regions directly.

    Within a disk region any path between sutures alpha_u and alpha_w is,
    rel the positive sutures, the boundary path u -> w, i.e. the sum of
    the beta_j it passes over.  The contact element is the wedge of these
    consecutive-suture paths over all positive regions, regions ordered
    by their smallest suture.  The tests cross-check this against the
    homology pipeline on the polygonal complex.
    """
    rank = cd.n - 1
    out = Multivector.unit(rank, ring)
    degree = 0
    for region in sorted(_region_sectors(cd), key=min):
        parity = {s % 2 for s in region}
        assert len(parity) == 1, "region touches boundary arcs of both signs"
        if parity == {0}:
            continue
        alphas = sorted(region)
        for u, w in zip(alphas, alphas[1:]):
            coeffs = [0] * rank
            for j in range(u, w, 2):
                coeffs[(j - 1) // 2] = 1
            out = out.wedge(Multivector.vector(rank, coeffs, ring))
            degree += 1
    assert not out.is_zero() and out.is_homogeneous()
    return ContactElement(value=out, grade=degree, ring=ring)


@dataclass(frozen=True)
class DiskContactTable:
    """Contact elements of every diagram on 2n sutures, keyed by diagram."""
    n: int
    ring: str
    table: dict


def disk_contact_table(n: int, ring: str = RING_F2) -> DiskContactTable:
    table = {}
    seen: dict[frozenset, ChordDiagram] = {}
    for cd in enumerate_chord_diagrams(n):
        ce = disk_contact_element(cd, ring)
        key = frozenset(ce.value.terms.items())
        if key in seen:
            raise AssertionError(
                f"contact elements of {cd.render()} and {seen[key].render()} collide")
        seen[key] = cd
        table[cd] = ce
    return DiskContactTable(n, ring, table)


# -- bypass rotations ------------------------------------------------------


@dataclass(frozen=True)
class BypassTriple:
    diagrams: tuple[ChordDiagram, ChordDiagram, ChordDiagram]

    def as_set(self) -> frozenset[ChordDiagram]:
        return frozenset(self.diagrams)


def _remade(n: int, pairs) -> ChordDiagram:
    fixed = tuple(sorted(tuple(sorted(p)) for p in pairs))
    return ChordDiagram(n, fixed)


def bypass_triple_at(cd: ChordDiagram, site) -> BypassTriple:
    """The three diagrams differing only in a half-disk around three
    consecutive sutures, by the 120-degree strand rotations.

    ``site`` lists three cyclically consecutive sutures (p, p+1, p+2).
    Each must be matched outside the site, so that the half-disk meets
    the diagram in three distinct strands; writing A, B, C for the outer
    partners, the rotations reconnect as {p q, p+2 A, B C} and
    {q p+2, p C, A B} with q = p+1.
    """
    n2 = 2 * cd.n
    site = tuple(site)
    if len(site) != 3 or any(not 1 <= p <= n2 for p in site):
        raise InvalidChordDiagramError(f"site {site} is not three sutures of 1..{n2}")
    a, b, c = site
    if b != a % n2 + 1 or c != b % n2 + 1:
        raise InvalidChordDiagramError("site sutures must be cyclically consecutive")
    m = cd.involution()
    if any(m[p] in site for p in site):
        raise InvalidChordDiagramError(
            "site does not meet the diagram in three distinct strands")
    ea, eb, ec = m[a], m[b], m[c]
    keep = [p for p in cd.pairs if not set(p) & {a, b, c}]
    up = _remade(cd.n, keep + [(a, b), (c, ea), (eb, ec)])
    down = _remade(cd.n, keep + [(b, c), (a, ec), (ea, eb)])
    return BypassTriple((cd, up, down))


# -- matchability ----------------------------------------------------------


def matching_curve_count(cd1: ChordDiagram, cd2: ChordDiagram) -> int:
    """Closed curves obtained by reflecting the second disk onto the back
    of the sphere: suture i lands on suture i, so the curves are the
    components of the union of the two matchings."""
    if cd1.n != cd2.n:
        raise ValidationError("diagrams must have the same number of chords")
    m1, m2 = cd1.involution(), cd2.involution()
    left = set(m1)
    count = 0
    while left:
        count += 1
        stack = [min(left)]
        while stack:
            x = stack.pop()
            if x not in left:
                continue
            left.discard(x)
            stack.extend((m1[x], m2[x]))
    return count


def matchable(cd1: ChordDiagram, cd2: ChordDiagram) -> bool:
    return matching_curve_count(cd1, cd2) == 1


def matchable_via_wedge(cd1: ChordDiagram, cd2: ChordDiagram,
                        ring: str = RING_Z) -> bool:
    """The product criterion: connected exactly when c(K1) ^ c(K2) is the
    top generator (up to sign over the integers)."""
    if cd1.n != cd2.n:
        raise ValidationError("diagrams must have the same number of chords")
    w = disk_contact_element(cd1, ring).value.wedge(disk_contact_element(cd2, ring).value)
    top = Multivector.top(cd1.n - 1, ring)
    if ring == RING_F2:
        return w == top
    return w == top or w == top.scale(-1)


# -- rotation maps and solid tori ------------------------------------------


def rotation_map(n: int, j: int) -> list[list[int]]:
    """Matrix of beta_i -> beta_{i+j} from the odd beta basis to the even
    one, indices folded mod 2n; the images landing on beta_{2n} are spent
    through the full-circle relation beta_2 + beta_4 + ... + beta_{2n} = 0.
    """
    if j % 2 == 0:
        raise ValidationError("rotation step must be odd")
    k = n - 1
    mat = [[0] * k for _ in range(k)]
    for s in range(k):
        t = (2 * s + 1 + j) % (2 * n)
        if t == 0:
            for r in range(k):
                mat[r][s] = -1
        else:
            mat[(t - 2) // 2][s] = 1
    return mat


def rotate_diagram(cd: ChordDiagram, steps: int) -> ChordDiagram:
    """Rotate every chord endpoint counterclockwise by ``steps`` sutures."""
    n2 = 2 * cd.n
    return _remade(cd.n, [(((a + steps - 1) % n2) + 1, ((b + steps - 1) % n2) + 1)
                          for a, b in cd.pairs])


@dataclass(frozen=True)
class TorusParameters:
    """Boundary data of a solid torus: 2n dividing curves of slope p/q."""
    n: int
    p: int
    q: int

    def __post_init__(self):
        if self.n < 1 or self.q < 1:
            raise ValidationError("need n >= 1 and q >= 1")
        if math.gcd(self.p, self.q) != 1:
            raise ValidationError("p and q must be coprime")

    @property
    def steps(self) -> int:
        return 2 * self.n * self.p + 1


def solid_torus_tight(cd: ChordDiagram, params: TorusParameters) -> bool:
    """Whether the meridian disk's dividing set gives the cut-open torus a
    tight boundary neighborhood: the pairing of the (2np+1)-step rotation
    of c(K) against c(K) is 1 mod 2."""
    big = params.n * params.q
    if cd.n != big:
        raise ValidationError(
            f"diagram has {cd.n} chords; parameters demand n*q = {big}")
    if big == 1:
        return True  # rank-0 algebra: <1 | 1> = 1
    c = disk_contact_element(cd, RING_F2).value
    mat = rotation_map(big, params.steps)
    y = induced_map(mat, Multivector(c.rank, dict(c.terms), RING_F2, dual=True))
    return DualStructure(disk_model(big), RING_F2).pair(y, c) == 1


# -- the annulus twist family ----------------------------------------------


def dehn_twist_action() -> tuple[tuple[int, int], ...]:
    """Action of a positive twist about the core on the annulus basis:
    beta_1 -> beta_1 + beta_2, beta_2 -> beta_2."""
    return ((1, 0), (1, 1))


def dehn_twist_family(n: int) -> ContactElement:
    """c(L_n) = beta_1 + n beta_2: the boundary-parallel arcs dragged
    around the core n times."""
    return ContactElement(value=Multivector.vector(2, [1, n], RING_Z),
                          grade=1, ring=RING_Z)
