"""Contact elements of dividing sets and the positive/negative duality.

Given a dividing set K, the contact element is built in three steps:
take the deterministic homology basis of the positive region R+ rel
``a_plus``, push its wedge into the ambient surface with a chosen basis
there, and project to exterior degree L(K).  When K is isolating the
pushed classes are dependent, so the wedge (and the element) vanishes;
nothing special-cases that.

The negative element mirrors everything through R-, ``a_minus`` and the
dual exterior algebra.  ``DualStructure`` identifies that algebra with
the linear dual of the positive one through a prescribed intersection
pairing, normalized so the two top generators pair to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dividing import DividingSet, negative_region, positive_region, regions
from .errors import InternalConsistencyError, ValidationError
from .exterior import (
    RING_F2,
    RING_Z,
    Multivector,
    indices_of,
    induced_map,
    interior,
    pair,
)
from .homology import HomologyBasis, RelativeH1
from .linalg import det_q, transpose
from .models import SurfaceModel
from .surface import Surface


@dataclass(frozen=True)
class HomologyOrientation:
    """A generator of the top exterior power of H_1(R+, a+; Z).

    Stored as a top-degree multivector in the region's deterministic
    basis; only its sign matters.
    """
    generator: Multivector

    def __post_init__(self):
        g = self.generator
        top = (1 << g.rank) - 1
        if set(g.terms) != {top}:
            raise ValidationError("orientation generator must be a single top-degree term")
        if self.sign not in (1, -1):
            raise ValidationError("orientation generator must be unimodular")

    @property
    def sign(self) -> int:
        top = (1 << self.generator.rank) - 1
        return self.generator.terms.get(top, 0)

    def reversed(self) -> "HomologyOrientation":
        return HomologyOrientation(self.generator.scale(-1))

    @classmethod
    def default(cls, rank: int, ring: str = RING_Z) -> "HomologyOrientation":
        return cls(Multivector.top(rank, ring))


@dataclass(frozen=True)
class ContactElement:
    value: Multivector
    grade: int
    ring: str

    def is_zero(self) -> bool:
        return self.value.is_zero()


@dataclass(frozen=True)
class ContactSubset:
    """The orientation-independent set {c(K, w), c(K, -w)} over Z."""
    members: frozenset[Multivector]

    @classmethod
    def of(cls, x: Multivector) -> "ContactSubset":
        return cls(frozenset((x, x.scale(-1))))

    def __contains__(self, x: Multivector) -> bool:
        return x in self.members


def default_basis(s: Surface, ring: str, side: str = "plus") -> HomologyBasis:
    """The generic basis of H_1(S, a+) (or a-) from the canonical coordinates."""
    marks = s.marks["alpha_plus" if side == "plus" else "alpha_minus"]
    return HomologyBasis(RelativeH1(s, sorted(marks)), ring)


def region_homology(ds: DividingSet, side: str = "plus") -> RelativeH1:
    if side == "plus":
        sub = positive_region(ds)
        rel = sorted(sub.marks["alpha_plus"])
    else:
        sub = negative_region(ds)
        rel = sorted(sub.marks["alpha_minus"])
    return RelativeH1(sub, rel)


def _element(ds: DividingSet, side: str, omega, ring: str,
             basis: HomologyBasis | None) -> ContactElement:
    dual = side == "minus"
    if basis is None:
        basis = default_basis(ds.surface, ring, side)
    hr = region_homology(ds, side)
    if omega is None:
        omega = HomologyOrientation.default(hr.rank, ring)
    if omega.generator.rank != hr.rank:
        raise ValidationError(
            f"orientation lives in rank {omega.generator.rank}, region has rank {hr.rank}")
    x = Multivector.unit(basis.rank, ring, dual=dual)
    for i in range(hr.rank):
        # subsurfaces keep halfedge ids, so region cycles are ambient chains
        v = Multivector.vector(basis.rank, basis.express(hr.representative(i)),
                               ring, dual=dual)
        x = x.wedge(v)
        if x.is_zero():
            break
    reg = regions(ds)
    grade = reg.l_k if side == "plus" else reg.l_minus_k
    return ContactElement(x.scale(omega.sign).grade_project(grade), grade, ring)


def contact_element(ds: DividingSet, omega: HomologyOrientation | None = None,
                    ring: str = RING_Z,
                    basis: HomologyBasis | None = None) -> ContactElement:
    """c(K): the degree-L(K) part of the pushed orientation class of R+.

    Over F2 the orientation argument is irrelevant and may be omitted;
    over Z omitting it selects the ascending wedge of the deterministic
    basis of H_1(R+, a+).  ``basis`` fixes the coordinates on the
    ambient H_1 (for disks and annuli, pass the model basis so results
    come out in beta coordinates).
    """
    return _element(ds, "plus", omega, ring, basis)


def negative_contact_element(ds: DividingSet, omega: HomologyOrientation | None = None,
                             ring: str = RING_Z,
                             basis: HomologyBasis | None = None) -> ContactElement:
    """c-(K): the mirror element through R-, graded by L-(K), dual-valued."""
    return _element(ds, "minus", omega, ring, basis)


def contact_subset(ds: DividingSet, basis: HomologyBasis | None = None) -> ContactSubset:
    """The pair {x, -x} of integral contact elements (order <= 2)."""
    return ContactSubset.of(contact_element(ds, ring=RING_Z, basis=basis).value)


class DualStructure:
    """Λ(H_1(S, a-)) identified with the dual of Λ(H_1(S, a+)).

    The identification sends the i-th negative basis class to the
    functional  x -> pairing[i][x]  and requires the two top generators
    to pair to exactly 1, which pins the model pairing normalizations.
    """

    def __init__(self, model: SurfaceModel, ring: str):
        self.model = model
        self.ring = ring
        self.rank = model.rank
        self._pt = transpose(model.pairing)
        d = int(det_q(model.pairing))
        want = 1 if ring == RING_Z else 1 & 1
        if (d if ring == RING_Z else d % 2) != want:
            raise InternalConsistencyError(
                f"top generators pair to {d}, expected 1 -- model pairing is off")

    def as_dual(self, y: Multivector) -> Multivector:
        """Re-coordinate a minus-basis multivector in the dual plus-basis."""
        if not y.dual:
            raise ValidationError("as_dual expects a dual (minus-side) multivector")
        return induced_map(self._pt, y)

    def omega_plus(self) -> Multivector:
        return Multivector.top(self.rank, self.ring)

    def omega_minus(self) -> Multivector:
        """Top dual generator, already in dual plus-coordinates."""
        return self.as_dual(Multivector.top(self.rank, self.ring, dual=True))

    def pair(self, y: Multivector, x: Multivector) -> int:
        """<y | x> for y in minus coordinates, x in plus coordinates."""
        return pair(self.as_dual(y), x)


def duality_check(ds: DividingSet, model: SurfaceModel, ring: str = RING_F2) -> bool:
    """Whether c+(K) = iota_{c-(K)} Omega+ and c-(K) = iota_{c+(K)} Omega-.

    Exact over F2; over Z each identity is tested up to its own sign,
    since the default orientations of R+ and R- are chosen independently.
    """
    dual = DualStructure(model, ring)
    cp = contact_element(ds, ring=ring, basis=model.basis_plus(ring)).value
    cm = negative_contact_element(ds, ring=ring, basis=model.basis_minus(ring)).value
    cmd = dual.as_dual(cm)
    got_p = interior(cmd, dual.omega_plus())
    got_m = interior(cp, dual.omega_minus())
    if ring == RING_F2:
        return got_p == cp and got_m == cmd
    return (got_p in (cp, cp.scale(-1))) and (got_m in (cmd, cmd.scale(-1)))


def render_multivector(x: Multivector, labels=None) -> str:
    """Text form with named generators, e.g. ``b1^b2 + b1^b3``."""
    if x.is_zero():
        return "0"
    if labels is None:
        labels = [f"e{i + 1}" for i in range(x.rank)]
    parts = []
    for m in sorted(x.terms, key=lambda m: (bin(m).count("1"), m)):
        c = x.terms[m]
        if not m:
            parts.append(str(c))
            continue
        body = "^".join(labels[i] for i in indices_of(m))
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts)
