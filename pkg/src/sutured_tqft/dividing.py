"""Dividing sets: oriented interior multicurves with a compatible face coloring.

A dividing set on a marked surface is a collection K of interior edges,
each carrying an orientation, together with a sign for every face.  The
rules (checked by :func:`dividing_set_violations`):

  * K edges are interior and pairwise distinct;
  * each chosen halfedge keeps its positive face on the left: the face
    containing it is +, the face containing its reversal is -;
  * faces meeting across a non-K interior edge share their sign, and a
    face touching a boundary arc matches that arc (+ for arcs through
    ``a_plus``, - for arcs through ``a_minus``);
  * the boundary of K as a 0-chain is  sum(F+) - sum(F-);
  * no vertex meets more than two K edges; sutures meet exactly one and
    other boundary vertices none.

Closed K components (circles) are allowed.  ``regions`` computes the
positive/negative subsurfaces R+ / R- and the grading

    L(K) = n(F) - euler(R+),

together with the counts of isolated components (components of R+ or R-
with no boundary arc).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidChordDiagramError, InvalidDividingSetError
from .surface import (
    Refinement,
    Surface,
    add_detached_circle,
    chain_boundary,
    chain_from_path,
    disk_position,
    split_face,
    standard_disk,
    subdivide_edge,
    subsurface,
)
from .models import SurfaceModel, annulus_model


def boundary_arc_signs(s: Surface) -> dict[int, int]:
    """Sign of the boundary arc through each boundary halfedge.

    Walking a boundary circle, the arc sign flips to + at every F_plus
    vertex and to - at every F_minus vertex; subdivision vertices keep
    the running sign.
    """
    out: dict[int, int] = {}
    for circle in s.boundary_circles():
        start = None
        for idx, h in enumerate(circle):
            if s.mark_of(s.tail(h)) in ("F_plus", "F_minus"):
                start = idx
                break
        assert start is not None, "boundary circle has no suture"
        sign = 0
        for i in range(len(circle)):
            h = circle[(start + i) % len(circle)]
            kind = s.mark_of(s.tail(h))
            if kind == "F_plus":
                sign = 1
            elif kind == "F_minus":
                sign = -1
            out[h] = sign
    return out


def infer_face_signs(s: Surface, k_edges) -> dict[int, int]:
    """Propagate the face coloring forced by K and the boundary arcs.

    Seeds every face touching the boundary from its arc signs, then
    spreads inward: equal across plain interior edges, flipped across K.
    Raises InvalidDividingSetError when the constraints clash or some
    face stays unreachable.
    """
    kset = {s.canonical(h) for h in k_edges}
    signs: dict[int, int] = {}
    queue: list[int] = []
    for h, sign in boundary_arc_signs(s).items():
        f = s.face_of(h)
        if signs.get(f, sign) != sign:
            raise InvalidDividingSetError(f"face {f} touches boundary arcs of both signs")
        if f not in signs:
            signs[f] = sign
            queue.append(f)
    while queue:
        f = queue.pop()
        for h in s.faces[f]:
            t = s.twin[h]
            if not s.in_face(t):
                continue
            g = s.face_of(t)
            want = -signs[f] if s.canonical(h) in kset else signs[f]
            if g in signs:
                if signs[g] != want:
                    raise InvalidDividingSetError(
                        f"faces {f} and {g} force an inconsistent coloring")
            else:
                signs[g] = want
                queue.append(g)
    if len(signs) != len(s.faces):
        missing = sorted(set(range(len(s.faces))) - set(signs))
        raise InvalidDividingSetError(f"coloring does not reach faces {missing}")
    return signs


def orient_by_signs(s: Surface, k_edges, signs: dict[int, int]) -> tuple[int, ...]:
    """Pick, for each K edge, the halfedge living in its positive face."""
    out = []
    for e in k_edges:
        h = s.canonical(e)
        t = s.twin[h]
        if signs[s.face_of(h)] > 0:
            out.append(h)
        else:
            assert signs[s.face_of(t)] > 0, f"edge {h} borders two negative faces"
            out.append(t)
    return tuple(out)


def dividing_set_violations(s: Surface, k_halfedges, face_signs) -> list[str]:
    """All rule violations for a would-be dividing set (empty = valid)."""
    out: list[str] = []
    k = list(k_halfedges)
    for h in k:
        if h not in s.twin:
            return [f"unknown halfedge {h}"]
    if len({s.canonical(h) for h in k}) != len(k):
        out.append("repeated K edge")
    for h in k:
        if not s.is_interior_edge(h):
            out.append(f"K edge {h} is not interior")
    if sorted(face_signs) != list(range(len(s.faces))):
        out.append("face_signs keys do not match faces")
        return out
    if any(v not in (1, -1) for v in face_signs.values()):
        out.append("face signs must be +1 or -1")
        return out
    for h in k:
        if not s.is_interior_edge(h):
            continue
        if face_signs[s.face_of(h)] != 1:
            out.append(f"K halfedge {h} does not keep its positive face on the left")
        if face_signs[s.face_of(s.twin[h])] != -1:
            out.append(f"K halfedge {h} has a non-negative face on its right")
    kset = {s.canonical(h) for h in k}
    for e in s.edges():
        if e in kset or not s.is_interior_edge(e):
            continue
        if face_signs[s.face_of(e)] != face_signs[s.face_of(s.twin[e])]:
            out.append(f"sign change across the plain edge {e}")
    for h, sign in boundary_arc_signs(s).items():
        if face_signs[s.face_of(h)] != sign:
            out.append(f"face {s.face_of(h)} disagrees with its boundary arc")
    want = {v: 1 for v in s.marks["F_plus"]}
    for v in s.marks["F_minus"]:
        want[v] = want.get(v, 0) - 1
    got = chain_boundary(s, chain_from_path(s, k)) if k else {}
    if got != want:
        out.append("boundary of K is not sum(F+) - sum(F-)")
    degree: dict[int, int] = {}
    for h in k:
        degree[s.tail(h)] = degree.get(s.tail(h), 0) + 1
        degree[s.head[h]] = degree.get(s.head[h], 0) + 1
    for v, d in degree.items():
        if d > 2:
            out.append(f"vertex {v} meets {d} K edges")
    for v in s.vertices:
        kind = s.mark_of(v)
        if kind in ("F_plus", "F_minus") and degree.get(v, 0) != 1:
            out.append(f"suture {v} meets {degree.get(v, 0)} K edges")
        elif v in s.boundary_vertices() and kind not in ("F_plus", "F_minus") \
                and degree.get(v, 0) != 0:
            out.append(f"boundary vertex {v} meets K away from the sutures")
    return out


class DividingSet:
    """An oriented dividing multicurve plus its face coloring.

    ``k_halfedges`` each keep their positive face on the left; the
    coloring is stored explicitly so that degenerate surfaces with no
    boundary-adjacent face still make sense.
    """

    def __init__(self, surface: Surface, k_halfedges, face_signs, check: bool = True):
        self.surface = surface
        self.k_halfedges = tuple(k_halfedges)
        self.face_signs = dict(face_signs)
        if check:
            bad = dividing_set_violations(surface, self.k_halfedges, self.face_signs)
            if bad:
                raise InvalidDividingSetError("; ".join(bad))

    def k_edges(self) -> set[int]:
        return {self.surface.canonical(h) for h in self.k_halfedges}

    def to_json_dict(self) -> dict:
        d = self.surface.to_json_dict()
        d["K"] = sorted(self.k_halfedges)
        d["signs"] = {str(f): ("+" if v > 0 else "-")
                      for f, v in sorted(self.face_signs.items())}
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "DividingSet":
        s = Surface.from_json_dict(d)
        signs = {int(f): (1 if v == "+" else -1) for f, v in d["signs"].items()}
        return cls(s, [int(h) for h in d["K"]], signs)


@dataclass(frozen=True)
class RegionDecomposition:
    """Connected pieces of the complement of K, with gradings.

    ``components`` lists (sign, faces, isolated) triples; a piece is
    isolated when none of its faces touches the surface boundary.
    """
    components: tuple[tuple[int, frozenset[int], bool], ...]
    faces_plus: frozenset[int]
    faces_minus: frozenset[int]
    i_plus: int
    i_minus: int
    l_k: int
    l_minus_k: int

    def is_non_isolating(self) -> bool:
        return self.i_plus == 0 and self.i_minus == 0


def regions(ds: DividingSet) -> RegionDecomposition:
    s = ds.surface
    kset = ds.k_edges()
    parent = list(range(len(s.faces)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in s.edges():
        if e in kset or not s.is_interior_edge(e):
            continue
        a, b = find(s.face_of(e)), find(s.face_of(s.twin[e]))
        if a != b:
            parent[a] = b
    groups: dict[int, set[int]] = {}
    for f in range(len(s.faces)):
        groups.setdefault(find(f), set()).add(f)
    touches = {f for f in range(len(s.faces))
               if any(not s.in_face(s.twin[h]) for h in s.faces[f])}
    comps = []
    for faces in groups.values():
        sign = ds.face_signs[next(iter(faces))]
        assert all(ds.face_signs[f] == sign for f in faces)
        comps.append((sign, frozenset(faces), not (faces & touches)))
    comps.sort(key=lambda c: min(c[1]))
    fplus = frozenset(f for sign, faces, _ in comps if sign > 0 for f in faces)
    fminus = frozenset(f for sign, faces, _ in comps if sign < 0 for f in faces)
    n = len(s.marks["F_plus"])
    l_k = n - subsurface(s, sorted(fplus)).euler_characteristic() if fplus else n
    l_m = n - subsurface(s, sorted(fminus)).euler_characteristic() if fminus else n
    return RegionDecomposition(
        components=tuple(comps),
        faces_plus=fplus,
        faces_minus=fminus,
        i_plus=sum(1 for sign, _, iso in comps if iso and sign > 0),
        i_minus=sum(1 for sign, _, iso in comps if iso and sign < 0),
        l_k=l_k,
        l_minus_k=l_m,
    )


def is_non_isolating(ds: DividingSet) -> bool:
    return regions(ds).is_non_isolating()


def positive_region(ds: DividingSet) -> Surface:
    """The subsurface R+ spanned by the positive faces (marks restricted)."""
    return subsurface(ds.surface, sorted(regions(ds).faces_plus))


def negative_region(ds: DividingSet) -> Surface:
    return subsurface(ds.surface, sorted(regions(ds).faces_minus))


def add_trivial_circle(ds: DividingSet, face_id: int, pos: int = 0) -> tuple[DividingSet, Refinement]:
    """Insert a contractible K circle inside the given face.

    The circle bounds a 2-gon whose sign is opposite to the ambient
    face, so the new piece is always isolated; the result fails
    ``is_non_isolating`` by construction.
    """
    ref, (a, b), inner = add_detached_circle(ds.surface, face_id, pos)
    s2 = ref.surface
    signs = dict(ds.face_signs)
    signs[inner] = -signs[face_id]
    if signs[face_id] > 0:
        k_new = (s2.twin[a], s2.twin[b])
    else:
        k_new = (a, b)
    return DividingSet(s2, ds.k_halfedges + k_new, signs), ref


# -- chord diagrams on the standard disk ----------------------------------

@dataclass(frozen=True)
class ChordDiagram:
    """A noncrossing perfect matching of the 2n sutures of a disk.

    Pairs are stored as (min, max) in increasing order of the first
    entry; the text form joins them with commas, e.g. ``"1-4,2-3"``.
    """
    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        flat = sorted(p for pair in self.pairs for p in pair)
        if flat != list(range(1, 2 * self.n + 1)):
            raise InvalidChordDiagramError(f"pairs do not match the sutures 1..{2 * self.n}")
        if any(a > b for a, b in self.pairs):
            raise InvalidChordDiagramError("pairs must be (low, high)")
        if list(self.pairs) != sorted(self.pairs):
            raise InvalidChordDiagramError("pairs must be sorted")
        for a, b in self.pairs:
            if (a + b) % 2 == 0:
                raise InvalidChordDiagramError(f"chord {a}-{b} joins sutures of one region parity")
        ps = list(self.pairs)
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                a, b = ps[i]
                c, d = ps[j]
                if a < c < b < d:
                    raise InvalidChordDiagramError(f"chords {a}-{b} and {c}-{d} cross")

    @classmethod
    def parse(cls, text: str) -> "ChordDiagram":
        pairs = []
        for part in text.split(","):
            a, _, b = part.strip().partition("-")
            try:
                lo, hi = sorted((int(a), int(b)))
            except ValueError:
                raise InvalidChordDiagramError(
                    f"chord {part.strip()!r} is not of the form a-b") from None
            pairs.append((lo, hi))
        pairs.sort()
        return cls(len(pairs), tuple(pairs))

    def render(self) -> str:
        return ",".join(f"{a}-{b}" for a, b in self.pairs)

    def involution(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out


def enumerate_chord_diagrams(n: int) -> list[ChordDiagram]:
    """All noncrossing diagrams on 2n points, lexicographic on pair lists."""

    def match(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
        if not points:
            return [[]]
        first = points[0]
        out = []
        for idx in range(1, len(points), 2):
            pair = (first, points[idx])
            for left in match(points[1:idx]):
                for right in match(points[idx + 1:]):
                    out.append([pair] + left + right)
        return out

    diagrams = [ChordDiagram(n, tuple(sorted(ps)))
                for ps in match(tuple(range(1, 2 * n + 1)))]
    diagrams.sort(key=lambda cd: cd.pairs)
    return diagrams


def chord_to_dividing_set(cd: ChordDiagram) -> DividingSet:
    """Realize a chord diagram as chords of the standard disk.

    Each pair (a, b) becomes a face chord F_a -- F_b; the pairs are
    inserted in stored order, which always finds the two endpoints on a
    common face because the diagram is noncrossing.  The original
    boundary halfedges keep their ids, so the disk's boundary-path
    classes need no transport.
    """
    s = standard_disk(cd.n)
    chords = []
    for a, b in cd.pairs:
        va, vb = disk_position("F", a), disk_position("F", b)
        spot = None
        for fi, walk in enumerate(s.faces):
            tails = [s.tail(h) for h in walk]
            if va in tails and vb in tails:
                spot = (fi, tails.index(va), tails.index(vb))
                break
        assert spot is not None, f"chord {a}-{b} has no common face"
        ref, chord, _, _ = split_face(s, *spot)
        s = ref.surface
        chords.append(chord)
    signs = infer_face_signs(s, chords)
    return DividingSet(s, orient_by_signs(s, chords, signs), signs)


# -- annulus fixtures ------------------------------------------------------

class _Builder:
    """Scratch pad for carving dividing sets out of a model surface."""

    def __init__(self, model: SurfaceModel):
        self.model = model
        self.s = model.surface
        self.ref: Refinement | None = None

    def _absorb(self, ref: Refinement) -> None:
        self.ref = ref if self.ref is None else self.ref.then(ref)
        self.s = ref.surface

    def halfedge(self, u: int, v: int) -> int:
        hits = [h for h in self.s.twin if self.s.tail(h) == u and self.s.head[h] == v]
        assert len(hits) == 1, f"halfedge {u}->{v} is not unique"
        return hits[0]

    def subdivide(self, u: int, v: int) -> int:
        ref, m = subdivide_edge(self.s, self.halfedge(u, v))
        self._absorb(ref)
        return m

    def split(self, face_id: int, va: int, vb: int) -> tuple[int, int, int]:
        walk = self.s.faces[face_id]
        tails = [self.s.tail(h) for h in walk]
        ref, a, side, comp = split_face(self.s, face_id, tails.index(va), tails.index(vb))
        self._absorb(ref)
        return a, side, comp

    def finish(self, k_edges) -> tuple[SurfaceModel, DividingSet]:
        signs = infer_face_signs(self.s, k_edges)
        ds = DividingSet(self.s, orient_by_signs(self.s, k_edges, signs), signs)
        model = self.model.transport(self.ref) if self.ref is not None else self.model
        return model, ds


# Vertices of the annulus model: outer circle O0..O3 = 0..3 with the
# sutures at O0 (F+) and O2 (F-), inner circle I0..I3 = 4..7 with the
# sutures at I0 (F+) and I2 (F-); two radial edges O0--I0 and O2--I2
# separate the square faces U (outer arc O0->O2) and W (arc O2->O0).
_O0, _O1, _O2, _O3 = 0, 1, 2, 3
_I0, _I1, _I2, _I3 = 4, 5, 6, 7
_U, _W = 0, 1


def _fixture_L0(b: _Builder) -> list[int]:
    a1, _, _ = b.split(_U, _O0, _I2)
    a2, _, _ = b.split(_W, _O2, _I0)
    return [a1, a2]


def _fixture_L1(b: _Builder) -> list[int]:
    # The crossing arcs routed the other way around the annulus: each
    # winds an extra half turn, one twist of the core circle from L0.
    a1, _, _ = b.split(_U, _O2, _I0)
    a2, _, _ = b.split(_W, _O0, _I2)
    return [a1, a2]


def _fixture_K_plus(b: _Builder) -> list[int]:
    a1, _, _ = b.split(_U, _O0, _O2)
    a2, _, _ = b.split(_W, _I0, _I2)
    return [a1, a2]


def _fixture_K_minus(b: _Builder) -> list[int]:
    a1, _, _ = b.split(_W, _O2, _O0)
    a2, _, _ = b.split(_U, _I2, _I0)
    return [a1, a2]


def _fixture_K0(b: _Builder) -> list[int]:
    w0 = b.subdivide(_O0, _I0)
    w2 = b.subdivide(_O2, _I2)
    a1, _, _ = b.split(_U, _O0, _O2)
    a2, side, _ = b.split(_U, w2, w0)
    a3, _, _ = b.split(side, _I2, _I0)
    a4, _, _ = b.split(_W, w0, w2)
    return [a1, a2, a3, a4]


def _fixture_K1(b: _Builder) -> list[int]:
    w0 = b.subdivide(_O0, _I0)
    w2 = b.subdivide(_O2, _I2)
    a1, _, _ = b.split(_W, _O2, _O0)
    a2, side, _ = b.split(_W, w0, w2)
    a3, _, _ = b.split(side, _I0, _I2)
    a4, _, _ = b.split(_U, w2, w0)
    return [a1, a2, a3, a4]


_ANNULUS_FIXTURES = {
    "L0": _fixture_L0,
    "L1": _fixture_L1,
    "K+": _fixture_K_plus,
    "K-": _fixture_K_minus,
    "K0": _fixture_K0,
    "K1": _fixture_K1,
}

ANNULUS_FIXTURE_NAMES = tuple(sorted(_ANNULUS_FIXTURES))


def annulus_fixture(name: str) -> tuple[SurfaceModel, DividingSet]:
    """One of the six standard annulus dividing sets.

    ``L0``/``L1`` are the two boundary-parallel arc pairs (the second
    wraps an extra half turn each way); ``K+``/``K-`` cut off the two
    positive, resp. negative, boundary arcs; ``K0``/``K1`` each carry a
    core circle plus two arcs, with the circle oriented the two
    possible ways.  Returns the transported homology model and the
    dividing set on a common refined surface.
    """
    key = name.replace("_plus", "+").replace("_minus", "-")
    if key not in _ANNULUS_FIXTURES:
        raise KeyError(f"unknown annulus fixture {name!r}; have {ANNULUS_FIXTURE_NAMES}")
    b = _Builder(annulus_model())
    return b.finish(_ANNULUS_FIXTURES[key](b))
