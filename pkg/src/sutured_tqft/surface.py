"""Combinatorial sutured surfaces as halfedge complexes.

A surface is a finite 2-complex: vertices, halfedges paired by a twin
involution, and faces given as closed counterclockwise walks of
halfedges.  Every halfedge appears in at most one face walk; an edge
whose two halfedges both lie in walks is interior.  A *boundary
halfedge* is a face-resident halfedge whose reversal lies in no face;
following boundary halfedges head-to-tail traverses each boundary
circle with its induced orientation (surface on the left).

The sutured structure marks four disjoint sets of boundary vertices
(``F_plus``, ``alpha_plus``, ``F_minus``, ``alpha_minus``); on every
boundary circle the marked vertices must repeat the cyclic pattern
F+ a+ F- a- with the same positive multiplicity for all four sets.

1-chains on the complex are dicts mapping the canonical halfedge of an
edge (the smaller id of the twin pair) to an integer coefficient.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidSurfaceError

__all__ = [
    "Surface",
    "MARK_KEYS",
    "validate_complex",
    "validate_marking",
    "validate_surface",
    "standard_disk",
    "disk_position",
    "subsurface",
    "disjoint_union",
    "chain_from_path",
    "chain_boundary",
    "chain_add",
    "chain_scale",
    "face_boundary_chain",
    "transport_chain",
    "Refinement",
    "subdivide_edge",
    "split_face",
    "add_detached_circle",
]

MARK_KEYS = ("F_plus", "alpha_plus", "F_minus", "alpha_minus")


class Surface:
    """Halfedge complex with sutured boundary marks."""

    def __init__(self, twin: dict[int, int], head: dict[int, int],
                 faces: list[list[int]], marks: dict[str, set[int]] | None = None):
        self.twin = dict(twin)
        self.head = dict(head)
        self.faces = [list(w) for w in faces]
        self.marks = {k: set() for k in MARK_KEYS}
        if marks:
            for k, vs in marks.items():
                if k not in MARK_KEYS:
                    raise InvalidSurfaceError(f"unknown mark class {k!r}")
                self.marks[k] = set(vs)
        self._face_of: dict[int, int] | None = None

    # -- basic accessors --------------------------------------------------
    @property
    def vertices(self) -> set[int]:
        return set(self.head.values())

    def tail(self, h: int) -> int:
        return self.head[self.twin[h]]

    def canonical(self, h: int) -> int:
        return min(h, self.twin[h])

    def edges(self) -> list[int]:
        return sorted(h for h in self.twin if h < self.twin[h])

    def face_of(self, h: int) -> int | None:
        if self._face_of is None:
            self._face_of = {}
            for fi, walk in enumerate(self.faces):
                for x in walk:
                    self._face_of[x] = fi
        return self._face_of.get(h)

    def in_face(self, h: int) -> bool:
        return self.face_of(h) is not None

    def is_interior_edge(self, h: int) -> bool:
        return self.in_face(h) and self.in_face(self.twin[h])

    def is_boundary_halfedge(self, h: int) -> bool:
        """Face-resident halfedge whose reversal lies in no face."""
        return self.in_face(h) and not self.in_face(self.twin[h])

    def boundary_halfedges(self) -> list[int]:
        return sorted(h for h in self.twin if self.is_boundary_halfedge(h))

    def boundary_vertices(self) -> set[int]:
        out = set()
        for h in self.twin:
            if self.is_boundary_halfedge(h):
                out.add(self.head[h])
                out.add(self.tail(h))
        return out

    def walk_next(self, h: int) -> int:
        fi = self.face_of(h)
        assert fi is not None, f"halfedge {h} lies in no face"
        walk = self.faces[fi]
        return walk[(walk.index(h) + 1) % len(walk)]

    def walk_prev(self, h: int) -> int:
        fi = self.face_of(h)
        assert fi is not None, f"halfedge {h} lies in no face"
        walk = self.faces[fi]
        return walk[walk.index(h) - 1]

    def boundary_circles(self) -> list[list[int]]:
        """Boundary circles as halfedge cycles in the induced orientation."""
        succ: dict[int, int] = {}
        for h in self.twin:
            if self.is_boundary_halfedge(h):
                succ.setdefault(self.tail(h), h)
        remaining = {h for h in self.twin if self.is_boundary_halfedge(h)}
        circles = []
        while remaining:
            start = min(remaining)
            circle = [start]
            remaining.discard(start)
            cur = start
            while True:
                nxt = succ.get(self.head[cur])
                if nxt is None or nxt == start:
                    break
                circle.append(nxt)
                remaining.discard(nxt)
                cur = nxt
            circles.append(circle)
        return circles

    def outgoing_fan(self, v: int) -> list[int]:
        """Outgoing halfedges at v in counterclockwise order.

        For a boundary vertex the fan starts at the outgoing boundary
        halfedge and ends at the faceless reversal of the incoming one;
        for an interior vertex it is a cycle cut at the smallest id.
        The counterclockwise successor of outgoing h is twin(walk_prev(h)).
        """
        outgoing = [h for h in self.twin if self.tail(h) == v]
        if not outgoing:
            return []
        starts = [h for h in outgoing if self.is_boundary_halfedge(h)]
        start = starts[0] if starts else min(outgoing)
        fan = [start]
        cur = start
        while True:
            if not self.in_face(cur):
                break  # rotated off the surface at a boundary vertex
            nxt = self.twin[self.walk_prev(cur)]
            if nxt == start:
                break
            fan.append(nxt)
            cur = nxt
        return fan

    # -- global invariants ------------------------------------------------
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges()) + len(self.faces)

    def components(self) -> list[set[int]]:
        """Vertex sets of connected components (edge connectivity)."""
        parent = {v: v for v in self.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in self.twin:
            a, b = find(self.head[h]), find(self.tail(h))
            if a != b:
                parent[a] = b
        comps: dict[int, set[int]] = {}
        for v in self.vertices:
            comps.setdefault(find(v), set()).add(v)
        return sorted(comps.values(), key=min)

    def genus(self) -> int:
        """Total genus, summed over components."""
        circles = self.boundary_circles()
        total = 0
        for comp in self.components():
            b = sum(1 for c in circles if self.tail(c[0]) in comp)
            edge_count = sum(1 for e in self.edges() if self.head[e] in comp)
            face_count = sum(1 for w in self.faces if self.head[w[0]] in comp)
            chi = len(comp) - edge_count + face_count
            total += (2 - chi - b) // 2
        return total

    def n_of_f(self) -> int:
        return len(self.marks["F_plus"])

    def mark_of(self, v: int) -> str | None:
        for k in MARK_KEYS:
            if v in self.marks[k]:
                return k
        return None

    # -- copying and relabeling -------------------------------------------
    def copy(self) -> "Surface":
        return Surface(self.twin, self.head, self.faces,
                       {k: set(vs) for k, vs in self.marks.items()})

    def relabel(self, vmap: dict[int, int] | None = None,
                hmap: dict[int, int] | None = None,
                face_order: list[int] | None = None) -> "Surface":
        vmap = vmap or {}
        hmap = hmap or {}
        twin = {hmap.get(h, h): hmap.get(t, t) for h, t in self.twin.items()}
        head = {hmap.get(h, h): vmap.get(v, v) for h, v in self.head.items()}
        faces = [[hmap.get(h, h) for h in w] for w in self.faces]
        if face_order is not None:
            faces = [faces[i] for i in face_order]
        marks = {k: {vmap.get(v, v) for v in vs} for k, vs in self.marks.items()}
        return Surface(twin, head, faces, marks)

    def fresh_vertex(self) -> int:
        return max(self.vertices, default=-1) + 1

    def fresh_halfedge(self) -> int:
        return max(self.twin, default=-1) + 1

    # -- JSON -------------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "halfedges": [{"id": h, "twin": self.twin[h], "head": self.head[h]}
                          for h in sorted(self.twin)],
            "faces": [list(w) for w in self.faces],
            "marks": {k: sorted(self.marks[k]) for k in MARK_KEYS},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict) -> "Surface":
        try:
            twin = {int(rec["id"]): int(rec["twin"]) for rec in data["halfedges"]}
            head = {int(rec["id"]): int(rec["head"]) for rec in data["halfedges"]}
            faces = [[int(h) for h in w] for w in data["faces"]]
            marks = {k: set(int(v) for v in data.get("marks", {}).get(k, []))
                     for k in MARK_KEYS}
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSurfaceError(f"malformed surface JSON: {exc}") from exc
        s = cls(twin, head, faces, marks)
        declared = set(int(v) for v in data.get("vertices", []))
        if declared and declared != s.vertices:
            raise InvalidSurfaceError("declared vertex set disagrees with halfedge heads")
        return s

    def __repr__(self) -> str:
        return (f"<Surface V={len(self.vertices)} E={len(self.edges())} "
                f"F={len(self.faces)} n(F)={self.n_of_f()}>")


# -- validation -----------------------------------------------------------

def validate_complex(s: Surface, allow_closed: bool = False) -> None:
    """Structural checks: twin involution, face walks, manifold links."""
    for h, t in s.twin.items():
        if t == h:
            raise InvalidSurfaceError(f"halfedge {h} is its own twin")
        if s.twin.get(t) != h:
            raise InvalidSurfaceError(f"twin map not an involution at {h}")
        if h not in s.head:
            raise InvalidSurfaceError(f"halfedge {h} has no head")
    for h in s.head:
        if h not in s.twin:
            raise InvalidSurfaceError(f"halfedge {h} has no twin")

    seen: set[int] = set()
    for fi, walk in enumerate(s.faces):
        if not walk:
            raise InvalidSurfaceError(f"face {fi} has empty walk")
        for x in walk:
            if x not in s.twin:
                raise InvalidSurfaceError(f"face {fi} references unknown halfedge {x}")
            if x in seen:
                raise InvalidSurfaceError(f"halfedge {x} appears twice in face walks")
            seen.add(x)
        for a, b in zip(walk, walk[1:] + walk[:1]):
            if s.head[a] != s.tail(b):
                raise InvalidSurfaceError(f"face {fi} walk breaks after halfedge {a}")

    for h in s.twin:
        if h < s.twin[h] and h not in seen and s.twin[h] not in seen:
            raise InvalidSurfaceError(f"edge {h}/{s.twin[h]} borders no face")

    # manifold boundary: exactly one boundary halfedge in and out at each
    # boundary vertex
    b_in: dict[int, int] = {}
    b_out: dict[int, int] = {}
    for h in s.twin:
        if s.is_boundary_halfedge(h):
            b_in[s.head[h]] = b_in.get(s.head[h], 0) + 1
            b_out[s.tail(h)] = b_out.get(s.tail(h), 0) + 1
    for v in set(b_in) | set(b_out):
        if b_in.get(v, 0) != 1 or b_out.get(v, 0) != 1:
            raise InvalidSurfaceError(f"boundary is pinched at vertex {v}")

    # umbrella condition: the rotational fan at each vertex covers all
    # outgoing halfedges exactly once, and closes up at interior vertices
    out_count: dict[int, int] = {}
    for h in s.twin:
        out_count[s.tail(h)] = out_count.get(s.tail(h), 0) + 1
    boundary_verts = s.boundary_vertices()
    for v in s.vertices:
        fan = s.outgoing_fan(v)
        if len(fan) != out_count.get(v, 0) or len(set(fan)) != len(fan):
            raise InvalidSurfaceError(f"vertex {v} is not locally a disk or half-disk")
        if v not in boundary_verts:
            last = fan[-1]
            if not s.in_face(last) or s.twin[s.walk_prev(last)] != fan[0]:
                raise InvalidSurfaceError(f"interior vertex {v} has a broken fan")

    if not allow_closed:
        for comp in s.components():
            if not comp & boundary_verts:
                raise InvalidSurfaceError("closed component (no boundary) present")


def validate_marking(s: Surface) -> None:
    """Sutured-marking checks: disjointness, location, cyclic pattern."""
    all_marked: set[int] = set()
    for k in MARK_KEYS:
        dup = all_marked & s.marks[k]
        if dup:
            raise InvalidSurfaceError(f"vertices {sorted(dup)} carry two marks")
        all_marked |= s.marks[k]
    boundary = s.boundary_vertices()
    stray = all_marked - boundary
    if stray:
        raise InvalidSurfaceError(f"marked vertices {sorted(stray)} are not on the boundary")

    pattern = ("F_plus", "alpha_plus", "F_minus", "alpha_minus")
    for circle in s.boundary_circles():
        marked = []
        for h in circle:
            m = s.mark_of(s.tail(h))
            if m:
                marked.append(m)
        if not marked or len(marked) % 4:
            raise InvalidSurfaceError(
                f"boundary circle carries {len(marked)} marks; need a positive multiple of 4")
        if "F_plus" not in marked:
            raise InvalidSurfaceError("boundary circle has no positive suture")
        start = marked.index("F_plus")
        rotated = marked[start:] + marked[:start]
        for i, m in enumerate(rotated):
            if m != pattern[i % 4]:
                raise InvalidSurfaceError(
                    f"marking pattern broken on a boundary circle: {rotated}")


def validate_surface(s: Surface) -> None:
    """Full check: valid complex, no closed components, valid marking."""
    validate_complex(s, allow_closed=False)
    validate_marking(s)


# -- chains ---------------------------------------------------------------

def chain_from_path(s: Surface, path: Sequence[int]) -> dict[int, int]:
    """1-chain of a halfedge path (oriented along the path)."""
    chain: dict[int, int] = {}
    for h in path:
        c = s.canonical(h)
        chain[c] = chain.get(c, 0) + (1 if h == c else -1)
    return {e: v for e, v in chain.items() if v}


def chain_add(a: dict[int, int], b: dict[int, int], bscale: int = 1) -> dict[int, int]:
    out = dict(a)
    for e, v in b.items():
        out[e] = out.get(e, 0) + bscale * v
    return {e: v for e, v in out.items() if v}


def chain_scale(a: dict[int, int], c: int) -> dict[int, int]:
    return {e: c * v for e, v in a.items() if c * v}


def chain_boundary(s: Surface, chain: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e, c in chain.items():
        for v, sgn in ((s.head[e], 1), (s.tail(e), -1)):
            out[v] = out.get(v, 0) + sgn * c
    return {v: c for v, c in out.items() if c}


def face_boundary_chain(s: Surface, fi: int) -> dict[int, int]:
    return chain_from_path(s, s.faces[fi])


# -- refinement -----------------------------------------------------------

@dataclass
class Refinement:
    """A refined surface plus transport data for chains and vertices.

    ``edge_map`` sends an old canonical halfedge to the (halfedge, sign)
    pieces replacing it (identity where absent); ``vertex_map`` is
    identity except where recorded.  Halfedge ids never get reused for a
    different edge, so identity defaults compose safely.
    """
    surface: Surface
    edge_map: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    vertex_map: dict[int, int] = field(default_factory=dict)

    def map_vertex(self, v: int) -> int:
        return self.vertex_map.get(v, v)

    def then(self, later: "Refinement") -> "Refinement":
        """Composite refinement (self first, then later)."""
        s1 = self.surface
        edge_map: dict[int, list[tuple[int, int]]] = {}
        for e, pieces in self.edge_map.items():
            out: list[tuple[int, int]] = []
            for h, sgn in pieces:
                c = s1.canonical(h)
                hsign = 1 if h == c else -1
                sub = later.edge_map.get(c)
                if sub is None:
                    out.append((h, sgn))
                else:
                    out.extend((hh, sgn * hsign * ss) for hh, ss in sub)
            edge_map[e] = out
        for e, sub in later.edge_map.items():
            if e not in edge_map:
                edge_map[e] = list(sub)
        vertex_map: dict[int, int] = {}
        for v in set(self.vertex_map) | set(later.vertex_map):
            v1 = self.vertex_map.get(v, v)
            vertex_map[v] = later.vertex_map.get(v1, v1)
        return Refinement(later.surface, edge_map, vertex_map)


def transport_chain(ref: Refinement, chain: dict[int, int]) -> dict[int, int]:
    """Push a 1-chain through a refinement."""
    s2 = ref.surface
    out: dict[int, int] = {}
    for e, c in chain.items():
        pieces = ref.edge_map.get(e, [(e, 1)])
        for h, sgn in pieces:
            ch = s2.canonical(h)
            out[ch] = out.get(ch, 0) + sgn * (1 if h == ch else -1) * c
    return {e: v for e, v in out.items() if v}


def subdivide_edge(s: Surface, h: int) -> tuple[Refinement, int]:
    """Split the edge of h at a fresh midpoint; returns (refinement, midpoint).

    Halfedge h keeps its id on the tail-side piece and twin(h) keeps its
    id on the head-side piece, so faceless twins stay faceless.
    """
    s2 = s.copy()
    t = s2.twin[h]
    u, v = s2.tail(h), s2.head[h]
    m = s2.fresh_vertex()
    h2 = s2.fresh_halfedge()
    t2 = h2 + 1
    # after: h: u->m twin t2: m->u;  h2: m->v twin t: v->m
    s2.head[h] = m
    s2.head[h2] = v
    s2.head[t] = m
    s2.head[t2] = u
    s2.twin[h], s2.twin[t2] = t2, h
    s2.twin[h2], s2.twin[t] = t, h2
    for walk in s2.faces:
        if h in walk:
            idx = walk.index(h)
            walk[idx:idx + 1] = [h, h2]
        if t in walk:
            idx = walk.index(t)
            walk[idx:idx + 1] = [t, t2]
    s2._face_of = None
    c = min(h, t)
    edge_map = {c: [(h, 1), (h2, 1)] if c == h else [(t, 1), (t2, 1)]}
    return Refinement(s2, edge_map), m


def split_face(s: Surface, face_id: int, i: int, j: int) -> tuple[Refinement, int, int, int]:
    """Split a face by a new edge between walk corners i and j.

    The corner at position p is the vertex where walk[p] starts.  Returns
    (refinement, halfedge a running corner i -> corner j, id of the face
    keeping walk[i:j], id of the complementary face).  The complement
    keeps ``face_id``, and a lies in it; the walk[i:j] side gets a fresh
    id and contains twin(a).
    """
    if i > j:
        i, j = j, i
    s2 = s.copy()
    walk = s2.faces[face_id]
    if not (0 <= i < j < len(walk)):
        raise InvalidSurfaceError(f"bad corner positions {i}, {j} for face of size {len(walk)}")
    vi, vj = s2.tail(walk[i]), s2.tail(walk[j])
    if vi == vj:
        raise InvalidSurfaceError("split_face corners share a vertex (loop edge)")
    a = s2.fresh_halfedge()
    b = a + 1
    s2.twin[a], s2.twin[b] = b, a
    s2.head[a], s2.head[b] = vj, vi
    side = walk[i:j] + [b]
    complement = walk[j:] + walk[:i] + [a]
    s2.faces[face_id] = complement
    s2.faces.append(side)
    s2._face_of = None
    return Refinement(s2), a, len(s2.faces) - 1, face_id


def add_detached_circle(s: Surface, face_id: int, pos: int) -> tuple[Refinement, tuple[int, int], int]:
    """Plant a 2-gon circle inside a face, joined by a keyhole edge.

    The keyhole runs from the corner at walk position ``pos`` to a fresh
    circle vertex; both its sides lie in the ambient face, so it is never
    eligible for a dividing set.  Returns (refinement, (a, b) circle
    halfedges bounding the inner 2-gon counterclockwise, inner face id).
    """
    s2 = s.copy()
    walk = s2.faces[face_id]
    w = s2.tail(walk[pos])
    c1 = s2.fresh_vertex()
    c2 = c1 + 1
    a = s2.fresh_halfedge()
    ta, b, tb, k, tk = a + 1, a + 2, a + 3, a + 4, a + 5
    s2.twin.update({a: ta, ta: a, b: tb, tb: b, k: tk, tk: k})
    s2.head.update({a: c2, ta: c1, b: c1, tb: c2, k: c1, tk: w})
    s2.faces.append([a, b])
    s2.faces[face_id] = walk[:pos] + [k, tb, ta, tk] + walk[pos:]
    s2._face_of = None
    return Refinement(s2), (a, b), len(s2.faces) - 1


# -- builders -------------------------------------------------------------

def standard_disk(n: int) -> Surface:
    """Disk with n positive sutures: 4n boundary vertices, one face.

    Counterclockwise boundary order F_1, a_1, F_2, a_2, ..., F_{2n}, a_{2n};
    odd-index sutures are positive.  Vertex ids equal boundary positions,
    so F_k sits at 2(k-1) and a_k at 2k-1.  Halfedge 2p runs p -> p+1
    inside the face; 2p+1 is its faceless twin.
    """
    if n < 1:
        raise InvalidSurfaceError("disk needs at least one positive suture")
    m = 4 * n
    twin: dict[int, int] = {}
    head: dict[int, int] = {}
    walk = []
    for p in range(m):
        h, t = 2 * p, 2 * p + 1
        twin[h], twin[t] = t, h
        head[h] = (p + 1) % m
        head[t] = p
        walk.append(h)
    marks = {
        "F_plus": {p for p in range(m) if p % 4 == 0},
        "alpha_plus": {p for p in range(m) if p % 4 == 1},
        "F_minus": {p for p in range(m) if p % 4 == 2},
        "alpha_minus": {p for p in range(m) if p % 4 == 3},
    }
    return Surface(twin, head, [walk], marks)


def disk_position(kind: str, k: int) -> int:
    """Boundary position (= vertex id in standard_disk) of F_k or a_k."""
    if kind == "F":
        return 2 * (k - 1)
    if kind == "a":
        return 2 * k - 1
    raise ValueError(f"unknown boundary mark kind {kind!r}")


def subsurface(s: Surface, face_ids: Sequence[int]) -> Surface:
    """Subcomplex spanned by the given faces (ids of cells preserved).

    Keeps every halfedge of a selected face together with its twin, so
    edges interior to the selection stay interior and selection-boundary
    edges become boundary edges.  Marks restrict to surviving vertices.
    The result may have closed components; validate accordingly.
    """
    chosen = sorted(set(face_ids))
    halfedges: set[int] = set()
    for fi in chosen:
        for h in s.faces[fi]:
            halfedges.add(h)
            halfedges.add(s.twin[h])
    twin = {h: s.twin[h] for h in halfedges}
    head = {h: s.head[h] for h in halfedges}
    faces = [list(s.faces[fi]) for fi in chosen]
    verts = set(head.values())
    marks = {k: s.marks[k] & verts for k in MARK_KEYS}
    return Surface(twin, head, faces, marks)


def disjoint_union(s1: Surface, s2: Surface) -> tuple[Surface, dict[int, int], dict[int, int]]:
    """Disjoint union; returns (surface, s2 vertex shift, s2 halfedge shift)."""
    voff = max(s1.vertices, default=-1) + 1
    hoff = max(s1.twin, default=-1) + 1
    vmap = {v: v + voff for v in s2.vertices}
    hmap = {h: h + hoff for h in s2.twin}
    twin = dict(s1.twin)
    head = dict(s1.head)
    for h, t in s2.twin.items():
        twin[hmap[h]] = hmap[t]
        head[hmap[h]] = vmap[s2.head[h]]
    faces = [list(w) for w in s1.faces] + [[hmap[h] for h in w] for w in s2.faces]
    marks = {k: set(s1.marks[k]) | {vmap[v] for v in s2.marks[k]} for k in MARK_KEYS}
    return Surface(twin, head, faces, marks), vmap, hmap
