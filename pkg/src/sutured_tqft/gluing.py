"""Boundary identification of sutured surfaces and the induced maps.

A gluing pairs two collections of boundary halfedges of one complex and
identifies them with reversed orientation.  Marked vertices caught in the
seam move to the interior; positive suture vertices that do so are
"swallowed", and the wedge of their boundary-evaluation functionals
orients the gluing.  The induced map on contact algebras is the interior
product against that wedge composed with the chain-level pushforward,
re-expressed in a homology basis of the glued surface.

Cutting along interior arcs is the inverse construction: `cut_open`
returns the cut surface together with the gluing that undoes it, and
`quadrangulate` iterates cuts until only square pieces remain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contact import contact_element, default_basis
from .dividing import DividingSet
from .errors import (
    InternalConsistencyError,
    InvalidGluingError,
    UnsupportedSurfaceError,
    ValidationError,
)
from .exterior import Multivector, indices_of, interior, induced_map, RING_F2, RING_Z
from .homology import HomologyBasis, RelativeH1, induced_matrix
from .linalg import f2_solve, invert_unimodular, solve_z
from .surface import (
    Refinement,
    Surface,
    split_face,
    subdivide_edge,
    validate_surface,
)

Chain = dict[int, int]

__all__ = [
    "Gluing",
    "GluedSurfaceData",
    "GluingOrientationEta",
    "DecompositionResult",
    "gluing_violations",
    "glue",
    "pushforward_class",
    "glued_relative_basis",
    "gluing_morphism",
    "push_dividing_set",
    "check_respect",
    "cut_open",
    "quadrangulate",
    "square_chord_family",
]

_OPPOSITE_MARK = {
    "F_plus": "F_minus",
    "F_minus": "F_plus",
    "alpha_plus": "alpha_plus",
    "alpha_minus": "alpha_minus",
    None: None,
}


# ---------------------------------------------------------------------------
# validation


def gluing_violations(host: Surface, gamma: tuple[int, ...],
                      gamma_prime: tuple[int, ...]) -> list[str]:
    """Reasons the pair of halfedge collections is not a valid gluing.

    gamma[i] is identified with gamma_prime[i] reversed, so the tail of one
    lands on the head of the other.  The collections may share vertices
    (identifications then chain up) but never edges, and no vertex may be
    identified with itself.
    """
    out: list[str] = []
    if len(gamma) != len(gamma_prime):
        out.append("gamma and gamma_prime have different lengths")
        return out
    for h in (*gamma, *gamma_prime):
        if h not in host.twin:
            out.append(f"unknown halfedge {h}")
            return out
        if not host.in_face(h) or not host.is_boundary_halfedge(h):
            out.append(f"halfedge {h} is not a face-resident boundary halfedge")
    if out:
        return out
    canon = [host.canonical(h) for h in (*gamma, *gamma_prime)]
    if len(set(canon)) != len(canon):
        out.append("gamma and gamma_prime reuse an edge")

    # The identification on vertices: tail(g) ~ head(g'), head(g) ~ tail(g').
    link: dict[int, int] = {}
    for g, gp in zip(gamma, gamma_prime):
        for a, b in ((host.tail(g), host.head[gp]), (host.head[g], host.tail(gp))):
            if a == b:
                out.append(f"vertex {a} would be glued to itself")
            elif link.setdefault(a, b) != b:
                out.append(f"vertex {a} sent to both {link[a]} and {b}")
    values = [b for _, b in sorted(link.items())]
    if len(set(values)) != len(values):
        out.append("vertex identification is not injective")
    for a, b in sorted(link.items()):
        ka, kb = host.mark_of(a), host.mark_of(b)
        if kb != _OPPOSITE_MARK[ka]:
            out.append(f"marks of glued vertices {a} ({ka}) and {b} ({kb}) clash")

    # Every end of an identified stretch must sit at a suture vertex, so
    # marked points never end up half-identified.
    degree: dict[int, int] = {}
    for h in (*gamma, *gamma_prime):
        for v in (host.tail(h), host.head[h]):
            degree[v] = degree.get(v, 0) + 1
    for v, d in sorted(degree.items()):
        if d > 2:
            out.append(f"vertex {v} is an endpoint of {d} glued halfedges")
        if d == 1 and host.mark_of(v) not in ("alpha_plus", "alpha_minus"):
            out.append(f"glued stretch ends at non-suture vertex {v}")

    if not out and gamma:
        # Reject identifications that close off a component entirely.
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for h in host.twin:
            a, b = find(host.tail(h)), find(host.head[h])
            if a != b:
                parent[a] = b
        for a, b in link.items():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        glued_edges = {host.canonical(h) for h in (*gamma, *gamma_prime)}
        open_comps = {find(host.tail(h)) for h in host.boundary_halfedges()
                      if host.canonical(h) not in glued_edges}
        for h in host.boundary_halfedges():
            if find(host.tail(h)) not in open_comps:
                out.append("gluing would close a component")
                break
    return out


class Gluing:
    """An orientation-reversing identification of two boundary collections.

    `gamma[i]` and `gamma_prime[i]` are face-resident boundary halfedges of
    `host`; the quotient welds them into one interior edge, matching the
    tail of each with the head of the other.
    """

    def __init__(self, host: Surface, gamma, gamma_prime, check: bool = True):
        self.host = host
        self.gamma = tuple(gamma)
        self.gamma_prime = tuple(gamma_prime)
        if check:
            problems = gluing_violations(host, self.gamma, self.gamma_prime)
            if problems:
                raise InvalidGluingError("; ".join(problems))

    def vertex_map(self) -> dict[int, int]:
        """Single-step identification of boundary vertices (both directions)."""
        link: dict[int, int] = {}
        for g, gp in zip(self.gamma, self.gamma_prime):
            link[self.host.tail(g)] = self.host.head[gp]
            link[self.host.head[g]] = self.host.tail(gp)
        return link

    def to_json_dict(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "gamma_prime": list(self.gamma_prime),
            "vertex_map": {str(a): b for a, b in sorted(self.vertex_map().items())},
        }

    @classmethod
    def from_json_dict(cls, host: Surface, data: dict) -> "Gluing":
        g = cls(host, tuple(data["gamma"]), tuple(data["gamma_prime"]))
        stated = {int(a): int(b) for a, b in data.get("vertex_map", {}).items()}
        if stated and stated != g.vertex_map():
            raise InvalidGluingError("stated vertex_map disagrees with halfedge data")
        return g

    def __repr__(self) -> str:
        return f"Gluing(gamma={self.gamma}, gamma_prime={self.gamma_prime})"


# ---------------------------------------------------------------------------
# the quotient surface


@dataclass(frozen=True)
class GluedSurfaceData:
    """Quotient complex of a gluing plus the bookkeeping to map into it.

    vertex_map / halfedge_map send host cells to quotient cells; the old
    faceless partner of each glued halfedge maps to the surviving halfedge
    on the opposite side.  `swallowed` lists positive suture vertices whose
    image left the boundary, by increasing quotient id.
    """

    gluing: Gluing
    result: Surface
    vertex_map: dict[int, int]
    halfedge_map: dict[int, int]
    swallowed: tuple[int, ...]


def glue(tau: Gluing) -> GluedSurfaceData:
    """Weld each gamma[i] to gamma_prime[i] reversed and remark the quotient."""
    host = tau.host

    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in tau.vertex_map().items():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    classes: dict[int, list[int]] = {}
    for v in host.vertices:
        classes.setdefault(find(v), []).append(v)
    vmap: dict[int, int] = {}
    for members in classes.values():
        root = min(members)
        for v in members:
            vmap[v] = root

    twin = dict(host.twin)
    head = dict(host.head)
    halfedge_map = {h: h for h in host.twin}
    for g, gp in zip(tau.gamma, tau.gamma_prime):
        tg, tgp = host.twin[g], host.twin[gp]
        twin[g] = gp
        twin[gp] = g
        for dead, alive in ((tg, gp), (tgp, g)):
            del twin[dead]
            del head[dead]
            halfedge_map[dead] = alive
    head = {h: vmap[v] for h, v in head.items()}
    faces = [list(w) for w in host.faces]

    result = Surface(twin, head, faces)
    boundary = result.boundary_vertices()
    swallowed = []
    for members in sorted(classes.values(), key=min):
        root = min(members)
        kinds = {k for k in (host.mark_of(v) for v in members) if k is not None}
        if not kinds:
            continue
        if len(members) == 1:
            (kind,) = kinds
            result.marks[kind].add(root)
            continue
        if kinds <= {"F_plus", "F_minus"}:
            # A marked point glued to a marked point becomes interior.
            if root in boundary:
                raise InternalConsistencyError(
                    f"glued mark class {root} is still on the boundary")
            continue
        if len(kinds) != 1:
            raise InternalConsistencyError(f"mixed mark class {sorted(members)}")
        (kind,) = kinds
        if root in boundary:
            result.marks[kind].add(root)
        elif kind == "alpha_plus":
            swallowed.append(root)
    validate_surface(result)
    return GluedSurfaceData(
        gluing=tau,
        result=result,
        vertex_map=vmap,
        halfedge_map=halfedge_map,
        swallowed=tuple(sorted(swallowed)),
    )


def pushforward_class(g: GluedSurfaceData, chain: Chain) -> Chain:
    """Image of a 1-chain on the host under the quotient map."""
    host, result = g.gluing.host, g.result
    out: Chain = {}
    for e, c in chain.items():
        ce = host.canonical(e)
        coeff = c if e == ce else -c
        h = g.halfedge_map[ce]
        ch = result.canonical(h)
        out[ch] = out.get(ch, 0) + (coeff if h == ch else -coeff)
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# the induced morphism of contact algebras


def glued_relative_basis(g: GluedSurfaceData, ring: str) -> HomologyBasis:
    """Generic basis of H_1 of the quotient rel the image of every old
    positive suture, swallowed ones included."""
    rel = sorted({g.vertex_map[v] for v in g.gluing.host.marks["alpha_plus"]})
    return HomologyBasis(RelativeH1(g.result, rel), ring)


@dataclass(frozen=True)
class GluingOrientationEta:
    """Ordered swallowed vertices plus a sign, orienting a gluing.

    Each vertex contributes the functional "coefficient of v in the
    boundary of a relative cycle"; eta is `sign` times the wedge of these
    functionals in the listed order.
    """

    vertices: tuple[int, ...]
    sign: int = 1

    @classmethod
    def default(cls, g: GluedSurfaceData) -> "GluingOrientationEta":
        return cls(tuple(sorted(g.swallowed)), 1)

    def functional(self, basis: HomologyBasis) -> Multivector:
        """eta as a dual multivector over the given basis of the quotient."""
        acc = Multivector.unit(basis.rank, basis.ring, dual=True)
        for v in self.vertices:
            row = basis.vertex_functional(v)
            acc = acc.wedge(Multivector.vector(basis.rank, row, basis.ring, dual=True))
        if self.sign == -1:
            acc = acc.scale(-1)
        return acc


def _express_in_sub_exterior(j: list[list[int]], y: Multivector,
                             src_rank: int, ring: str) -> Multivector:
    """Solve Lambda(J) x = y where J is the column matrix of a sub-basis."""
    nrows = len(j)
    cols = [Multivector.vector(nrows, [j[i][k] for i in range(nrows)], ring)
            for k in range(src_rank)]
    out_terms: dict[int, int] = {}
    for k in sorted({m.bit_count() for m in y.terms}):
        src_masks = [m for m in range(1 << src_rank) if m.bit_count() == k]
        wedges = []
        for mask in src_masks:
            acc = Multivector.unit(nrows, ring)
            for idx in indices_of(mask):
                acc = acc.wedge(cols[idx])
                if acc.is_zero():
                    break
            wedges.append(acc)
        tgt_masks = [m for m in range(1 << nrows) if m.bit_count() == k]
        yk = y.grade_project(k)
        if ring == RING_F2:
            rows = [sum(((w.terms.get(t, 0) & 1) << c) for c, w in enumerate(wedges))
                    for t in tgt_masks]
            b = [yk.terms.get(t, 0) & 1 for t in tgt_masks]
            sol = f2_solve(rows, b, len(src_masks))
        else:
            a = [[w.terms.get(t, 0) for w in wedges] for t in tgt_masks]
            b = [yk.terms.get(t, 0) for t in tgt_masks]
            sol = solve_z(a, b)
        if sol is None:
            raise InternalConsistencyError(
                "interior product left the image of the glued sub-basis")
        for mask, c in zip(src_masks, sol):
            if c:
                out_terms[mask] = c
    return Multivector(src_rank, out_terms, ring)


def gluing_morphism(g: GluedSurfaceData, x: Multivector,
                    eta: GluingOrientationEta | None = None,
                    host_basis: HomologyBasis | None = None,
                    result_basis: HomologyBasis | None = None) -> Multivector:
    """Push a multivector through a gluing: pushforward, contract with eta,
    then rewrite in a basis of H_1 of the quotient rel its own sutures."""
    ring = x.ring
    hb = host_basis if host_basis is not None else default_basis(g.gluing.host, ring)
    if x.rank != hb.rank:
        raise ValidationError(f"input rank {x.rank} != host basis rank {hb.rank}")
    if x.dual:
        raise ValidationError("gluing morphism acts on primal multivectors")
    mid = glued_relative_basis(g, ring)
    m = induced_matrix(hb, mid, push=lambda c: pushforward_class(g, c))
    phix = induced_map(m, x, target_rank=mid.rank)
    if eta is None:
        eta = GluingOrientationEta.default(g)
    eta_mv = eta.functional(mid)
    if eta.vertices and eta_mv.is_zero():
        raise InternalConsistencyError("orientation functionals are dependent")
    y = interior(eta_mv, phix)
    tb = result_basis if result_basis is not None else default_basis(g.result, ring)
    j = induced_matrix(tb, mid)
    return _express_in_sub_exterior(j, y, tb.rank, ring)


def _same_complex(a: Surface, b: Surface) -> bool:
    return a is b or (a.twin == b.twin and a.head == b.head
                      and a.faces == b.faces and a.marks == b.marks)


def push_dividing_set(g: GluedSurfaceData, ds: DividingSet) -> DividingSet:
    """Image of a dividing set under a gluing.

    The curves must meet the glued stretches only in suture vertices
    identified by the gluing; their edges are then interior, survive the
    quotient unchanged, and divide it with the same face signs.
    """
    if not _same_complex(ds.surface, g.gluing.host):
        raise ValidationError("dividing set lives on a different surface")
    k2 = tuple(g.halfedge_map[h] for h in ds.k_halfedges)
    return DividingSet(g.result, k2, dict(ds.face_signs))


def check_respect(g: GluedSurfaceData, ds: DividingSet,
                  eta: GluingOrientationEta | None = None,
                  omega=None, ring: str = RING_F2,
                  host_basis: HomologyBasis | None = None,
                  result_basis: HomologyBasis | None = None) -> bool:
    """Does the gluing morphism send c(K) to c(K_tau)?

    Exact equality mod 2; over the integers equality is only demanded up
    to a global sign.
    """
    x = contact_element(ds, omega=omega, ring=ring, basis=host_basis).value
    lhs = gluing_morphism(g, x, eta=eta, host_basis=host_basis,
                          result_basis=result_basis)
    pushed = push_dividing_set(g, ds)
    rhs = contact_element(pushed, ring=ring, basis=result_basis).value
    if ring == RING_F2:
        return lhs == rhs
    return lhs == rhs or lhs == rhs.scale(-1)


# ---------------------------------------------------------------------------
# cutting


def _fan_groups(s: Surface, v: int, cut_edges: set[int]) -> tuple[dict[int, int], int]:
    """Group the outgoing halfedges at v by the corners left connected once
    the cut edges are severed; group 0 keeps the old vertex id."""
    fan = s.outgoing_fan(v)
    n = len(fan)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # Crossing the ray of fan[i] moves between the corners at positions
    # i-1 and i, so an uncut ray merges them.
    for i in range(1, n):
        if s.canonical(fan[i]) not in cut_edges:
            parent[find(i)] = find(i - 1)
    if v not in s.boundary_vertices() and s.canonical(fan[0]) not in cut_edges:
        parent[find(0)] = find(n - 1)
    order: list[int] = []
    for i in range(n):
        r = find(i)
        if r not in order:
            order.append(r)
    ordinal = {r: k for k, r in enumerate(order)}
    return {fan[i]: ordinal[find(i)] for i in range(n)}, len(order)


def _seam_suture_kind(s: Surface, v: int) -> str:
    """Mark for a fresh seam vertex, read off its boundary neighbours: the
    stretch from a negative to a positive suture end is positive."""
    for circle in s.boundary_circles():
        tails = [s.tail(h) for h in circle]
        if v not in tails:
            continue
        i = tails.index(v)
        n = len(tails)
        prev = nxt = None
        for d in range(1, n):
            prev = prev or s.mark_of(tails[(i - d) % n])
            nxt = nxt or s.mark_of(tails[(i + d) % n])
        if prev == "alpha_minus" and nxt == "alpha_plus":
            return "F_plus"
        if prev == "alpha_plus" and nxt == "alpha_minus":
            return "F_minus"
        raise InternalConsistencyError(
            f"seam vertex {v} sits between {prev} and {nxt}")
    raise InternalConsistencyError(f"seam vertex {v} is not on the boundary")


def cut_open(s: Surface, arcs) -> tuple[Surface, Gluing]:
    """Slice the surface along interior halfedge paths.

    Each arc runs from a positive to a negative suture vertex through
    interior vertices and needs at least two edges (subdivide first if
    necessary); arcs share no edges and meet only at endpoints.  Returns
    the cut surface and the gluing that re-welds it; `glue` of that
    gluing reproduces `s` exactly.
    """
    arcs = [tuple(a) for a in arcs]
    if not arcs:
        out = s.copy()
        return out, Gluing(out, (), ())

    boundary = s.boundary_vertices()
    cut_edges: set[int] = set()
    arc_vertices: list[list[int]] = []
    for path in arcs:
        if len(path) < 2:
            raise InvalidGluingError(
                "cut arc needs an interior vertex; subdivide its edge first")
        for h in path:
            if h not in s.twin:
                raise InvalidGluingError(f"unknown halfedge {h}")
            if not s.is_interior_edge(h):
                raise InvalidGluingError(f"cut halfedge {h} is not interior")
            c = s.canonical(h)
            if c in cut_edges:
                raise InvalidGluingError(f"cut arcs reuse edge {c}")
            cut_edges.add(c)
        verts = [s.tail(path[0])] + [s.head[h] for h in path]
        for a, b in zip(path, path[1:]):
            if s.head[a] != s.tail(b):
                raise InvalidGluingError("cut arc is not a connected path")
        if len(set(verts)) != len(verts):
            raise InvalidGluingError("cut arc revisits a vertex")
        marks = {s.mark_of(verts[0]), s.mark_of(verts[-1])}
        if marks != {"alpha_plus", "alpha_minus"}:
            raise InvalidGluingError(
                "cut arc must join a positive and a negative suture vertex")
        for v in verts[1:-1]:
            if v in boundary:
                raise InvalidGluingError(f"cut arc crosses boundary vertex {v}")
        arc_vertices.append(verts)
    for i, va in enumerate(arc_vertices):
        for vb in arc_vertices[i + 1:]:
            shared = set(va) & set(vb)
            ends = {va[0], va[-1], vb[0], vb[-1]}
            if shared - ends:
                raise InvalidGluingError(
                    f"cut arcs cross at interior vertices {sorted(shared - ends)}")

    s2 = s.copy()
    partner: dict[int, int] = {}
    nxt_h = s2.fresh_halfedge()
    for c in sorted(cut_edges):
        t = s.twin[c]
        partner[c], partner[t] = nxt_h, nxt_h + 1
        nxt_h += 2
    for h, p in partner.items():
        s2.twin[h] = p
        s2.twin[p] = h
        s2.head[p] = s.tail(h)

    affected = sorted({v for verts in arc_vertices for v in verts})
    copies: dict[int, list[int]] = {}
    fresh_v = s2.fresh_vertex()
    head_fix: dict[int, int] = {}
    for v in affected:
        assign, ngroups = _fan_groups(s, v, cut_edges)
        ids = [v]
        for _ in range(ngroups - 1):
            ids.append(fresh_v)
            fresh_v += 1
        copies[v] = ids
        for x, hv in s2.head.items():
            if hv != v:
                continue
            node = s2.walk_next(x) if s2.in_face(x) else s2.twin[x]
            head_fix[x] = ids[assign[node]]
    s2.head.update(head_fix)

    for verts in arc_vertices:
        for v in (verts[0], verts[-1]):
            kind = s.mark_of(v)
            for u in copies[v]:
                s2.marks[kind].add(u)
    for verts in arc_vertices:
        sides = copies[verts[1]]
        if len(sides) != 2:
            raise InternalConsistencyError(
                f"cut vertex {verts[1]} split into {len(sides)} copies")
        kinds = {u: _seam_suture_kind(s2, u) for u in sides}
        if set(kinds.values()) != {"F_plus", "F_minus"}:
            raise InternalConsistencyError(
                f"seam sutures at {sides} came out {kinds}")
        for u, kind in kinds.items():
            s2.marks[kind].add(u)

    validate_surface(s2)
    gamma = tuple(h for path in arcs for h in path)
    gamma_prime = tuple(s.twin[h] for path in arcs for h in path)
    return s2, Gluing(s2, gamma, gamma_prime)


# ---------------------------------------------------------------------------
# realizing arcs as edge paths


def _corner_positions(s: Surface, fi: int, v: int) -> list[int]:
    return [p for p, h in enumerate(s.faces[fi]) if s.tail(h) == v]


def _chord_candidates(s: Surface, u: int, w: int) -> list[tuple[int, int, int]]:
    """Every (face, corner, corner) at which a split joins u to w."""
    out = []
    for fi in range(len(s.faces)):
        for i in _corner_positions(s, fi, u):
            for j in _corner_positions(s, fi, w):
                out.append((fi, i, j))
    return out


def _apply_chord(s: Surface, fi: int, i: int, j: int, u: int,
                 w: int) -> tuple[Refinement, Surface, int]:
    ref, a, _side, _comp = split_face(s, fi, i, j)
    s2 = ref.surface
    h = a if s2.head[a] == w else s2.twin[a]
    assert s2.tail(h) == u and s2.head[h] == w
    return ref, s2, h


def _cofacial_neighbors(s: Surface, u: int) -> list[int]:
    nbrs: set[int] = set()
    for walk in s.faces:
        tails = {s.tail(h) for h in walk}
        if u in tails:
            nbrs |= tails
    nbrs.discard(u)
    return sorted(nbrs)


def _corridor(s: Surface, va: int, vb: int, avoid) -> list[int] | None:
    """Shortest chain of co-facial vertices from va to vb whose interior
    stops are interior vertices, or None."""
    boundary = s.boundary_vertices()
    prev: dict[int, int | None] = {va: None}
    frontier = [va]
    while frontier and vb not in prev:
        nxt = []
        for u in frontier:
            for w in _cofacial_neighbors(s, u):
                if w in prev or w in avoid or (w != vb and w in boundary):
                    continue
                prev[w] = u
                nxt.append(w)
        frontier = nxt
    if vb not in prev:
        return None
    out = [vb]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    out.reverse()
    return out


def _halve_single_edge(ref: Refinement, cur: Surface, hs: list[int],
                       w: int) -> tuple[Refinement, Surface, list[int]]:
    """Cut arcs need an interior vertex, so split a one-edge path in two."""
    r2, mid = subdivide_edge(cur, hs[0])
    s3 = r2.surface
    second = [x for x in s3.twin if s3.tail(x) == mid and s3.head[x] == w]
    assert len(second) == 1
    return ref.then(r2), s3, [hs[0], second[0]]


def _realize_arc(s: Surface, va: int, vb: int, avoid=frozenset(),
                 protect=frozenset()) -> tuple[Refinement, Surface, list[int]]:
    """Split faces along a co-facial corridor from va to vb and return the
    resulting interior edge path.

    If no corridor exists (too few interior vertices), every unprotected
    interior edge is subdivided once to create waypoints and the search
    runs again.  The returned path consists of freshly created halfedges
    only, so previously realized paths survive untouched as long as their
    edges are protected.
    """
    ref = Refinement(s)
    cur = s
    path_vertices = _corridor(cur, va, vb, avoid)
    if path_vertices is None:
        for e in sorted(cur.edges()):
            if not cur.is_interior_edge(e) or e in protect:
                continue
            r1, _mid = subdivide_edge(ref.surface, e)
            ref = ref.then(r1)
        cur = ref.surface
        path_vertices = _corridor(cur, va, vb, avoid)
        if path_vertices is None:
            raise UnsupportedSurfaceError(f"no interior corridor joins {va} to {vb}")

    hs: list[int] = []
    for u, w in zip(path_vertices, path_vertices[1:]):
        cands = _chord_candidates(cur, u, w)
        if not cands:
            raise InternalConsistencyError(f"lost co-faciality of {u} and {w}")
        fi, i, j = cands[0]
        r1, cur, h = _apply_chord(cur, fi, i, j, u, w)
        ref = ref.then(r1)
        hs.append(h)
    if len(hs) == 1:
        ref, cur, hs = _halve_single_edge(ref, cur, hs, vb)
    return ref, cur, hs


# ---------------------------------------------------------------------------
# quadrangulation


def _find_genus_cut(s: Surface) -> tuple[Refinement, Surface, tuple[int, ...],
                                         tuple[int, ...]]:
    """Find an arc whose cut lowers the total genus.

    Tries direct chords between opposite suture vertices over every corner
    occurrence, then retries through the midpoint of each interior edge in
    turn.  The first success in this fixed order wins, which keeps the
    outcome deterministic.
    """
    base = s.genus()
    aps = sorted(s.marks["alpha_plus"])
    ams = sorted(s.marks["alpha_minus"])

    def trial(ref: Refinement, cur: Surface, hs: list[int], vb: int):
        if len(hs) == 1:
            ref, cur, hs = _halve_single_edge(ref, cur, hs, vb)
        twins = tuple(cur.twin[h] for h in hs)
        try:
            cut_s, _rev = cut_open(cur, [hs])
        except InvalidGluingError:
            return None
        if cut_s.genus() >= base:
            return None
        return ref, cut_s, tuple(hs), twins

    for va in aps:
        for vb in ams:
            for fi, i, j in _chord_candidates(s, va, vb):
                r1, s1, h = _apply_chord(s, fi, i, j, va, vb)
                got = trial(Refinement(s).then(r1), s1, [h], vb)
                if got:
                    return got
    for e in sorted(e for e in s.edges() if s.is_interior_edge(e)):
        r0, mid = subdivide_edge(s, e)
        s1 = r0.surface
        for va in aps:
            for vb in ams:
                for c1 in _chord_candidates(s1, va, mid):
                    r1, s2, h1 = _apply_chord(s1, *c1, va, mid)
                    for c2 in _chord_candidates(s2, mid, vb):
                        r2, s3, h2 = _apply_chord(s2, *c2, mid, vb)
                        got = trial(Refinement(s).then(r0).then(r1).then(r2),
                                    s3, [h1, h2], vb)
                        if got:
                            return got
    raise UnsupportedSurfaceError(
        "no genus-reducing cut found by the bounded arc search")


def _circle_merge_target(s: Surface) -> tuple[int, int] | None:
    """A pair of opposite suture vertices on different boundary circles of
    one component, or None once every component has a single circle."""
    circles = s.boundary_circles()
    for comp in s.components():
        mine = [c for c in circles if s.tail(c[0]) in comp]
        if len(mine) < 2:
            continue
        va = min(v for v in s.marks["alpha_plus"] if v in comp)
        home = next(c for c in mine if va in [s.tail(h) for h in c])
        for c in mine:
            if c is home:
                continue
            ams = sorted(v for v in (s.tail(h) for h in c)
                         if v in s.marks["alpha_minus"])
            if ams:
                return va, ams[0]
        raise InternalConsistencyError("boundary circle with no negative suture")
    return None


def _fan_target(s: Surface) -> tuple[int, int] | None:
    """On a disk piece with three or more positive sutures, the first
    positive suture vertex and the opposite one three steps along."""
    for circle in s.boundary_circles():
        tails = [s.tail(h) for h in circle]
        alphas = [v for v in tails
                  if s.mark_of(v) in ("alpha_plus", "alpha_minus")]
        if len(alphas) < 6:
            continue
        start = next(i for i, v in enumerate(alphas)
                     if s.mark_of(v) == "alpha_plus")
        va = alphas[start]
        vb = alphas[(start + 3) % len(alphas)]
        assert s.mark_of(vb) == "alpha_minus"
        return va, vb
    return None


@dataclass(frozen=True)
class DecompositionResult:
    """A surface refined and sliced into square pieces.

    refined    -- the input complex with all the extra chords added
    refinement -- transports chains of the input onto `refined`
    pieces     -- the disjoint squares, plus any atomic one-suture disks
    cuts       -- the halfedge path of each cut, as halfedges of `pieces`
    reverse    -- single gluing on `pieces` whose quotient is `refined`
    """

    refined: Surface
    refinement: Refinement
    pieces: Surface
    cuts: tuple[tuple[int, ...], ...]
    reverse: Gluing


def quadrangulate(s: Surface) -> DecompositionResult:
    """Cut a sutured surface into squares: two positive sutures per piece.

    Cuts remove genus first, then merge multiple boundary circles, then
    fan larger disk pieces down; one-suture disk components are left
    untouched since they admit no cut at all.  The reverse gluing re-welds
    every cut at once, swallows nothing, and its induced morphism is an
    invertible change of basis.
    """
    validate_surface(s)
    ref = Refinement(s.copy())
    cur = ref.surface
    cuts: list[tuple[int, ...]] = []
    gam: list[int] = []
    gamp: list[int] = []

    def commit(path: tuple[int, ...], twins: tuple[int, ...], cut_s: Surface):
        nonlocal cur
        cur = cut_s
        cuts.append(path)
        gam.extend(path)
        gamp.extend(twins)

    while cur.genus() > 0:
        r, cut_s, path, twins = _find_genus_cut(cur)
        ref = ref.then(r)
        commit(path, twins, cut_s)
    while True:
        target = _circle_merge_target(cur)
        if target is None:
            break
        r, mid_s, hs = _realize_arc(cur, *target)
        twins = tuple(mid_s.twin[h] for h in hs)
        cut_s, _rev = cut_open(mid_s, [hs])
        ref = ref.then(r)
        commit(tuple(hs), twins, cut_s)
    while True:
        target = _fan_target(cur)
        if target is None:
            break
        r, mid_s, hs = _realize_arc(cur, *target)
        twins = tuple(mid_s.twin[h] for h in hs)
        cut_s, _rev = cut_open(mid_s, [hs])
        ref = ref.then(r)
        commit(tuple(hs), twins, cut_s)

    if cur.genus() != 0:
        raise InternalConsistencyError("pieces have leftover genus")
    circles = cur.boundary_circles()
    for comp in cur.components():
        mine = [c for c in circles if cur.tail(c[0]) in comp]
        if len(mine) != 1:
            raise InternalConsistencyError("piece with several boundary circles")
        npos = sum(1 for v in comp if v in cur.marks["F_plus"])
        if npos not in (1, 2):
            raise InternalConsistencyError(f"piece with {npos} positive sutures")

    reverse = Gluing(cur, tuple(gam), tuple(gamp))
    glued = glue(reverse)
    if glued.swallowed:
        raise InternalConsistencyError("re-welding swallowed a suture")
    refined = glued.result
    zb_pieces = default_basis(cur, RING_Z)
    zb_whole = default_basis(refined, RING_Z)
    mat = induced_matrix(zb_pieces, zb_whole,
                         push=lambda c: pushforward_class(glued, c))
    if zb_pieces.rank != zb_whole.rank or invert_unimodular(mat) is None:
        raise InternalConsistencyError("re-welding morphism is not invertible")
    return DecompositionResult(
        refined=refined,
        refinement=Refinement(refined, ref.edge_map, ref.vertex_map),
        pieces=cur,
        cuts=tuple(cuts),
        reverse=reverse,
    )


def square_chord_family(dec: DecompositionResult):
    """Dividing-set chords on the square pieces, all realized at once.

    Returns (pieces, reverse, options): `options[i]` lists, for piece i in
    component order, the alternative chord systems (each a tuple of edge
    paths) — two ways to join neighbouring sutures on a square, one on a
    one-suture disk.  Choosing an option per piece yields a dividing set
    on `pieces`, and `reverse` re-welds the pieces on the shared
    refinement.  All paths are realized on one surface so the resulting
    contact elements are comparable.
    """
    cur = dec.pieces
    plans: list[list[list[tuple[int, int]]]] = []
    for comp in cur.components():
        circle = next(c for c in cur.boundary_circles() if cur.tail(c[0]) in comp)
        tails = [cur.tail(h) for h in circle]
        fs = [v for v in tails if cur.mark_of(v) in ("F_plus", "F_minus")]
        if len(fs) == 2:
            plans.append([[(fs[0], fs[1])]])
        else:
            assert len(fs) == 4
            plans.append([[(fs[0], fs[1]), (fs[2], fs[3])],
                         [(fs[1], fs[2]), (fs[3], fs[0])]])
    protect: set[int] = set()
    options: list[list[tuple[tuple[int, ...], ...]]] = []
    for alts in plans:
        piece_opts: list[tuple[tuple[int, ...], ...]] = []
        for chords in alts:
            paths: list[tuple[int, ...]] = []
            used: set[int] = set()
            for fa, fb in chords:
                # chord edges are fresh, so earlier paths survive as-is
                _, cur, hs = _realize_arc(cur, fa, fb, avoid=frozenset(used),
                                          protect=frozenset(protect))
                protect.update(cur.canonical(h) for h in hs)
                used.update(cur.head[h] for h in hs[:-1])
                paths.append(tuple(hs))
            piece_opts.append(tuple(paths))
        options.append(piece_opts)
    reverse = Gluing(cur, dec.reverse.gamma, dec.reverse.gamma_prime)
    return cur, reverse, options
