"""Halfedge complex structure, validation, refinement, and JSON."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sutured_tqft.errors import InvalidSurfaceError
from sutured_tqft.surface import (Refinement, Surface, add_detached_circle,
                                  chain_add, chain_boundary, chain_from_path,
                                  disjoint_union, disk_position, split_face,
                                  standard_disk, subdivide_edge, subsurface,
                                  transport_chain, validate_complex,
                                  validate_marking, validate_surface)


def one_vertex_torus():
    """Closed genus-1 complex: one vertex, two loops, one square face."""
    return Surface({0: 1, 1: 0, 2: 3, 3: 2},
                   {0: 0, 1: 0, 2: 0, 3: 0},
                   [[0, 2, 1, 3]])


def test_standard_disk_valid():
    for n in range(1, 5):
        s = standard_disk(n)
        validate_surface(s)
        assert s.euler_characteristic() == 1
        assert s.genus() == 0
        assert s.n_of_f() == n
        circles = s.boundary_circles()
        assert len(circles) == 1
        assert len(circles[0]) == 4 * n


def test_disk_boundary_orientation_is_walk_order():
    s = standard_disk(2)
    circle = s.boundary_circles()[0]
    # induced orientation: tails visit 0, 1, 2, ... counterclockwise
    tails = [s.tail(h) for h in circle]
    start = tails.index(0)
    assert tails[start:] + tails[:start] == list(range(8))


def test_disk_positions():
    s = standard_disk(3)
    assert disk_position("F", 1) == 0
    assert disk_position("a", 1) == 1
    assert disk_position("F", 4) == 6
    for k in (1, 3, 5):
        assert disk_position("a", k) in s.marks["alpha_plus"]
    for k in (2, 4, 6):
        assert disk_position("a", k) in s.marks["alpha_minus"]


def test_json_roundtrip():
    s = standard_disk(2)
    data = s.to_json_dict()
    s2 = Surface.from_json_dict(data)
    assert s2.twin == s.twin
    assert s2.head == s.head
    assert s2.faces == s.faces
    assert s2.marks == s.marks


def test_json_malformed():
    with pytest.raises(InvalidSurfaceError):
        Surface.from_json_dict({"halfedges": [{"id": 0}], "faces": []})
    good = standard_disk(1).to_json_dict()
    bad = dict(good)
    bad["vertices"] = [99]
    with pytest.raises(InvalidSurfaceError):
        Surface.from_json_dict(bad)


def test_validate_rejects_broken_twin():
    s = standard_disk(1)
    s.twin[0] = 0
    with pytest.raises(InvalidSurfaceError):
        validate_complex(s)


def test_validate_rejects_repeated_halfedge():
    s = standard_disk(1)
    s.faces.append([s.faces[0][0]])
    s._face_of = None
    with pytest.raises(InvalidSurfaceError):
        validate_complex(s)


def test_validate_rejects_pinched_boundary():
    # two squares sharing a single vertex
    a = standard_disk(1)
    b = standard_disk(1)
    u, vmap, _ = disjoint_union(a, b)
    u = u.relabel(vmap={vmap[0]: 0})
    with pytest.raises(InvalidSurfaceError):
        validate_complex(u)


def test_validate_closed_component():
    t = one_vertex_torus()
    validate_complex(t, allow_closed=True)
    with pytest.raises(InvalidSurfaceError):
        validate_complex(t, allow_closed=False)
    assert t.euler_characteristic() == 0
    assert t.genus() == 1


def test_validate_marking_pattern():
    s = standard_disk(1)
    validate_marking(s)
    s.marks["F_plus"], s.marks["F_minus"] = s.marks["F_minus"], s.marks["F_plus"]
    # pattern becomes F- a+ F+ a- which is not a rotation of F+ a+ F- a-
    with pytest.raises(InvalidSurfaceError):
        validate_marking(s)


def test_validate_marking_off_boundary():
    ref, _, _, _ = split_face(standard_disk(1), 0, 1, 3)
    ref2, m = subdivide_edge(ref.surface, ref.surface.faces[-1][-1])
    s = ref2.surface
    s.marks["F_plus"].add(m)
    with pytest.raises(InvalidSurfaceError):
        validate_marking(s)


def test_split_face_topology():
    s = standard_disk(1)
    ref, a, side, comp = split_face(s, 0, 1, 3)
    s2 = ref.surface
    validate_surface(s2)
    assert s2.euler_characteristic() == 1
    assert len(s2.faces) == 2
    assert s2.is_interior_edge(a)
    assert s2.face_of(a) == comp
    assert s2.face_of(s2.twin[a]) == side
    assert s2.tail(a) == 1 and s2.head[a] == 3
    # the side face keeps old walk positions 1..2
    assert [s2.tail(h) for h in s2.faces[side]] == [1, 2, 3]


def test_split_face_rejects_loop():
    s = standard_disk(1)
    ref, _, _ = add_detached_circle(s, 0, 2)
    # the ambient walk visits the circle attachment vertex twice
    with pytest.raises(InvalidSurfaceError):
        split_face(ref.surface, 0, 3, 5)
    with pytest.raises(InvalidSurfaceError):
        split_face(s, 0, 2, 2)


def test_subdivide_boundary_edge():
    s = standard_disk(1)
    ref, m = subdivide_edge(s, 0)
    s2 = ref.surface
    validate_surface(s2)
    assert s2.euler_characteristic() == 1
    assert m in s2.boundary_vertices()
    old = chain_from_path(s, [0])
    new = transport_chain(ref, old)
    assert chain_boundary(s2, new) == {1: 1, 0: -1}


def test_subdivide_interior_edge_and_transport_sign():
    s = standard_disk(1)
    ref1, a, _, _ = split_face(s, 0, 1, 3)
    s1 = ref1.surface
    c = s1.canonical(a)
    ref2, m = subdivide_edge(s1, s1.twin[c])
    s2 = ref2.surface
    validate_surface(s2)
    assert m not in s2.boundary_vertices()
    chain = {c: 1}
    moved = transport_chain(ref2, chain)
    assert chain_boundary(s2, moved) == chain_boundary(s1, chain)
    back = transport_chain(ref2, {c: -1})
    assert back == {e: -v for e, v in moved.items()}


def test_refinement_composition():
    s = standard_disk(2)
    ref1, m1 = subdivide_edge(s, 0)
    ref2, m2 = subdivide_edge(ref1.surface, 0)
    total = ref1.then(ref2)
    assert total.surface is ref2.surface
    chain = chain_from_path(s, [0, 2])
    a = transport_chain(total, chain)
    b = transport_chain(ref2, transport_chain(ref1, chain))
    assert a == b
    assert chain_boundary(total.surface, a) == {2: 1, 0: -1}


def test_add_detached_circle():
    s = standard_disk(1)
    ref, (a, b), inner = add_detached_circle(s, 0, 2)
    s2 = ref.surface
    validate_complex(s2)
    validate_marking(s2)
    assert s2.euler_characteristic() == 1
    assert s2.face_of(a) == inner
    assert s2.face_of(s2.twin[a]) == 0
    assert s2.is_interior_edge(a) and s2.is_interior_edge(b)
    circle = chain_from_path(s2, [a, b])
    assert chain_boundary(s2, circle) == {}


def test_outgoing_fan_at_chord_endpoint():
    s = standard_disk(1)
    ref, a, _, _ = split_face(s, 0, 1, 3)
    s2 = ref.surface
    fan = s2.outgoing_fan(1)
    assert len(fan) == 3
    assert s2.is_boundary_halfedge(fan[0])
    assert not s2.in_face(fan[-1])
    assert fan[1] == a


def test_disjoint_union_counts():
    a = standard_disk(1)
    b = standard_disk(2)
    u, vmap, hmap = disjoint_union(a, b)
    validate_surface(u)
    assert u.euler_characteristic() == 2
    assert len(u.boundary_circles()) == 2
    assert u.n_of_f() == 3
    assert vmap[0] != 0 and hmap[0] != 0


def test_relabel_roundtrip():
    s = standard_disk(1)
    vmap = {v: v + 100 for v in s.vertices}
    hmap = {h: h + 100 for h in s.twin}
    s2 = s.relabel(vmap, hmap)
    validate_surface(s2)
    back = s2.relabel({v: k for k, v in vmap.items()},
                      {h: k for k, h in hmap.items()})
    assert back.to_json_dict() == s.to_json_dict()


def test_subsurface_of_split_disk():
    s = standard_disk(2)
    ref, a, side, comp = split_face(s, 0, 1, 5)
    s2 = ref.surface
    sub = subsurface(s2, [side])
    validate_complex(sub)
    assert len(sub.faces) == 1
    assert sub.euler_characteristic() == 1
    assert set(sub.marks["alpha_plus"]) <= s.marks["alpha_plus"]
    circle = sub.boundary_circles()[0]
    assert len(circle) == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.lists(st.integers(0, 10 ** 6), max_size=6))
def test_random_refinements_preserve_validity(n, seeds):
    s = standard_disk(n)
    ref = Refinement(s)
    base_chain = chain_from_path(s, [0, 2, 4])
    for seed in seeds:
        cur = ref.surface
        kind = seed % 3
        if kind == 0:
            edges = cur.edges()
            step, _ = subdivide_edge(cur, edges[seed // 3 % len(edges)])
        elif kind == 1:
            fid = seed // 3 % len(cur.faces)
            walk = cur.faces[fid]
            if len(walk) < 4:
                continue
            i = seed // 7 % len(walk)
            j = (i + 2 + seed // 11 % (len(walk) - 3)) % len(walk)
            i, j = min(i, j), max(i, j)
            if j - i < 1 or cur.tail(walk[i]) == cur.tail(walk[j]):
                continue
            step, _, _, _ = split_face(cur, fid, i, j)
        else:
            fid = seed // 3 % len(cur.faces)
            step, _, _ = add_detached_circle(cur, fid, seed // 5 % len(cur.faces[fid]))
        ref = ref.then(step)
    s2 = ref.surface
    validate_complex(s2)
    validate_marking(s2)
    assert s2.euler_characteristic() == 1
    # original vertices keep their ids, so the boundary 0-chain is unchanged
    moved = transport_chain(ref, base_chain)
    assert chain_boundary(s2, moved) == chain_boundary(s, base_chain)
