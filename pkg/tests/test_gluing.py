"""Welding boundary collections, cutting along arcs, and the induced maps."""

import itertools
import json
import random

import pytest

from sutured_tqft.contact import contact_element, default_basis
from sutured_tqft.dividing import (
    ChordDiagram,
    DividingSet,
    chord_to_dividing_set,
    enumerate_chord_diagrams,
    infer_face_signs,
    orient_by_signs,
)
from sutured_tqft.errors import InvalidGluingError
from sutured_tqft.exterior import Multivector, RING_F2, RING_Z, interior
from sutured_tqft.gluing import (
    Gluing,
    GluingOrientationEta,
    check_respect,
    cut_open,
    glue,
    glued_relative_basis,
    gluing_morphism,
    gluing_violations,
    push_dividing_set,
    pushforward_class,
    quadrangulate,
    square_chord_family,
    _realize_arc,
)
from sutured_tqft.homology import HomologyBasis, RelativeH1, induced_matrix
from sutured_tqft.linalg import f2_rank, f2_row_space, invert_unimodular
from sutured_tqft.models import annulus_model, annulus_surface, disk_model, one_holed_torus
from sutured_tqft.surface import (
    chain_add,
    chain_boundary,
    chain_scale,
    disjoint_union,
    standard_disk,
    subdivide_edge,
    transport_chain,
)

MARKS = ("F_plus", "alpha_plus", "F_minus", "alpha_minus")


def _same_surface(a, b):
    return (a.twin == b.twin and a.head == b.head
            and a.faces == b.faces and a.marks == b.marks)


# The running example: the disk with dividing set 1-8,2-3,4-5,6-7 welded to
# itself along a five-vertex stretch, leaving an annulus and swallowing one
# positive suture.
def _welding_fixture():
    ds = chord_to_dividing_set(ChordDiagram.parse("1-8,2-3,4-5,6-7"))
    tau = Gluing(ds.surface, (30, 0, 2, 4), (20, 18, 16, 14))
    return ds, ds.surface, tau


# -- validation -----------------------------------------------------------

def test_gluing_validation_rejects_bad_data():
    s = standard_disk(3)
    # folding an arc onto its own neighbour pins vertex 3 to itself
    assert any("glued to itself" in v for v in gluing_violations(s, (2, 4), (8, 6)))
    with pytest.raises(InvalidGluingError):
        Gluing(s, (2, 4), (8, 6))
    with pytest.raises(InvalidGluingError):
        Gluing(s, (2, 4), (16,))
    # faceless halfedge
    with pytest.raises(InvalidGluingError):
        Gluing(s, (3,), (17,))
    # suture glued to a suture of the same sign
    assert any("clash" in v for v in gluing_violations(s, (0,), (14,)))
    # a stretch may not end in the middle of a marked-point pair
    assert any("non-suture" in v for v in gluing_violations(s, (2,), (16,)))


def test_gluing_that_closes_a_sphere_is_rejected():
    s, _, hmap = disjoint_union(standard_disk(1), standard_disk(1))
    gamma = (0, 2, 4, 6)
    gamma_prime = (hmap[2], hmap[0], hmap[6], hmap[4])
    assert "close" in " ".join(gluing_violations(s, gamma, gamma_prime))
    with pytest.raises(InvalidGluingError):
        Gluing(s, gamma, gamma_prime)


def test_gluing_json_round_trip():
    s = standard_disk(3)
    tau = Gluing(s, (2, 4), (16, 14))
    blob = json.dumps(tau.to_json_dict())
    tau2 = Gluing.from_json_dict(s, json.loads(blob))
    assert tau2.gamma == tau.gamma and tau2.gamma_prime == tau.gamma_prime
    bad = tau.to_json_dict()
    bad["vertex_map"]["1"] = 5
    with pytest.raises(InvalidGluingError):
        Gluing.from_json_dict(s, bad)


# -- quotient structure ---------------------------------------------------

def test_welding_quotient_structure():
    _, host, tau = _welding_fixture()
    g = glue(tau)
    res = g.result
    # five seam identifications, one interior positive suture
    assert g.swallowed == (1,)
    assert res.euler_characteristic() == 0
    assert res.genus() == 0
    assert len(res.boundary_circles()) == 2
    assert res.marks["F_plus"] == {4, 12}
    assert res.marks["alpha_plus"] == {5, 13}
    assert res.marks["F_minus"] == {6, 14}
    assert res.marks["alpha_minus"] == {3, 11}
    # quotient vertex classes collapse to the smaller id
    for a, b in ((0, 10), (1, 9), (2, 8), (3, 7), (11, 15)):
        assert g.vertex_map[b] == a and g.vertex_map[a] == a
    assert glued_relative_basis(g, RING_Z).rank == 3


def test_empty_gluing_is_identity():
    s = annulus_surface()
    cut_s, rev = cut_open(s, [])
    assert rev.gamma == ()
    assert _same_surface(cut_s, s)
    g = glue(rev)
    assert _same_surface(g.result, s)
    assert g.swallowed == ()
    x = Multivector(2, {0b01: 1, 0b11: -2}, RING_Z)
    assert gluing_morphism(g, x) == x


def test_pushforward_fixes_chains_away_from_the_seam():
    ds, host, tau = _welding_fixture()
    g = glue(tau)
    chord = {host.canonical(ds.k_halfedges[0]): 1}
    assert pushforward_class(g, chord) == chord


# -- the swallowing morphism ----------------------------------------------

def test_swallowing_morphism_matches_hand_computation():
    ds, host, tau = _welding_fixture()
    g = glue(tau)
    m = disk_model(4).rebind(host)
    b1, b3, b5 = m.beta_plus
    # the three dividing curves in terms of the disk basis
    g1 = chain_scale(chain_add(b3, b5), -1)
    g2 = dict(b3)
    g3 = chain_scale(b1, -1)
    hb = HomologyBasis(RelativeH1(host, host.marks["alpha_plus"]), RING_Z,
                       cycles=[g1, g2, g3])

    def push(c):
        return pushforward_class(g, c)

    rel_mid = sorted({g.vertex_map[v] for v in host.marks["alpha_plus"]})
    assert rel_mid == [1, 5, 13]
    h1_mid = RelativeH1(g.result, rel_mid)
    # boundary-evaluation of the swallowed vertex, on either pushed basis
    mid_beta = HomologyBasis(h1_mid, RING_Z, cycles=[push(b1), push(b3), push(b5)])
    assert mid_beta.vertex_functional(1) == [-1, 1, -1]
    mid_gamma = HomologyBasis(h1_mid, RING_Z, cycles=[push(g1), push(g2), push(g3)])
    assert mid_gamma.vertex_functional(1) == [0, 1, 1]

    closed = chain_add(g2, g3, -1)  # b1 + b3: the re-welded boundary circle
    rb = HomologyBasis(RelativeH1(g.result, sorted(g.result.marks["alpha_plus"])),
                       RING_Z, cycles=[push(g1), push(closed)])
    got = gluing_morphism(g, Multivector.top(3, RING_Z),
                          host_basis=hb, result_basis=rb)
    assert got == Multivector.top(2, RING_Z)


def test_respect_on_the_swallowing_example():
    ds, _, tau = _welding_fixture()
    g = glue(tau)
    assert check_respect(g, ds, ring=RING_F2)
    assert check_respect(g, ds, ring=RING_Z)


def test_interior_image_spans_the_sub_algebra():
    # rank comparison: iota_eta over a basis of the big algebra against the
    # wedges of the sub-basis of classes with boundary in the new sutures
    _, _, tau = _welding_fixture()
    g = glue(tau)
    mid = glued_relative_basis(g, RING_F2)
    eta_mv = GluingOrientationEta.default(g).functional(mid)
    a_rows = []
    for mask in range(1 << mid.rank):
        y = interior(eta_mv, Multivector(mid.rank, {mask: 1}, RING_F2))
        a_rows.append(sum((c & 1) << t for t, c in y.terms.items()))
    tb = default_basis(g.result, RING_F2)
    j = induced_matrix(tb, mid)
    cols = [Multivector.vector(mid.rank, [j[i][k] for i in range(mid.rank)], RING_F2)
            for k in range(tb.rank)]
    b_rows = []
    for mask in range(1 << tb.rank):
        acc = Multivector.unit(mid.rank, RING_F2)
        for idx in range(tb.rank):
            if mask >> idx & 1:
                acc = acc.wedge(cols[idx])
        b_rows.append(sum((c & 1) << t for t, c in acc.terms.items()))
    assert f2_row_space(a_rows) == f2_row_space(b_rows)


def test_simple_gluing_is_invertible():
    # one arc containing a single suture on each side
    s = standard_disk(3)
    g = glue(Gluing(s, (2, 4), (16, 14)))
    assert g.swallowed == ()
    assert g.result.euler_characteristic() == 0
    assert len(g.result.boundary_circles()) == 2

    def push(c):
        return pushforward_class(g, c)

    mat = induced_matrix(default_basis(s, RING_Z), default_basis(g.result, RING_Z),
                         push=push)
    assert invert_unimodular(mat) is not None
    mat2 = induced_matrix(default_basis(s, RING_F2),
                          default_basis(g.result, RING_F2), push=push)
    rows = [sum((mat2[i][j] & 1) << j for j in range(len(mat2[0])))
            for i in range(len(mat2))]
    assert f2_rank(rows) == len(mat2)


def test_disjoint_gluings_commute_up_to_sign():
    s = standard_disk(5)
    site_a = ((2, 4), (16, 14))
    site_b = ((22, 24), (36, 34))
    ga = glue(Gluing(s, *site_a))
    gb_after = glue(Gluing(ga.result, *site_b))
    gb = glue(Gluing(s, *site_b))
    ga_after = glue(Gluing(gb.result, *site_a))
    both = glue(Gluing(s, site_a[0] + site_b[0], site_a[1] + site_b[1]))
    assert _same_surface(gb_after.result, ga_after.result)
    assert _same_surface(both.result, gb_after.result)
    rank = default_basis(s, RING_Z).rank
    seq, direct = [], []
    for i in range(rank):
        x = Multivector.basis_vector(rank, i, RING_Z)
        seq.append(gluing_morphism(gb_after, gluing_morphism(ga, x)))
        direct.append(gluing_morphism(both, x))
    assert (all(y == d for y, d in zip(seq, direct))
            or all(y == d.scale(-1) for y, d in zip(seq, direct)))


def test_respect_on_randomized_disk_self_gluings():
    rng = random.Random(20260823)
    checked = 0
    for n in (3, 4, 5):
        m = 4 * n
        plain = standard_disk(n)
        sites = []
        for p in range(1, m, 2):
            for q in range(1, m, 2):
                gamma = (2 * p, 2 * ((p + 1) % m))
                gamma_prime = (2 * ((q + 1) % m), 2 * q)
                if not gluing_violations(plain, gamma, gamma_prime):
                    sites.append((gamma, gamma_prime))
        diagrams = enumerate_chord_diagrams(n)
        for _ in range(4):
            ds = chord_to_dividing_set(rng.choice(diagrams))
            gamma, gamma_prime = rng.choice(sites)
            g = glue(Gluing(ds.surface, gamma, gamma_prime))
            assert check_respect(g, ds, ring=RING_F2)
            if checked % 3 == 0:
                assert check_respect(g, ds, ring=RING_Z)
            checked += 1
    assert checked == 12


# -- cutting --------------------------------------------------------------

def test_cut_open_round_trips_the_annulus():
    s = annulus_surface()
    _, mid_s, hs = _realize_arc(s, 1, 5)
    cut_s, rev = cut_open(mid_s, [hs])
    # a disk with one extra suture pair on the new seam
    assert cut_s.euler_characteristic() == 1
    assert len(cut_s.boundary_circles()) == 1
    assert cut_s.n_of_f() == 3
    assert cut_s.genus() == 0
    back = glue(rev)
    assert _same_surface(back.result, mid_s)
    assert back.swallowed == ()


def test_cut_open_rejects_bad_arcs():
    s = annulus_surface()
    with pytest.raises(InvalidGluingError, match="subdivide"):
        cut_open(s, [(16,)])
    with pytest.raises(InvalidGluingError, match="not interior"):
        cut_open(s, [(0, 2)])
    ref, q = subdivide_edge(s, 16)
    s3 = ref.surface
    second = [x for x in s3.twin if s3.tail(x) == q and s3.head[x] == 0]
    with pytest.raises(InvalidGluingError, match="suture vertex"):
        cut_open(s3, [(16, second[0])])


# -- quadrangulation ------------------------------------------------------

def test_quadrangulate_square_is_trivial():
    s = standard_disk(2)
    dec = quadrangulate(s)
    assert dec.cuts == ()
    assert dec.reverse.gamma == ()
    assert _same_surface(dec.pieces, s)
    assert _same_surface(dec.refined, s)


def test_quadrangulate_carries_one_suture_disks_atomically():
    s = standard_disk(1)
    dec = quadrangulate(s)
    assert dec.cuts == ()
    assert _same_surface(dec.pieces, s)


def test_quadrangulate_piece_counts():
    for build, expected in ((lambda: standard_disk(3), 2),
                            (lambda: standard_disk(5), 4),
                            (annulus_surface, 2),
                            (one_holed_torus, 2)):
        s = build()
        dec = quadrangulate(s)
        pieces = dec.pieces
        comps = pieces.components()
        assert len(comps) == expected
        assert pieces.genus() == 0
        assert len(pieces.boundary_circles()) == len(comps)
        for comp in comps:
            assert sum(1 for v in comp if v in pieces.marks["F_plus"]) == 2
        # each cut adds one suture and one to chi, so n(F) - chi is preserved
        assert (pieces.n_of_f() - pieces.euler_characteristic()
                == s.n_of_f() - s.euler_characteristic())


def test_quadrangulate_reglue_is_exact():
    for build in (lambda: standard_disk(3), annulus_surface, one_holed_torus):
        s = build()
        dec = quadrangulate(s)
        back = glue(dec.reverse)
        assert _same_surface(back.result, dec.refined)
        assert back.swallowed == ()
        assert dec.refined.marks == s.marks
        assert dec.refinement.surface is dec.refined
        for kind in MARKS:
            for v in s.marks[kind]:
                assert dec.refinement.map_vertex(v) == v


def test_quadrangulate_transports_chains():
    s = annulus_surface()
    m = annulus_model()
    dec = quadrangulate(s)
    for c in m.beta_plus:
        moved = transport_chain(dec.refinement, c)
        assert chain_boundary(dec.refined, moved) == chain_boundary(s, c)


def test_reglued_square_dividing_sets_form_a_contact_basis():
    for build in (annulus_surface, lambda: standard_disk(3)):
        dec = quadrangulate(build())
        pieces, reverse, options = square_chord_family(dec)
        data = glue(reverse)
        rows = []
        for combo in itertools.product(*[range(len(o)) for o in options]):
            k_edges = set()
            for opts, pick in zip(options, combo):
                for path in opts[pick]:
                    k_edges |= {pieces.canonical(h) for h in path}
            signs = infer_face_signs(pieces, k_edges)
            kh = orient_by_signs(pieces, sorted(k_edges), signs)
            ds = DividingSet(pieces, kh, signs)
            pushed = push_dividing_set(data, ds)
            c = contact_element(pushed, ring=RING_F2).value
            rows.append(sum((v & 1) << t for t, v in c.terms.items()))
        assert len(rows) == 1 << default_basis(data.result, RING_F2).rank
        assert f2_rank(rows) == len(rows)
