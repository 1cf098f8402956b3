"""The acceptance gate: ten checks, one summary line each.

Each test carries an ``acceptance`` marker; conftest.py prints a PASS/FAIL
line per check in the terminal summary.  Time budgets are asserted inside
the tests, so a speed regression fails the gate like a wrong value would.
"""

import math
import random
import time

import pytest

from sutured_tqft.axioms import (DEFAULT_SEED, random_glued_dividing_sets,
                                 random_sutured_surface, run_axiom_suite)
from sutured_tqft.contact import (contact_element, default_basis,
                                  duality_check, render_multivector)
from sutured_tqft.disks import (TorusParameters, bypass_triple_at,
                                disk_contact_element, matchable,
                                matchable_via_wedge, rotate_diagram,
                                solid_torus_tight)
from sutured_tqft.dividing import (ChordDiagram, annulus_fixture,
                                   chord_to_dividing_set,
                                   enumerate_chord_diagrams)
from sutured_tqft.errors import InvalidChordDiagramError
from sutured_tqft.exterior import Multivector, RING_F2, RING_Z
from sutured_tqft.gluing import (Gluing, check_respect, glue,
                                 gluing_morphism, pushforward_class)
from sutured_tqft.homology import HomologyBasis, RelativeH1
from sutured_tqft.models import disk_model
from sutured_tqft.surface import chain_add, chain_scale


def _within(t0: float, limit: float) -> None:
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"took {elapsed:.2f}s, budget {limit:.0f}s"


def _catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@pytest.mark.acceptance(label="01 worked-example fidelity")
def test_01_worked_example_fidelity():
    t0 = time.perf_counter()

    # six-chord disk: c = b3^b5^(b7 + b9) in the odd-label basis
    cd = ChordDiagram.parse("1-2,3-12,4-5,6-7,8-11,9-10")
    labels = disk_model(6).labels_plus
    assert render_multivector(disk_contact_element(cd, RING_F2).value,
                              labels) == "b3^b5^b7 + b3^b5^b9"
    want_z = Multivector(5, {0b01110: 1, 0b10110: 1}, RING_Z)
    z = disk_contact_element(cd, RING_Z).value
    assert z in (want_z, want_z.scale(-1))

    # the annulus table, exact mod 2 and up to sign over the integers
    table = {"K+": Multivector.unit(2, RING_Z),
             "K-": Multivector(2, {0b11: 1}, RING_Z),
             "K0": Multivector.basis_vector(2, 1, RING_Z),
             "K1": Multivector.basis_vector(2, 1, RING_Z),
             "L0": Multivector.basis_vector(2, 0, RING_Z),
             "L1": Multivector.vector(2, [1, 1], RING_Z)}
    for name, want in table.items():
        model, ds = annulus_fixture(name)
        c2 = contact_element(ds, ring=RING_F2,
                             basis=model.basis_plus(RING_F2)).value
        assert c2 == Multivector(2, dict(want.terms), RING_F2)
        cz = contact_element(ds, ring=RING_Z,
                             basis=model.basis_plus(RING_Z)).value
        assert cz in (want, want.scale(-1))

    # welding the eight-suture disk to itself: the morphism swallows one
    # suture and sends the top wedge of the curve basis to the top wedge
    ds = chord_to_dividing_set(ChordDiagram.parse("1-8,2-3,4-5,6-7"))
    host = ds.surface
    g = glue(Gluing(host, (30, 0, 2, 4), (20, 18, 16, 14)))
    assert g.swallowed == (1,)
    b1, b3, b5 = disk_model(4).rebind(host).beta_plus
    g1 = chain_scale(chain_add(b3, b5), -1)
    g2 = dict(b3)
    g3 = chain_scale(b1, -1)
    hb = HomologyBasis(RelativeH1(host, host.marks["alpha_plus"]), RING_Z,
                       cycles=[g1, g2, g3])
    closed = chain_add(g2, g3, -1)
    rb = HomologyBasis(RelativeH1(g.result,
                                  sorted(g.result.marks["alpha_plus"])),
                       RING_Z,
                       cycles=[pushforward_class(g, g1),
                               pushforward_class(g, closed)])
    got = gluing_morphism(g, Multivector.top(3, RING_Z),
                          host_basis=hb, result_basis=rb)
    assert got == Multivector.top(2, RING_Z)

    _within(t0, 1.0)


@pytest.mark.acceptance(label="02 rank law on random surfaces")
def test_02_rank_law():
    t0 = time.perf_counter()
    rng = random.Random(DEFAULT_SEED)
    for _ in range(200):
        s = random_sutured_surface(rng)
        assert s.n_of_f() <= 8
        assert s.genus() <= 2
        assert len(s.boundary_circles()) <= 3
        length = s.n_of_f() - s.euler_characteristic()
        assert RelativeH1(s, sorted(s.marks["alpha_plus"])).rank == length
        for ring in (RING_F2, RING_Z):
            assert len(default_basis(s, ring).cycles) == length
    _within(t0, 10.0)


@pytest.mark.acceptance(label="03 Catalan counts")
def test_03_catalan_counts():
    t0 = time.perf_counter()
    for n in range(1, 9):
        assert len(enumerate_chord_diagrams(n)) == _catalan(n)
    _within(t0, 5.0)


@pytest.mark.acceptance(label="04 injectivity mod 2")
def test_04_injectivity_f2():
    t0 = time.perf_counter()
    for n in range(1, 7):
        seen = {}
        for cd in enumerate_chord_diagrams(n):
            key = frozenset(disk_contact_element(cd, RING_F2).value.terms)
            assert key not in seen, (
                f"{cd.render()} collides with {seen.get(key)}")
            seen[key] = cd.render()
        assert len(seen) == _catalan(n)
    _within(t0, 30.0)


@pytest.mark.acceptance(label="05 bypass relation")
def test_05_bypass_relation():
    t0 = time.perf_counter()
    built = 0
    for n in range(2, 6):
        for cd in enumerate_chord_diagrams(n):
            for a in range(1, 2 * n + 1):
                site = (a, a % (2 * n) + 1, (a % (2 * n) + 1) % (2 * n) + 1)
                try:
                    triple = bypass_triple_at(cd, site)
                except InvalidChordDiagramError:
                    continue
                built += 1
                f2 = [disk_contact_element(d, RING_F2).value
                      for d in triple.diagrams]
                assert (f2[0] + f2[1] + f2[2]).is_zero()
                z = [disk_contact_element(d, RING_Z).value
                     for d in triple.diagrams]
                assert any((z[0] + z[1].scale(e1) + z[2].scale(e2)).is_zero()
                           for e1 in (1, -1) for e2 in (1, -1))
    assert built > 0
    _within(t0, 60.0)


@pytest.mark.acceptance(label="06 gluing respects contact elements")
def test_06_gluing_respects_contact_elements():
    t0 = time.perf_counter()
    rng = random.Random(DEFAULT_SEED)
    corpus = random_glued_dividing_sets(rng, 200)
    assert len(corpus) == 200
    for ds, tau in corpus:
        g = glue(tau)
        assert check_respect(g, ds, ring=RING_F2)
        assert check_respect(g, ds, ring=RING_Z)
    _within(t0, 120.0)


@pytest.mark.acceptance(label="07 matchability equivalence")
def test_07_matchability_equivalence():
    t0 = time.perf_counter()
    pair_counts = {}
    for n in range(1, 7):
        diagrams = enumerate_chord_diagrams(n)
        pair_counts[n] = 0
        for cd1 in diagrams:
            for cd2 in diagrams:
                pair_counts[n] += 1
                oracle = matchable(cd1, cd2)
                assert oracle == matchable_via_wedge(cd1, cd2, RING_Z)
                assert oracle == matchable_via_wedge(cd1, cd2, RING_F2)
    assert pair_counts[6] == 17424
    _within(t0, 60.0)


@pytest.mark.acceptance(label="08 duality")
def test_08_duality():
    t0 = time.perf_counter()
    # one chord gives the rank-0 algebra where both identities read 1 = 1,
    # so the sweep starts at the first diagram with a basis class
    for n in range(2, 6):
        model = disk_model(n)
        for cd in enumerate_chord_diagrams(n):
            ds = chord_to_dividing_set(cd)
            assert duality_check(ds, model.rebind(ds.surface), RING_F2)
    for name in ("K+", "K-", "K0", "K1", "L0", "L1"):
        model, ds = annulus_fixture(name)
        assert duality_check(ds, model, RING_F2)
    _within(t0, 30.0)


@pytest.mark.acceptance(label="09 solid-torus criterion")
def test_09_solid_torus_criterion():
    t0 = time.perf_counter()
    checked = 0
    for n in (1, 2):
        for q in (1, 2, 3):
            if n * q > 6:
                continue
            for p in range(-3, 4):
                if math.gcd(p, q) != 1:
                    continue
                params = TorusParameters(n, p, q)
                for cd in enumerate_chord_diagrams(n * q):
                    checked += 1
                    pairing = solid_torus_tight(cd, params)
                    # oracle: the diagram rotated by 2np+1 sutures closes
                    # up with the mirror of the original to a single curve
                    oracle = matchable(rotate_diagram(cd, params.steps), cd)
                    assert pairing == oracle, (cd.render(), n, p, q)
    assert checked >= 600
    _within(t0, 60.0)


@pytest.mark.acceptance(label="10 axiom suite")
def test_10_axiom_suite():
    t0 = time.perf_counter()
    reports = run_axiom_suite(seed=DEFAULT_SEED)
    assert {r.axiom for r in reports} == {1, 2, 3, 4, 5}
    failures = [r.instance for r in reports if not r.verdict]
    assert not failures, failures
    _within(t0, 120.0)
