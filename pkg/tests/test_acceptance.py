"""End-to-end checks of the ten acceptance criteria at their stated limits.

A summary line per criterion is printed at the end of the run.
"""

import time
from itertools import combinations_with_replacement

import pytest

from matfound import catalog
from matfound.catalog import CATALOG
from matfound.constellation import all_modular_cuts, constellation, cut_of_extension, extend_by_cut, principal_cut
from matfound.constellation import trivial_cut, tutte_graph
from matfound.foundation import (
    _foundation,
    check_R_relations,
    classify,
    count_representations,
    cross_ratios_generate,
    foundation,
    fundamental_presentation,
    incidence_graph,
    minor_predicates,
)
from matfound.homology import _cut_obj, class_templates, homology_in_degree, search_l3, sigma_complex, simple_matroids
from matfound.pasture import (
    Morphism,
    automorphisms,
    find_isomorphism,
    fingerprint,
    hom_count,
    named,
    recognize,
    tensor,
)

FIELDS = ("F2", "F3", "F4", "F5", "F7", "F8")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def _fresh_foundation(name):
    _foundation.cache_clear()
    recognize.cache_clear()
    return foundation(catalog.get(name))


def _connected():
    return [n for n in CATALOG if catalog.get(n).is_connected()]


def _cuts(M):
    # every principal cut except the one at the bottom flat, which leaves no hyperplane
    bottom = M.closure(())
    return [trivial_cut(M)] + [principal_cut(M, F) for F in M.flats if F != bottom]


# -- 1 --------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_criterion_1_foundation_oracles():
    expect_iso = {"U2,4": "U", "C5": "U", "U2,5": "V", "U3,5": "V"}
    expect_equal = {"F7": "F2", "F7*": "F2", "U2,3": "F1pm", "MK4": "F1pm"}
    for name, label in {**expect_iso, **expect_equal}.items():
        with Timer() as t:
            rep = _fresh_foundation(name)
            rec = rep.recognition
        assert t.seconds < 5, (name, t.seconds)
        assert rec.name == {"F1pm": "F1±"}.get(label, label), name
        if name in expect_equal:
            assert rep.pasture == named(label), name
        else:
            assert find_isomorphism(named(label), rep.pasture) is not None
    assert fingerprint(foundation(catalog.get("U2,5")).pasture) == fingerprint(foundation(catalog.get("U3,5")).pasture)


# -- 2 --------------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_criterion_2_realization_counts():
    P = foundation(catalog.get("U2,4")).pasture
    assert [hom_count(P, named(q)) for q in ("F3", "F4", "F5", "F8")] == [1, 2, 3, 6]
    for name in CATALOG:
        P = foundation(catalog.get(name)).pasture
        if hom_count(P, named("F3")):
            assert hom_count(P, named("F8")) == hom_count(P, named("F4")) * hom_count(P, named("F5")), name
    with Timer() as t:
        for name in CATALOG:
            for q in FIELDS:
                c = count_representations(catalog.get(name), named(q))
                assert c.agree, (name, q, c)
    assert t.seconds < 60, t.seconds


# -- 3 --------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_criterion_3_path_theorem():
    with Timer() as t:
        for name in _connected():
            M = catalog.get(name)
            for cut in _cuts(M):
                assert tutte_graph(constellation(M, cut)).connected, (name, sorted(map(sorted, cut.flats)))
    assert t.seconds < 10, t.seconds
    for name in _connected():
        M = catalog.get(name)
        for cut in _cuts(M):
            assert str(homology_in_degree(sigma_complex(constellation(M, cut), 1), 0)) == "Z", name
    tau = constellation(catalog.get("U2,3+U2,3"))
    assert str(homology_in_degree(sigma_complex(tau, 1), 0)) == "Z^2"


# -- 4 --------------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_criterion_4_homotopy_theorem():
    with Timer() as t:
        for name in ("U2,4", "U2,5", "U3,4", "C5", "MK4", "MK23", "F7"):
            M = catalog.get(name)
            for cut in [trivial_cut(M)] + [principal_cut(M, F) for F in M.flats]:
                K = sigma_complex(constellation(M, cut), 2)
                assert homology_in_degree(K, 1).is_zero(), name
    assert t.seconds < 120, t.seconds
    m = class_templates()["2d"]
    tau = constellation(m.matroid, _cut_obj(m), m.marks)
    K = sigma_complex(tau, 2, exclude=("2d",))
    assert str(homology_in_degree(K, 1)) == "Z/2"


# -- 5 --------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_criterion_5_search_discovers_the_classes():
    assert [c.identifier for c in search_l3(3)] == ["0", "1", "2a", "2b"]
    with Timer() as t:
        found = search_l3(4)
    assert t.seconds < 300
    new = {c.identifier: c for c in found if c.via != "base"}
    assert set(new) == {"2c", "3a", "3b", "3c", "3d"}
    for k in ("3a", "3b", "3c", "3d"):
        assert str(new[k].h2) == "Z", k


@pytest.mark.criterion(5)
@pytest.mark.xfail(strict=True, reason="class 2c has H1 = Z and H2 = 0 below it; it re-enters through H1")
def test_criterion_5_class_2c_has_h2():
    new = {c.identifier: c for c in search_l3(4)}
    assert str(new["2c"].h2) == "Z"


# -- 6 --------------------------------------------------------------------------


@pytest.mark.criterion(6)
def test_criterion_6_excluded_minors():
    assert len(CATALOG) >= 15
    disagreements = []
    for name in CATALOG:
        M = catalog.get(name)
        P = foundation(M).pasture
        rec = foundation(M).recognition
        algebraic = {
            "binary": hom_count(P, named("F2")) > 0,
            "regular": rec.kind != "unrecognized" and rec.factors == (),
            "ternary": hom_count(P, named("F3")) > 0,
        }
        minors = minor_predicates(M)
        for key, value in algebraic.items():
            if value != minors[key]:
                disagreements.append((name, key))
    assert disagreements == []


# -- 7 --------------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_criterion_7_relation_suite():
    for name in CATALOG:
        M = catalog.get(name)
        res = check_R_relations(M)
        assert all(f == 0 for _, f in res.values()), (name, res)
        P, Q = fundamental_presentation(M).pasture, foundation(M).pasture
        assert fingerprint(P) == fingerprint(Q), name
        assert cross_ratios_generate(foundation(M)), name


# -- 8 --------------------------------------------------------------------------


def _second_forest(M):
    base = incidence_graph(M).forest
    for strategy, seed in [("dfs", 0)] + [("random", s) for s in range(20)]:
        if incidence_graph(M, strategy, seed).forest != base:
            return strategy, seed
    return None


@pytest.mark.criterion(8)
def test_criterion_8_structural_invariants():
    for name in CATALOG:
        M = catalog.get(name)
        P = foundation(M).pasture
        other = _second_forest(M)
        if other is None:
            # the incidence graph is itself a forest: only one spanning forest exists
            G = incidence_graph(M)
            assert len(G.edges) == len(G.forest), name
        else:
            Q = foundation(M, *other).pasture
            assert fingerprint(P) == fingerprint(Q) and find_isomorphism(P, Q) is not None, name
        D = foundation(M.dual()).pasture
        assert fingerprint(D) == fingerprint(P), name
        assert (D.mods, D.eps == D.one) == (P.mods, P.eps == P.one), name
    for a, b in [("U2,4", "U1,2"), ("U2,3", "U2,3"), ("U2,4", "U2,4"), ("F7-", "U2,3"), ("U2,5", "MK4")]:
        S = foundation(catalog.get(f"{a}+{b}")).pasture
        T = tensor(foundation(catalog.get(a)).pasture, foundation(catalog.get(b)).pasture)
        assert S.mods == T.mods and fingerprint(S) == fingerprint(T), (a, b)
        assert find_isomorphism(S, T) is not None, (a, b)
    small = [catalog.get(n) for n in CATALOG if catalog.get(n).n <= 5]
    small += [N for k in range(1, 6) for N in simple_matroids(k)]
    for M in small:
        for cut in all_modular_cuts(M):
            N = extend_by_cut(M, cut)
            assert cut_of_extension(N, M.n).flats == cut.flats


# -- 9 --------------------------------------------------------------------------


def _subgroup(gens, basis):
    group = {h.images: h for h in gens}
    frontier = list(gens)
    while frontier:
        f = frontier.pop()
        for g in gens:
            c = Morphism(f.source, f.target, tuple(f(g(b)) for b in basis))
            if c.images not in group:
                group[c.images] = c
                frontier.append(c)
    return list(group.values())


@pytest.mark.criterion(9)
def test_criterion_9_pasture_algebra():
    U = named("U")
    assert len(U.fundamental_elements()) == 6
    auts = automorphisms(U)
    assert len(auts) == 6
    basis = [tuple(int(i == j) for j in range(U.rank)) for i in range(U.rank)]
    by_order = {len(_subgroup([s], basis)): _subgroup([s], basis) for s in auts}
    by_order[6] = auts
    assert sorted(by_order) == [1, 2, 3, 6]
    names = {o: recognize(U.quotient([(h(b), b) for h in H for b in basis])).name for o, H in by_order.items()}
    assert names == {1: "U", 2: "D", 3: "H", 6: "F3"}
    panel = [named(q) for q in ("F2", "F3", "F4", "F5", "F7", "F8", "K", "S")]
    for a, b in combinations_with_replacement(("F2", "F3", "H", "D", "U"), 2):
        P, Q = named(a), named(b)
        T = tensor(P, Q)
        for F in panel:
            assert hom_count(T, F) == hom_count(P, F) * hom_count(Q, F), (a, b, F.name)


# -- 10 -------------------------------------------------------------------------


@pytest.mark.criterion(10)
def test_criterion_10_lee_scobee():
    checked = 0
    for name in CATALOG:
        flags = classify(catalog.get(name))
        if not flags.wlum:
            continue
        checked += 1
        if flags.orientable:
            assert set(flags.factors) <= {"D", "U"}, name
    assert checked >= 10
    assert classify(catalog.get("U2,4")).dressian == (0, 1)
