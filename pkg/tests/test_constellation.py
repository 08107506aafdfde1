from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from matfound import catalog
from matfound.catalog import CATALOG
from matfound.constellation import (
    CutError,
    PathError,
    all_modular_cuts,
    classify_elementary,
    complete_linear_subclass,
    constellation,
    cut_of_extension,
    extend_by_cut,
    find_tutte_path,
    is_tutte_path,
    principal_cut,
    saturate_cut,
    templates,
    trivial_cut,
    tutte_graph,
    validate_modular_cut,
)
from matfound.homology import simple_matroids
from matfound.matroid import is_isomorphic


def _is_modular_cut(M, fam):
    """Direct check from the rank function."""
    for F in fam:
        for G in M.flats:
            if F <= G and G not in fam:
                return False
    for F, G in combinations(fam, 2):
        if M.rank(F) + M.rank(G) == M.rank(F | G) + M.rank(F & G) and (F & G) not in fam:
            return False
    return True


def _brute_cuts(M):
    fl = list(M.flats)
    out = set()
    for mask in range(1, 1 << len(fl)):
        fam = frozenset(fl[i] for i in range(len(fl)) if mask >> i & 1)
        if _is_modular_cut(M, fam):
            out.add(fam)
    return out


@pytest.mark.parametrize("name", ["U1,2", "U2,3", "U2,4", "U3,4", "MK4", "U~2,3"])
def test_all_modular_cuts_matches_brute_force(name):
    M = catalog.get(name)
    found = [c.flats for c in all_modular_cuts(M)]
    assert len(found) == len(set(found))
    assert set(found) == _brute_cuts(M)


def test_u23_has_five_nonempty_cuts():
    # [TRIVIAL] {E}, three principal cuts at points, and all flats
    assert len(all_modular_cuts(catalog.get("U2,3"))) == 5


def test_validate_rejects_missing_meet():
    M = catalog.get("U2,3")
    with pytest.raises(CutError, match="modular meet"):
        validate_modular_cut(M, [{0}, {1}, {0, 1, 2}])


def test_validate_rejects_non_flat():
    with pytest.raises(CutError, match="not a flat"):
        validate_modular_cut(catalog.get("F7"), [{0, 1}])


def test_saturate_and_linear_subclass_agree():
    M = catalog.get("MK4")
    for cut in all_modular_cuts(M):
        assert complete_linear_subclass(M, cut.hyperplanes).flats == cut.flats
        assert saturate_cut(M, cut.flats) == cut.flats


def _small_matroids():
    out = [catalog.get(n) for n in CATALOG if catalog.get(n).n <= 5]
    out += [N for k in range(1, 5) for N in simple_matroids(k)]
    return out


@pytest.mark.parametrize("M", _small_matroids(), ids=repr)
def test_extension_round_trip(M):
    for cut in all_modular_cuts(M):
        N = extend_by_cut(M, cut)
        a = M.n
        assert N.minor((), {a})[0] == M
        # the new element lies in the closure of exactly the flats of the cut
        assert {F for F in M.flats if N.rank(F | {a}) == M.rank(F)} == cut.flats
        assert cut_of_extension(N, a).flats == cut.flats


@pytest.mark.parametrize("name", ["U2,4", "F7", "C5", "MK4"])
def test_deleting_and_extending_back(name):
    Mhat = catalog.get(name)
    for a in range(Mhat.n):
        M, back = Mhat.minor((), {a})
        N = extend_by_cut(M, cut_of_extension(Mhat, a))
        assert is_isomorphic(N, Mhat)


def test_empty_cut_is_rejected():
    M = catalog.get("U2,3")
    with pytest.raises(CutError):
        extend_by_cut(M, [])


def test_principal_cut_at_point_gives_parallel_element():
    M = catalog.get("U2,3")
    N = extend_by_cut(M, principal_cut(M, {0}))
    assert N.rank({0, 3}) == 1


def test_tutte_graph_of_disconnected_matroid_has_two_components():
    # hyperplanes from different summands meet in a decomposable flat
    tau = constellation(catalog.get("U2,3+U2,3"))
    G = tutte_graph(tau)
    assert len(G.vertices) == 6 and not G.connected
    assert [len(c) for c in G.components()] == [3, 3]


def test_tutte_graph_avoids_cut():
    M = catalog.get("U2,4")
    G = tutte_graph(constellation(M, principal_cut(M, {0})))
    assert frozenset({0}) not in G.vertices and len(G.vertices) == 3


CONNECTED = [n for n in CATALOG if catalog.get(n).is_connected() and catalog.get(n).r >= 2]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(CONNECTED), st.data())
def test_found_paths_are_tutte_paths(name, data):
    M = catalog.get(name)
    tau = constellation(M)
    X = data.draw(st.sampled_from(M.hyperplanes))
    Y = data.draw(st.sampled_from(M.hyperplanes))
    path = find_tutte_path(tau, frozenset(), X, Y)
    assert path[0] == X and path[-1] == Y
    assert is_tutte_path(tau, path)


def test_find_path_rejects_endpoint_in_cut():
    M = catalog.get("U2,4")
    tau = constellation(M, principal_cut(M, {0}))
    with pytest.raises(PathError, match="endpoint in cut"):
        find_tutte_path(tau, frozenset(), {0}, {1})


@pytest.mark.parametrize("T", templates(), ids=lambda T: f"type{T.type}")
def test_each_template_classifies_its_own_path(T):
    marks = ()
    tau = constellation(T.N, T.cut, marks)
    path = list(T.path) + [T.path[0]]
    c = classify_elementary(tau, path)
    assert c is not None
    assert c.type == T.type or T.type in c.alternatives
    assert c.extended_type == T.extended or T.type in c.alternatives


def test_classify_rejects_open_path():
    tau = constellation(catalog.get("U2,4"))
    with pytest.raises(PathError, match="not closed"):
        classify_elementary(tau, [{0}, {1}, {2}])


def test_long_cycle_is_not_elementary():
    # five hyperplanes around the bottom of U2,5 form no template
    tau = constellation(catalog.get("U2,5"))
    assert classify_elementary(tau, [{0}, {1}, {2}, {3}, {4}, {0}]) is None


def test_trivial_cut_is_valid():
    for name in CATALOG:
        M = catalog.get(name)
        assert _is_modular_cut(M, trivial_cut(M).flats)
