import pytest
from hypothesis import given, settings, strategies as st

from matfound import catalog
from matfound.constellation import constellation, principal_cut
from matfound.homology import (
    LEVELS,
    canonical_key,
    class_templates,
    complex_from_faces,
    homology,
    homology_in_degree,
    homology_of_complex,
    order_complex,
    search_l3,
    sigma_complex,
    simple_matroids,
)
from matfound.matroid import MatroidError

# standard triangulations
RP2 = [(1, 2, 4), (1, 2, 6), (1, 3, 4), (1, 3, 5), (1, 5, 6), (2, 3, 5), (2, 3, 6), (2, 4, 5), (3, 4, 6), (4, 5, 6)]
TORUS = [(i % 7, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i % 7, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
SPHERE = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def _groups(K, top=None):
    return [str(h) for h in homology(K, top)]


@pytest.mark.parametrize(
    "facets, expected",
    [
        ([(0, 1), (1, 2), (0, 2)], ["Z", "Z"]),  # [TRIVIAL] circle
        (SPHERE, ["Z", "0", "Z"]),  # [TRIVIAL] 2-sphere
        (RP2, ["Z", "Z/2", "0"]),  # [DERIVED] 6-vertex projective plane
        (TORUS, ["Z", "Z^2", "Z"]),  # [DERIVED] 7-vertex torus
        ([(0,), (1,), (2,)], ["Z^3"]),
    ],
)
def test_known_spaces(facets, expected):
    assert _groups(complex_from_faces(facets)) == expected


def test_rp2_is_a_closed_surface():
    K = complex_from_faces(RP2)
    assert K.f_vector() == [6, 15, 10]
    assert K.euler_characteristic() == 1


facet_lists = st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=8)


@settings(max_examples=120, deadline=None)
@given(facet_lists)
def test_euler_characteristic_from_betti_numbers(facets):
    K = complex_from_faces(facets)
    assert sum((-1) ** h.degree * h.rank for h in homology(K)) == K.euler_characteristic()


@settings(max_examples=80, deadline=None)
@given(facet_lists, st.randoms(use_true_random=False))
def test_homology_invariant_under_relabeling(facets, rnd):
    K = complex_from_faces(facets)
    perm = list(range(len(K.labels)))
    rnd.shuffle(perm)
    assert _groups(K.relabel(perm)) == _groups(K)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sets(st.integers(0, 5), max_size=4), min_size=1, max_size=7))
def test_order_complex_with_top_is_a_cone(sets):
    # adding a maximum makes the poset contractible
    labels = [frozenset(s) for s in {frozenset(s) for s in sets}] + ["top"]

    def less(i, j):
        a, b = labels[i], labels[j]
        return b == "top" and a != "top" or (a != "top" and b != "top" and a < b)

    hs = homology(order_complex(labels, less))
    assert str(hs[0]) == "Z" and all(h.is_zero() for h in hs[1:])


def test_degree_out_of_range():
    K = complex_from_faces(SPHERE)
    with pytest.raises(MatroidError):
        homology_of_complex(K, 3)
    assert homology_in_degree(K, 3).is_zero()


def test_class_templates_are_pairwise_distinct():
    keys = [canonical_key(m) for m in class_templates().values()]
    assert len(set(keys)) == len(keys)


def test_levels_are_nested():
    assert set(LEVELS[0]) <= set(LEVELS[1]) <= set(LEVELS[2])


@pytest.mark.parametrize("k, count", [(1, 1), (2, 1), (3, 2), (4, 4), (5, 9)])
def test_simple_matroid_counts(k, count):
    # [DERIVED] simple matroids on k elements up to isomorphism (OEIS A002773)
    assert len(simple_matroids(k)) == count


def test_sigma1_of_disjoint_triangles_has_two_components():
    tau = constellation(catalog.get("U2,3+U2,3"))
    assert str(homology_in_degree(sigma_complex(tau, 1), 0)) == "Z^2"


@pytest.mark.parametrize("name", ["U2,3", "U2,4", "MK4"])
def test_sigma2_simply_connected_small(name):
    M = catalog.get(name)
    for cut in [None] + [principal_cut(M, F) for F in M.flats_of_rank(1)]:
        K = sigma_complex(constellation(M, cut), 2)
        assert str(homology_in_degree(K, 0)) == "Z"
        assert homology_in_degree(K, 1).is_zero()


def test_excluding_2d_from_its_own_constellation_gives_rp2_homology():
    from matfound.homology import _cut_obj

    m = class_templates()["2d"]
    tau = constellation(m.matroid, _cut_obj(m), m.marks)
    assert str(homology_in_degree(sigma_complex(tau, 2, exclude=("2d",)), 1)) == "Z/2"


def test_search_with_three_atoms_adds_nothing():
    assert [c.identifier for c in search_l3(3)] == ["0", "1", "2a", "2b"]


def test_search_rejects_large_input():
    with pytest.raises(MatroidError):
        search_l3(6)
